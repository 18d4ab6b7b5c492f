"""FastAPI application implementing the /embed and /entail wire protocol.

POST /embed  {"texts": [...]}            -> {"vectors": [[...]], "dim": d, "model": name}
POST /entail {"pairs": [[p, h], ...]}    -> {"probs": [...], "model": name}
GET  /healthz                            -> {"embed_model": ..., "nli_model": ...}

Responses are order-aligned with requests. Oversized batches get 413,
malformed or empty input gets 400. Models are loaded once at startup.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .config import SidecarConfig, from_env
from .models import load_embedder, load_nli


class EmbedRequest(BaseModel):
    texts: list[str]


class EntailRequest(BaseModel):
    pairs: list[tuple[str, str]]


def create_app(cfg: SidecarConfig | None = None) -> FastAPI:
    cfg = cfg or from_env()
    embedder = load_embedder(cfg.embed_model)
    nli = load_nli(cfg.nli_model)
    app = FastAPI(title="model-sidecar")

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": "malformed request"})

    def check_batch(items, what):
        if not items:
            return JSONResponse(status_code=400,
                                content={"error": f"empty {what} list"})
        if len(items) > cfg.max_batch:
            return JSONResponse(
                status_code=413,
                content={"error": f"batch of {len(items)} exceeds max {cfg.max_batch}"})
        return None

    @app.post("/embed")
    def embed(req: EmbedRequest):
        err = check_batch(req.texts, "texts")
        if err is not None:
            return err
        if any(not t.strip() for t in req.texts):
            return JSONResponse(status_code=400, content={"error": "empty text"})
        vectors = embedder.encode(req.texts)
        return {"vectors": [[float(v) for v in row] for row in vectors],
                "dim": embedder.dim, "model": embedder.name}

    @app.post("/entail")
    def entail(req: EntailRequest):
        err = check_batch(req.pairs, "pairs")
        if err is not None:
            return err
        if any(not p.strip() or not h.strip() for p, h in req.pairs):
            return JSONResponse(status_code=400, content={"error": "empty text in pair"})
        probs = nli.score([(p, h) for p, h in req.pairs])
        return {"probs": probs, "model": nli.name}

    @app.get("/healthz")
    def healthz():
        return {"embed_model": embedder.name, "nli_model": nli.name}

    return app
