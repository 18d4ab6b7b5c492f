"""Entry point: `model-sidecar` starts uvicorn with env-based config."""

import uvicorn

from .app import create_app
from .config import from_env


def main() -> None:
    cfg = from_env()
    uvicorn.run(create_app(cfg), host=cfg.host, port=cfg.port, log_level="warning")


if __name__ == "__main__":
    main()
