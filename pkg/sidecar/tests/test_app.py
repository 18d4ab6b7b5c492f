import json
from pathlib import Path

import numpy as np
import pytest
from fastapi.testclient import TestClient

from model_sidecar.app import create_app
from model_sidecar.config import SidecarConfig

GOLDEN_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="module")
def client():
    cfg = SidecarConfig(embed_model="hash-8", nli_model="lexical", max_batch=4)
    return TestClient(create_app(cfg))


def test_healthz_reports_models(client):
    body = client.get("/healthz").json()
    assert body == {"embed_model": "hash-8", "nli_model": "lexical"}


def test_embed_schema_golden_bytes(client):
    resp = client.post("/embed", json={"texts": ["fire", "oxygen"]})
    assert resp.status_code == 200
    golden = (GOLDEN_DIR / "embed_golden.json").read_bytes()
    assert resp.content == golden


def test_entail_schema_golden_bytes(client):
    resp = client.post("/entail", json={"pairs": [["a b c", "a b"], ["x", "y"]]})
    assert resp.status_code == 200
    golden = (GOLDEN_DIR / "entail_golden.json").read_bytes()
    assert resp.content == golden


def test_embed_vectors_unit_norm(client):
    body = client.post("/embed", json={"texts": ["one fact", "two facts"]}).json()
    assert body["dim"] == 8
    for vec in body["vectors"]:
        assert abs(np.linalg.norm(vec) - 1.0) < 1e-6


def test_embed_same_text_twice_identical(client):
    body = client.post("/embed", json={"texts": ["repeat", "repeat"]}).json()
    assert body["vectors"][0] == body["vectors"][1]


def test_embed_order_aligned(client):
    texts = ["alpha", "beta", "gamma"]
    batch = client.post("/embed", json={"texts": texts}).json()["vectors"]
    for text, vec in zip(texts, batch):
        single = client.post("/embed", json={"texts": [text]}).json()["vectors"][0]
        assert vec == single


def test_entail_probs_in_range(client):
    body = client.post("/entail", json={
        "pairs": [["the sky is blue", "the sky has color"],
                  ["cats purr", "dogs bark"]]}).json()
    assert all(0.0 <= p <= 1.0 for p in body["probs"])
    assert len(body["probs"]) == 2


def test_oversized_batch_rejected_413(client):
    resp = client.post("/embed", json={"texts": ["x"] * 5})
    assert resp.status_code == 413


def test_malformed_json_rejected_400(client):
    resp = client.post("/embed", content=b"{not json",
                       headers={"content-type": "application/json"})
    assert resp.status_code == 400


def test_wrong_shape_rejected_400(client):
    assert client.post("/embed", json={"texts": "not a list"}).status_code == 400
    assert client.post("/entail", json={"pairs": [["only one"]]}).status_code == 400


def test_empty_inputs_rejected_400(client):
    assert client.post("/embed", json={"texts": []}).status_code == 400
    assert client.post("/embed", json={"texts": ["  "]}).status_code == 400
    assert client.post("/entail", json={"pairs": []}).status_code == 400
