import json
from pathlib import Path

import pytest

from spectral_reasoner.cli import main
from spectral_reasoner.graph_io import load_graph
from spectral_reasoner.merge import plan_merge, similarity_matrix
from spectral_reasoner.pipeline import embed_stage
from spectral_reasoner.providers import HashEmbeddingProvider

from conftest import FIXTURES

DEMO = str(FIXTURES / "demo_graph.jsonl")
KG = str(FIXTURES / "demo_kg.jsonl")
CONFIG = str(FIXTURES / "demo_config.json")
GOLDEN = Path(__file__).parent / "data" / "golden_report.json"

PIPELINE_ARTIFACTS = ["graph_refined.jsonl", "filter.json",
                      "conclusions.jsonl", "report.json"]


def run_demo(out_dir, extra=()):
    rc = main(["run", "--input", DEMO, "--kg", KG, "--config", CONFIG,
               "--out-dir", str(out_dir), *extra])
    assert rc == 0
    return {name: (Path(out_dir) / name).read_bytes() for name in PIPELINE_ARTIFACTS}


def test_empty_graph_exits_zero(tmp_path):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    rc = main(["run", "--input", str(empty), "--out-dir", str(tmp_path / "out")])
    assert rc == 0
    lines = (tmp_path / "out" / "conclusions.jsonl").read_text().splitlines()
    assert json.loads(lines[-1])["nodes"] == 0


def test_demo_run_is_byte_identical(tmp_path):
    first = run_demo(tmp_path / "one")
    second = run_demo(tmp_path / "two")
    assert first == second


def test_demo_report_matches_golden(tmp_path):
    artifacts = run_demo(tmp_path / "out")
    assert artifacts["report.json"] == GOLDEN.read_bytes()


def test_report_merge_count_matches_independent_plan(tmp_path):
    run_demo(tmp_path / "out")
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    cfg = json.loads(Path(CONFIG).read_text())
    graph = embed_stage(load_graph(DEMO), HashEmbeddingProvider(dim=cfg["embed-dim"]))
    plan = plan_merge(similarity_matrix(graph), cfg["merge-threshold"])
    assert report["merge"]["nodes_after"] == len(plan.clusters)


def test_cli_flag_overrides_config(tmp_path):
    loose = run_demo(tmp_path / "loose", extra=["--merge-threshold", "1.0"])
    report = json.loads(loose["report.json"])
    assert report["merge"]["nodes_after"] == report["merge"]["nodes_before"]


def test_normalized_laplacian_variant(tmp_path):
    artifacts = run_demo(tmp_path / "out", extra=["--laplacian", "norm"])
    report = json.loads(artifacts["report.json"])
    assert report["spectral"]["laplacian"] == "norm"
    assert report["spectral"]["lambda_max"] <= 2 + 1e-9


def test_stage_laplacian_two_node_graph(tmp_path):
    graph = tmp_path / "g.jsonl"
    graph.write_text(
        '{"kind":"node","id":"a","text":"a","belief":0.5}\n'
        '{"kind":"node","id":"b","text":"b","belief":0.5}\n'
        '{"kind":"edge","premise":"a","hypothesis":"b"}\n')
    rc = main(["stage", "laplacian", "--input", str(graph),
               "--out-dir", str(tmp_path)])
    assert rc == 0
    rows = json.loads((tmp_path / "laplacian.json").read_text())
    assert rows == [[1, -1], [-1, 1]]


def test_stage_merge_delta_one_is_identity(tmp_path):
    rc = main(["stage", "embed", "--input", DEMO, "--config", CONFIG,
               "--out-dir", str(tmp_path)])
    assert rc == 0
    embedded = tmp_path / "graph_embedded.jsonl"
    rc = main(["stage", "merge", "--input", str(embedded), "--config", CONFIG,
               "--merge-threshold", "1.0", "--out-dir", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "graph_merged.jsonl").read_bytes() == embedded.read_bytes()


def test_unknown_stage_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["stage", "nonsense", "--input", DEMO, "--out-dir", str(tmp_path)])
    assert exc.value.code != 0


def test_missing_input_maps_to_input_error_exit_code(tmp_path):
    rc = main(["run", "--input", str(tmp_path / "nope.jsonl"),
               "--out-dir", str(tmp_path)])
    assert rc == 3


def test_staged_run_reproduces_pipeline_artifacts(tmp_path):
    pipeline = run_demo(tmp_path / "full")
    s = tmp_path / "staged"
    s.mkdir()
    base = ["--config", CONFIG, "--out-dir", str(s)]

    assert main(["stage", "embed", "--input", DEMO, *base]) == 0
    assert main(["stage", "merge", "--input", str(s / "graph_embedded.jsonl"), *base]) == 0
    assert main(["stage", "score", "--input", str(s / "graph_merged.jsonl"), *base]) == 0
    assert main(["stage", "filter", "--input", str(s / "graph_scored.jsonl"), *base]) == 0
    assert main(["stage", "align", "--input", str(s / "graph_filtered.jsonl"),
                 "--kg", KG, *base]) == 0
    assert main(["stage", "spectral", "--input", str(s / "graph_refined.jsonl"), *base]) == 0
    assert main(["stage", "threshold", "--input", str(s / "graph_refined.jsonl"),
                 "--signal", str(s / "signal.json"), *base]) == 0

    assert (s / "graph_refined.jsonl").read_bytes() == pipeline["graph_refined.jsonl"]
    assert (s / "conclusions.jsonl").read_bytes() == pipeline["conclusions.jsonl"]
    signal = json.loads((s / "signal.json").read_text())
    assert signal["filter"] == json.loads(pipeline["filter.json"])
