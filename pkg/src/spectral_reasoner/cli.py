"""Command line interface.

`spectral-reasoner run` executes the whole pipeline and writes all
artifacts to --out-dir; `spectral-reasoner stage NAME` runs a single stage
so stages can be composed through files. Config files are flat JSON whose
keys are the flag names (without leading dashes); explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, EngineError, InputError
from .pipeline import STAGE_ORDER, PipelineConfig, run_pipeline, run_stage

_CONFIG_KEYS = {
    "merge-threshold": ("merge_threshold", float),
    "entail-threshold": ("entail_threshold", float),
    "align-lambda": ("align_lambda", float),
    "align-radius": ("align_radius", int),
    "align-min-match": ("align_min_match", float),
    "cheb-order": ("cheb_order", int),
    "filter-file": ("filter_file", str),
    "fit-labels": ("fit_labels", str),
    "tau-out": ("tau_out", float),
    "laplacian": ("laplacian", str),
    "provider": ("provider", str),
    "provider-url": ("provider_url", str),
    "embed-dim": ("embed_dim", int),
    "fit-steps": ("fit_steps", int),
    "fit-lr": ("fit_lr", float),
}


def _add_config_flags(parser):
    parser.add_argument("--config", help="flat JSON config file; flags override it")
    parser.add_argument("--merge-threshold", type=float, dest="merge_threshold")
    parser.add_argument("--entail-threshold", type=float, dest="entail_threshold")
    parser.add_argument("--align-lambda", type=float, dest="align_lambda")
    parser.add_argument("--align-radius", type=int, dest="align_radius")
    parser.add_argument("--align-min-match", type=float, dest="align_min_match")
    parser.add_argument("--cheb-order", type=int, dest="cheb_order")
    parser.add_argument("--filter-file", dest="filter_file")
    parser.add_argument("--fit-labels", dest="fit_labels")
    parser.add_argument("--tau-out", type=float, dest="tau_out")
    parser.add_argument("--laplacian", choices=["unnorm", "norm"])
    parser.add_argument("--provider", choices=["offline", "http"])
    parser.add_argument("--provider-url", dest="provider_url")
    parser.add_argument("--embed-dim", type=int, dest="embed_dim")
    parser.add_argument("--fit-steps", type=int, dest="fit_steps")
    parser.add_argument("--fit-lr", type=float, dest="fit_lr")


def build_config(args) -> PipelineConfig:
    values = {}
    if args.config:
        try:
            raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a flat JSON object")
        for key, value in raw.items():
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"unknown config key {key!r}")
            attr, cast = _CONFIG_KEYS[key]
            values[attr] = cast(value)
    for attr, _ in _CONFIG_KEYS.values():
        flag_value = getattr(args, attr, None)
        if flag_value is not None:
            values[attr] = flag_value
    return PipelineConfig(**values)


def _write_artifacts(out_dir, artifacts):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, content in artifacts.items():
        (out / name).write_text(content, encoding="utf-8")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-reasoner",
        description="Refine a fact graph and propagate beliefs through "
                    "spectral filters on its Laplacian.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the full pipeline")
    run.add_argument("--input", required=True, help="graph JSONL")
    run.add_argument("--kg", help="knowledge graph JSONL")
    run.add_argument("--out-dir", required=True)
    _add_config_flags(run)

    stage = sub.add_parser("stage", help="run a single stage")
    stage.add_argument("name", choices=list(STAGE_ORDER))
    stage.add_argument("--input", required=True, help="graph JSONL")
    stage.add_argument("--kg", help="knowledge graph JSONL (align stage)")
    stage.add_argument("--signal", help="signal JSON from the spectral stage")
    stage.add_argument("--out-dir", required=True)
    _add_config_flags(stage)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    stage_name = "setup"
    try:
        cfg = build_config(args)
        if args.command == "run":
            stage_name = "pipeline"
            result = run_pipeline(cfg, args.input, kg_path=args.kg)
            _write_artifacts(args.out_dir, result.artifacts)
        else:
            stage_name = args.name
            artifacts = run_stage(args.name, cfg, args.input, kg_path=args.kg,
                                  signal_path=args.signal)
            _write_artifacts(args.out_dir, artifacts)
        return 0
    except EngineError as exc:
        print(f"spectral-reasoner: error in stage {stage_name}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
