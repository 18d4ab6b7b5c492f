#!/usr/bin/env python3
"""Run the bundled demo fixture end to end and print the stage report."""

import sys
from pathlib import Path

from spectral_reasoner.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "demo_out"
    rc = main(["run",
               "--input", str(ROOT / "fixtures" / "demo_graph.jsonl"),
               "--kg", str(ROOT / "fixtures" / "demo_kg.jsonl"),
               "--config", str(ROOT / "fixtures" / "demo_config.json"),
               "--out-dir", out_dir])
    if rc == 0:
        print((Path(out_dir) / "report.json").read_text())
    sys.exit(rc)
