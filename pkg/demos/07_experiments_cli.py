"""Experiment harness and command line.

Everything the harness writes is CSV with a versioned schema comment on
the first line, plus JSON model files and a ``meta.json`` sidecar that
holds the only timestamp.  The same commands are available as
``moeadlla <command>`` or ``python -m moeadlla <command>``.
"""

import subprocess
import sys
import tempfile
from pathlib import Path

from moeadlla import harness

small = {"n": "10", "population": "30", "generations": "80", "neighborhood_size": "10", "replicates": "2"}

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)

    cfg = harness.make_config({**small, "out": str(tmp / "run"), "gamma": "1e-3"})
    harness.cmd_run(cfg)
    reports = harness.read_table(tmp / "run" / "reports.csv")
    print("schema:", reports.schema)
    for row in reports.rows:
        print("  ", dict(zip(reports.header[:6], row[:6])))

    # same experiment through the CLI, with a config file and an override
    conf = tmp / "sweep.cfg"
    conf.write_text("\n".join(f"{k} = {v}" for k, v in small.items()) + "\ngamma = 1e-4, 5\n")
    cmd = [sys.executable, "-m", "moeadlla", "sweep", "--config", str(conf), "--problem", "MOZDT1", "--out", str(tmp / "sweep")]
    done = subprocess.run(cmd, capture_output=True, text=True)
    print("\n$ moeadlla sweep ... -> exit", done.returncode, done.stdout.strip())
    sweep = harness.read_table(tmp / "sweep" / "sweep.csv")
    for row in sweep.rows:
        print("  ", dict(zip(sweep.header, row)))

    bad = subprocess.run([sys.executable, "-m", "moeadlla", "sweep", "--gamma", "1e-3"], capture_output=True, text=True)
    print("\nsingle-gamma sweep -> exit", bad.returncode, bad.stderr.strip())
