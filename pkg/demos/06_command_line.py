"""
Driving the command line from a script
======================================

Families are stored as JSON manifests with float64 payloads; every command
writes a JSON report and signals its verdict through the exit status.
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from compactkit import FunctionFamily
from compactkit.cli import main
from compactkit.io import save_family

x = -4 + 0.125 * (np.arange(64) + 0.5)
F = FunctionFamily.from_arrays([np.exp(-((x - s) / 0.6) ** 2) for s in (0.0, 0.25, 0.5)],
                               spacing=0.125, origin=[-4.0], labels=["a", "b", "c"])

with tempfile.TemporaryDirectory() as tmp:
    manifest = save_family(F, Path(tmp) / "bumps.json")
    out = Path(tmp) / "report.json"
    for args in (["certify", "--p", "1", "--epsilon", "0.6"],
                 ["certify", "--p", "1", "--epsilon", "0.6", "--rho-grid", "0.05"],
                 ["fourier", "--p", "3", "--epsilon", "0.1"]):
        code = main(args[:1] + ["--family", str(manifest), "--output", str(out)] + args[1:])
        rep = json.loads(out.read_text())
        print(" ".join(args), "-> exit", code, rep["status"], rep.get("error", {}).get("modulus", ""))
