import json
import subprocess
import sys

import numpy as np
import pytest

from compactkit.cli import RunConfig, main, run
from compactkit.grid import FunctionFamily
from compactkit.io import save_family

from helpers import bump_family


@pytest.fixture
def fam(tmp_path):
    def write(F, name="fam.json", inline=False):
        return str(save_family(F, tmp_path / name, inline=inline))
    return write


def report_of(path):
    with open(path) as fh:
        return json.load(fh)


def test_certify_singleton(fam, tmp_path):
    out = tmp_path / "r.json"
    code = main(["certify", "--family", fam(bump_family([0.0])), "--p", "2", "--epsilon", "0.1",
                 "--output", str(out)])
    rep = report_of(out)
    assert code == 0 and rep["exit_status"] == 0 and rep["status"] == "certified"
    assert len(rep["result"]["certificate"]["centers"]) == 1


def test_certify_coarse_rho(fam, tmp_path):
    F = bump_family([-1.0, 0.0, 1.0])
    h = F.grid.spacing
    out = tmp_path / "r.json"
    code = main(["certify", "--family", fam(F), "--p", "1", "--epsilon", "0.5",
                 "--rho-grid", f"{h / 4},{h / 2}", "--output", str(out)])
    rep = report_of(out)
    assert code == 2 and rep["status"] == "not-certified"
    assert rep["error"]["modulus"] == "translation"


def test_fourier_wrong_exponent(fam, tmp_path):
    out = tmp_path / "r.json"
    code = main(["fourier", "--family", fam(bump_family([0.0])), "--p", "3", "--epsilon", "0.1",
                 "--output", str(out)])
    rep = report_of(out)
    assert code == 1 and rep["error"]["code"] == "exponent-error"


def test_missing_epsilon_is_error(fam, tmp_path):
    rep, code = run(RunConfig("cover", fam(bump_family([0.0])), str(tmp_path / "r.json")))
    assert code == 1 and rep["status"] == "error"


def test_bad_manifest_names_member(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"members": [{"label": "a", "manifest": {
        "shape": [3], "origin": [0.0], "spacing": 1.0, "values": [1.0, 2.0]}}]}))
    rep, code = run(RunConfig("moduli", str(bad), str(tmp_path / "r.json"), epsilon=0.1))
    assert code == 1 and rep["error"]["code"] == "size-mismatch" and rep["error"]["label"] == "a"


def test_deterministic_and_config_embedded(fam, tmp_path):
    path = fam(bump_family([0.0, 0.5, 1.0]))
    docs = []
    out = tmp_path / "r.json"
    for _ in range(2):
        assert main(["certify", "--family", path, "--p", "1", "--epsilon", "0.8", "--output", str(out)]) == 0
        lines = out.read_text().splitlines()
        docs.append([line for line in lines if '"timestamp"' not in line])
    assert docs[0] == docs[1]
    cfg = report_of(out)["config"]
    assert cfg["command"] == "certify" and cfg["epsilon"] == 0.8 and cfg["family_path"] == path


@pytest.mark.parametrize("args", [
    ["moduli", "--epsilon", "0.2"],
    ["cover", "--epsilon", "0.2"],
    ["certify", "--epsilon", "0.5", "--p", "1"],
    ["fourier", "--epsilon", "0.1"],
    ["helly", "--tau", "0.5"],
])
def test_every_command_1d(fam, tmp_path, args):
    out = tmp_path / "r.json"
    code = main(args[:1] + ["--family", fam(bump_family([0.0, 0.25, 0.5]), inline=True)]
                + args[1:] + ["--output", str(out)])
    assert code == 0, report_of(out)


def test_sobolev_command(fam, tmp_path):
    F = bump_family([(0, 0), (0.33, 0)], n=24, width=1.0, dim=2)
    out = tmp_path / "r.json"
    code = main(["sobolev", "--family", fam(F), "--p", "1", "--q", "1.5", "--epsilon", "1.5",
                 "--output", str(out)])
    rep = report_of(out)
    assert code == 0, rep
    assert rep["result"]["embedding"]["status"] in {"CONSISTENT", "INCONSISTENT"}


def test_helly_rejects_2d(fam, tmp_path):
    F = FunctionFamily.from_arrays([np.zeros((2, 2))])
    rep, code = run(RunConfig("helly", fam(F), str(tmp_path / "r.json"), tau=0.1))
    assert code == 1 and rep["error"]["code"] == "dimension-error"


def test_console_entry_point(fam, tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run([sys.executable, "-m", "compactkit", "cover", "--family",
                           fam(bump_family([0.0])), "--epsilon", "0.1", "--output", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "cover: computed" in proc.stderr
    assert report_of(out)["result"]["covering_number"] == 1
