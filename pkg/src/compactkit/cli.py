"""``compactkit`` command line front end.

Exit status: 0 certified / computed, 2 not certified at the tabulated
resolution (the report names the failing modulus), 1 error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .bv import BVFunction, helly_select, verify_selection
from .errors import CompactKitError, DimensionError, NotCertified
from .fourier import pego_certify
from .io import load_family, write_json_atomic
from .kolmogorov import greedy_cover, kr_certify
from .moduli import family_moduli
from .sobolev import rk_certify, wkp_family_reduce

COMMANDS = ("moduli", "cover", "certify", "fourier", "helly", "sobolev")
EXIT_OK, EXIT_ERROR, EXIT_NOT_CERTIFIED = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    family_path: str
    output_path: str
    p: float = 2.0
    q: float | None = None
    epsilon: float | None = None
    tau: float | None = None
    r_grid: list[float] | None = None
    rho_grid: list[float] | None = None
    embedding_constant: float = 1.0
    bound: float | None = None

    def validate(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not self.p >= 1:
            raise ValueError(f"p must be >= 1, got {self.p}")
        if self.command != "helly" and not (self.epsilon is not None and self.epsilon > 0):
            raise ValueError(f"{self.command} needs --epsilon > 0")
        if self.command == "helly" and not (self.tau is not None and self.tau > 0):
            raise ValueError("helly needs --tau > 0")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer)):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def _dispatch(cfg: RunConfig) -> tuple[str, dict]:
    F = load_family(cfg.family_path)
    eps = cfg.epsilon
    if cfg.command == "moduli":
        return "computed", family_moduli(F, cfg.p, eps, cfg.r_grid, cfg.rho_grid).to_dict()
    if cfg.command == "cover":
        cert = greedy_cover(F, cfg.p, eps)
        return "computed", {"covering_number": cert.size, "certificate": cert.to_dict()}
    if cfg.command == "certify":
        moduli = family_moduli(F, cfg.p, eps, cfg.r_grid, cfg.rho_grid)
        cert = kr_certify(F, cfg.p, eps, moduli=moduli)
        return "certified", {"certificate": cert.to_dict(), "moduli": moduli.to_dict()}
    if cfg.command == "fourier":
        return "certified", pego_certify(F, eps, cfg.rho_grid, p=cfg.p).to_dict()
    if cfg.command == "helly":
        if F.grid.dim != 1:
            raise DimensionError(f"helly needs one-dimensional members, got dim = {F.grid.dim}")
        seq = [BVFunction(f) for f in F.members]
        bound = cfg.bound
        if bound is None:
            bound = max(max(u.interior_variation, float(np.abs(u.values).max())) for u in seq)
        sel = helly_select(seq, cfg.tau, bound)
        gap, l1 = verify_selection(seq, sel)
        out = sel.to_dict()
        out.update(bound=bound, labels=[F.labels[i] for i in sel.indices],
                   verified_max_gap=gap, verified_max_l1=l1)
        return "computed", out
    # sobolev
    S = wkp_family_reduce(F, 1, cfg.p)
    q = cfg.p if cfg.q is None else cfg.q
    cert, diag = rk_certify(S, q, eps, cfg.embedding_constant, cfg.r_grid, cfg.rho_grid)
    return "certified", {"certificate": cert.to_dict(), "embedding": diag.to_dict()}


def run(cfg: RunConfig) -> tuple[dict, int]:
    """Execute one command; returns the report document and the exit status."""
    report = {"compactkit_version": __version__, "config": asdict(cfg)}
    try:
        cfg.validate()
        status, result = _dispatch(cfg)
        report.update(status=status, result=result)
        code = EXIT_OK
    except NotCertified as exc:
        report.update(status="not-certified",
                      error={"code": exc.code, "message": str(exc), "modulus": exc.modulus})
        code = EXIT_NOT_CERTIFIED
    except (CompactKitError, ValueError) as exc:
        report.update(status="error",
                      error={"code": getattr(exc, "code", "invalid-argument"), "message": str(exc),
                             "label": getattr(exc, "label", None)})
        code = EXIT_ERROR
    report["exit_status"] = code
    report["timestamp"] = datetime.now(timezone.utc).isoformat()
    return _jsonable(report), code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="compactkit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--family", required=True, help="family manifest (JSON)")
        cmd.add_argument("--p", type=float, default=2.0)
        cmd.add_argument("--q", type=float)
        cmd.add_argument("--epsilon", type=float)
        cmd.add_argument("--tau", type=float)
        cmd.add_argument("--r-grid", type=_float_list)
        cmd.add_argument("--rho-grid", type=_float_list,
                         help="translation radii; frequency radii for 'fourier'")
        cmd.add_argument("--embedding-constant", type=float, default=1.0)
        cmd.add_argument("--bound", type=float, help="helly: TV and sup bound (default: from data)")
        cmd.add_argument("--output", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command, family_path=args.family, output_path=args.output, p=args.p, q=args.q,
        epsilon=args.epsilon, tau=args.tau, r_grid=args.r_grid, rho_grid=args.rho_grid,
        embedding_constant=args.embedding_constant, bound=args.bound)
    report, code = run(cfg)
    write_json_atomic(report, cfg.output_path)
    status = report["status"]
    detail = report.get("error", {}).get("message", "")
    print(f"{cfg.command}: {status}" + (f" ({detail})" if detail else ""), file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
