"""Finite-difference Sobolev tools.

Derivatives are forward differences at the grid spacing.  By default a
difference along an axis drops one cell there; ``extend=True`` differences
the zero extension instead, so the jumps at the box boundary are kept and
integrals over R^n stay honest (this is the version used in translation
bounds and in the rescaled embedding inequality).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from ._parallel import pmap
from .certificate import CoverCertificate
from .errors import ExponentError, ExponentUndefined, NotCertified, PrerequisitesUnmet, ShapeError
from .grid import FunctionFamily, Grid, GridFunction, check_exponent, lp_norm
from .kolmogorov import kr_certify
from .moduli import default_r_grid, tail_mass, translation_defect


def _difference(f: GridFunction, axis: int, step: int = 1, extend: bool = False) -> GridFunction:
    h = f.grid.spacing * step
    v = f.values
    shape, origin = list(f.grid.shape), list(f.grid.origin)
    if extend:
        pad = [(0, 0)] * f.dim
        pad[axis] = (step, step)
        v = np.pad(v, pad)
        shape[axis] += step
        origin[axis] -= step * f.grid.spacing
    elif shape[axis] <= step:
        raise ShapeError(f"axis {axis} has {shape[axis]} cells, too short for a difference of stride {step}")
    else:
        shape[axis] -= step
    hi = [slice(None)] * f.dim
    lo = [slice(None)] * f.dim
    hi[axis] = slice(step, None)
    lo[axis] = slice(None, -step)
    d = (v[tuple(hi)] - v[tuple(lo)]) / h
    return GridFunction(Grid(tuple(shape), tuple(origin), f.grid.spacing), d)


def gradient(f: GridFunction, extend: bool = False, step: int = 1) -> list[GridFunction]:
    """Forward differences ``(f(x + s h e_j) - f(x)) / (s h)``, one per axis.

    ``step`` is the stride ``s`` in cells.  Without ``extend`` every component
    is ``s`` cells shorter along its own axis.
    """
    if not extend and min(f.grid.shape) < step + 1:
        raise ShapeError(f"every axis needs at least {step + 1} cells, got {f.grid.shape}")
    return [_difference(f, j, step, extend) for j in range(f.dim)]


def gradient_energy(f: GridFunction, p: float, extend: bool = True) -> float:
    """``integral |grad f|_p^p``, which equals ``sum_j ||d_j f||_p^p``."""
    p = check_exponent(p)
    return float(sum(lp_norm(g, p) ** p for g in gradient(f, extend=extend)))


def gradient_pnorm(f: GridFunction, p: float) -> GridFunction:
    """Cellwise ``|grad f|_p`` on the cells where every component is defined."""
    p = check_exponent(p)
    comps = gradient(f)
    common = tuple(s - 1 for s in f.grid.shape)
    acc = np.zeros(common)
    for g in comps:
        acc = acc + np.abs(g.values[tuple(slice(0, c) for c in common)]) ** p
    return GridFunction(Grid(common, f.grid.origin, f.grid.spacing), acc ** (1 / p))


def multi_indices(n: int, k: int) -> list[tuple[int, ...]]:
    """All ``alpha`` with ``|alpha| <= k``, by order, ``(1,0)`` before ``(0,1)``."""
    out = [a for a in itertools.product(range(k + 1), repeat=n) if sum(a) <= k]
    return sorted(out, key=lambda a: (sum(a), tuple(-x for x in a)))


def derivative(f: GridFunction, alpha) -> GridFunction:
    """``D^alpha f`` by repeated forward differences (support shrinks)."""
    for axis, order in enumerate(alpha):
        for _ in range(order):
            f = _difference(f, axis)
    return f


@dataclass
class SobolevFamily:
    base: FunctionFamily
    p: float
    k: int
    derivative_families: dict[tuple[int, ...], FunctionFamily] = field(default_factory=dict)

    def sobolev_norm(self, i: int) -> float:
        """``(sum_alpha ||D^alpha f_i||_p^p)^(1/p)``."""
        return sum(lp_norm(fam[i], self.p) ** self.p
                   for fam in self.derivative_families.values()) ** (1 / self.p)


def wkp_family_reduce(F: FunctionFamily, k: int, p: float) -> SobolevFamily:
    """One family of ``D^alpha`` members per multi-index ``|alpha| <= k``."""
    p = check_exponent(p)
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    if min(F.grid.shape) < k + 1:
        raise ShapeError(f"shape {F.grid.shape} too small for {k} differences")
    alphas = multi_indices(F.grid.dim, k)
    fams = pmap(lambda a: F.map(lambda f: derivative(f, a)), alphas)
    return SobolevFamily(F, p, k, dict(zip(alphas, fams)))


@dataclass
class WkpVerdict:
    certified: bool
    epsilon: float
    family_epsilon: float
    certificates: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)


def wkp_certify(S: SobolevFamily, eps: float, r_grid=None, rho_grid=None) -> WkpVerdict:
    """Certify each derivative family at ``eps / (#alpha)^(1/p)`` with :func:`kr_certify`."""
    e = eps / len(S.derivative_families) ** (1 / S.p)
    verdict = WkpVerdict(True, eps, e)
    for alpha, fam in S.derivative_families.items():
        try:
            verdict.certificates[alpha] = kr_certify(fam, S.p, e, r_grid, rho_grid)
        except NotCertified as exc:
            verdict.certified = False
            verdict.failures[alpha] = f"{exc.code}: {exc} [{exc.modulus}]"
    return verdict


def conjugate_exponent(p: float) -> float:
    """Hoelder conjugate ``p / (p - 1)``; ``inf`` for ``p = 1``."""
    return math.inf if p == 1 else p / (p - 1)


def gradient_translation_bound(f: GridFunction, k, p: float) -> tuple[float, float]:
    """``(integral |f(x+y) - f(x)|^p, |y|_{p'}^p integral |grad f|_p^p)`` at ``y = k h``.

    Both integrals run over R^n, so the gradient includes the boundary jumps of
    the zero extension.  For lattice shifts the discrete inequality
    ``defect <= bound`` holds exactly.
    """
    p = check_exponent(p)
    k = np.atleast_1d(np.asarray(k, dtype=int))
    if f.dim > 0 and min(f.grid.shape) < 2:
        raise ShapeError(f"every axis needs at least 2 cells, got {f.grid.shape}")
    y = np.abs(k) * f.grid.spacing
    ynorm = float(np.linalg.norm(y, ord=conjugate_exponent(p)))
    defect = translation_defect(f, k, p)
    return defect, ynorm**p * gradient_energy(f, p, extend=True)


def conjugate_sobolev_exponent(p: float, n: int) -> float:
    """``p*`` with ``1/p* = 1/p - 1/n``; defined for ``1 <= p < n``."""
    p = check_exponent(p)
    if not p < n:
        raise ExponentUndefined(f"conjugate Sobolev exponent needs p < n, got p = {p}, n = {n}")
    return p * n / (n - p)


@dataclass
class EmbeddingDiagnostic:
    """Two sides of the rescaled embedding inequality at the chosen ``lam``.

    ``lhs = lam^(n/q) ||f||_q`` and
    ``rhs = C (lam^n int|f|^p + lam^(n-p) int|grad f|_p^p)^(1/p)``;
    a member with ``lhs > rhs`` signals that the configured ``C`` is too small.
    """

    p: float
    q: float
    n: int
    p_star: float
    C: float
    lam: float
    lambda_condition_met: bool
    per_member: list[dict] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return all(m["consistent"] for m in self.per_member)

    @property
    def status(self) -> str:
        return "CONSISTENT" if self.consistent else "INCONSISTENT"

    def to_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "n": self.n, "p_star": self.p_star, "C": self.C,
                "lambda": self.lam, "lambda_condition_met": self.lambda_condition_met,
                "status": self.status, "per_member": self.per_member}


def joint_tail(f: GridFunction, R: float, p: float) -> float:
    """``integral_{|x|>R} (|f|^p + |grad f|_p^p)`` with the zero-extended gradient."""
    return tail_mass(f, R, p) + sum(tail_mass(g, R, p) for g in gradient(f, extend=True))


def choose_lambda(n: int, p: float, q: float, C: float, eps: float, gradient_bound: float,
                  max_doublings: int = 200) -> tuple[float, bool]:
    """Smallest ``lam = 2^j`` with ``C (lam^(n-p) G)^(1/p) <= eps lam^(n/q)``.

    ``G`` bounds ``int |grad f(x+y) - grad f(x)|_p^p`` over the family.  Works
    in logarithms; returns ``(lam, met)`` with ``met = False`` if the scan
    stopped at ``2^max_doublings``.
    """
    if gradient_bound <= 0:
        return 1.0, True
    for j in range(max_doublings + 1):
        log_lam = j * math.log(2)
        left = math.log(C) + ((n - p) * log_lam + math.log(gradient_bound)) / p
        right = math.log(eps) + n / q * log_lam
        if left <= right:
            return 2.0**j, True
    return 2.0**max_doublings, False


def rk_certify(S: SobolevFamily, q: float, eps: float, C: float, r_grid=None, rho_grid=None
               ) -> tuple[CoverCertificate, EmbeddingDiagnostic]:
    """Certify a bounded W^{1,p} family as totally bounded in L^q.

    The certificate rests on the directly computed L^q moduli (via
    :func:`kr_certify` with exponent ``q``) and is sound for any ``C``.  The
    embedding constant only feeds the diagnostic.
    """
    F, p = S.base, S.p
    n = F.grid.dim
    q = float(q)
    if S.k < 1:
        raise ExponentError("the embedding argument needs first derivatives (k >= 1)")
    if not p < n:
        raise ExponentError(f"need p < n, got p = {p}, n = {n}")
    p_star = conjugate_sobolev_exponent(p, n)
    if not p <= q < p_star:
        raise ExponentError(f"need p <= q < p* = {p_star:.6g}, got q = {q}")
    if not C > 0:
        raise ValueError("embedding constant must be positive")

    radii = default_r_grid(F.grid) if r_grid is None else [float(r) for r in r_grid]
    target = eps**p
    if not any(max(joint_tail(f, R, p) for f in F.members) < target for R in radii):
        raise PrerequisitesUnmet(
            f"no tabulated R brings the joint tail of |f|^p + |grad f|^p below eps^p = {target:.6g}",
            modulus="joint-tail")

    cert = kr_certify(F, q, eps, r_grid, rho_grid)

    energies = [gradient_energy(f, p, extend=True) for f in F.members]
    lam, met = choose_lambda(n, p, q, C, eps, 2**p * max(energies))
    rows = []
    for label, f, G in zip(F.labels, F.members, energies):
        lhs = lam ** (n / q) * lp_norm(f, q)
        rhs = C * (lam**n * lp_norm(f, p) ** p + lam ** (n - p) * G) ** (1 / p)
        rows.append({"label": label, "lhs": lhs, "rhs": rhs, "consistent": bool(lhs <= rhs)})
    diag = EmbeddingDiagnostic(p, q, n, p_star, C, lam, met, rows)
    cert.pipeline["embedding"] = diag.status
    return cert, diag
