"""Cube-average projection and cover certificates from tail and translation moduli.

Given a tail radius ``R`` and translation radius ``rho`` at which a family's
moduli are below ``eps**p``, the space is tiled by grid-aligned cubes of side
``s*h`` with ``s*h*sqrt(n) < rho`` covering the ball of radius ``R``.  The
projection ``P`` replaces a function by its cube averages (zero off the
cubes).  For such a tiling every member satisfies

    ||f - Pf||_p < (2^n + 1)^(1/p) * eps,

so two members whose projections are within ``eps`` are within
``(2 (2^n + 1)^(1/p) + 1) * eps`` of each other.  Netting the finite
dimensional projections and pulling back yields a verified cover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .certificate import CoverCertificate, finalize, greedy_net, pullback_cover
from .errors import NotCertifiableAtResolution, PrerequisitesUnmet, TilingMisaligned
from .grid import FunctionFamily, Grid, GridFunction, check_exponent, zero_extend
from .moduli import ModuliReport, _defects, family_moduli, lattice_shifts, tail_mass


@dataclass(frozen=True)
class CubeTiling:
    """Grid-aligned cubes of ``side_cells`` cells per axis.

    Cube ``m`` (a multi-index) covers cells ``[m*s, (m+1)*s)`` counted from
    ``anchor``; the tiling holds cubes ``start[j] <= m[j] < start[j] + counts[j]``.
    """

    anchor: tuple[float, ...]
    spacing: float
    side_cells: int
    start: tuple[int, ...]
    counts: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.anchor)

    @property
    def side(self) -> float:
        return self.side_cells * self.spacing

    @property
    def cube_count(self) -> int:
        return int(np.prod(self.counts))

    @property
    def cube_volume(self) -> float:
        return self.side**self.dim

    def to_dict(self) -> dict:
        return {"anchor": list(self.anchor), "spacing": self.spacing, "side_cells": self.side_cells,
                "start": list(self.start), "counts": list(self.counts)}


def side_cells_for(rho: float, spacing: float, dim: int) -> int:
    """Largest ``s >= 1`` with ``s * spacing * sqrt(dim) < rho``, or 0 if there is none."""
    diag = spacing * math.sqrt(dim)
    s = int(math.floor(rho / diag))
    while s >= 1 and s * diag >= rho:
        s -= 1
    return s


def build_tiling(grid: Grid, R: float, rho: float) -> CubeTiling:
    """Tiling anchored at the grid origin covering the ball of radius ``R``.

    Cubes lying entirely outside the grid box are dropped: the functions
    vanish there, so the projection does not change.
    """
    n, h = grid.dim, grid.spacing
    s = side_cells_for(rho, h, n)
    if s < 1:
        raise NotCertifiableAtResolution(
            f"translation radius {rho:.6g} is not above the cell diagonal {h * math.sqrt(n):.6g}; "
            "no cube of whole cells fits", modulus="translation")
    L = s * h
    start, counts = [], []
    for o, N in zip(grid.origin, grid.shape):
        lo = math.floor((-R - o) / L)
        hi = math.floor((R - o) / L)
        lo, hi = max(lo, 0), min(hi, -(-N // s) - 1)
        start.append(lo)
        counts.append(max(0, hi - lo + 1))
    return CubeTiling(grid.origin, h, s, tuple(start), tuple(counts))


def _alignment(f_grid: Grid, T: CubeTiling) -> list[int]:
    if f_grid.dim != T.dim or f_grid.spacing != T.spacing:
        raise TilingMisaligned("tiling and function use different cell sizes or dimensions")
    offset = [(o - a) / T.spacing for o, a in zip(f_grid.origin, T.anchor)]
    idx = [round(t) for t in offset]
    if any(abs(t - i) > 1e-9 for t, i in zip(offset, idx)):
        raise TilingMisaligned("function cells do not nest in the tiling cubes")
    return idx


def _tiled_frame(grid: Grid, T: CubeTiling):
    """Padding that makes the grid contain every cube, and the cube block's slices."""
    off = _alignment(grid, T)
    s = T.side_cells
    lo_pad, hi_pad, block = [], [], []
    for j in range(grid.dim):
        a = T.start[j] * s - off[j]
        b = (T.start[j] + T.counts[j]) * s - off[j]
        lo = max(0, -a) if T.counts[j] else 0
        hi = max(0, b - grid.shape[j]) if T.counts[j] else 0
        lo_pad.append(lo)
        hi_pad.append(hi)
        block.append(slice(a + lo, b + lo))
    return lo_pad, hi_pad, tuple(block)


def _cube_means(block: np.ndarray, counts, s: int) -> np.ndarray:
    """Means over each cube of an array whose trailing axes are ``counts * s`` cells long."""
    lead = block.shape[:block.ndim - len(counts)]
    split = list(lead)
    for c in counts:
        split += [c, s]
    r = block.reshape(split)
    axes = tuple(len(lead) + 2 * j + 1 for j in range(len(counts)))
    return r.mean(axis=axes)


def projection_P(f: GridFunction, T: CubeTiling) -> GridFunction:
    """Cube averages of ``f`` on every tiling cube, zero elsewhere.

    The result lives on the grid of ``f`` padded (if needed) so that every
    cube is representable; pad ``f`` with :func:`frame_for` to compare.
    """
    lo, hi, block = _tiled_frame(f.grid, T)
    ext = zero_extend(f, lo, hi)
    out = np.zeros_like(ext.values, dtype=float)
    if T.cube_count:
        means = _cube_means(ext.values[block], T.counts, T.side_cells)
        for j in range(T.dim):
            means = np.repeat(means, T.side_cells, axis=j)
        out[block] = means
    return GridFunction(ext.grid, out)


def frame_for(f: GridFunction, T: CubeTiling) -> GridFunction:
    """``f`` zero-extended to the grid on which :func:`projection_P` returns."""
    lo, hi, _ = _tiled_frame(f.grid, T)
    return zero_extend(f, lo, hi)


def projection_defect(f: GridFunction, T: CubeTiling, p: float) -> float:
    """``||f - Pf||_p``, exact for step functions."""
    p = check_exponent(p)
    Pf = projection_P(f, T)
    g = frame_for(f, T)
    diff = np.abs(g.values - Pf.values)
    if math.isinf(p):
        return float(diff.max(initial=0.0))
    return float((g.grid.cell_volume * np.sum(diff**p)) ** (1 / p))


def projection_coefficients(F: FunctionFamily, T: CubeTiling, p: float) -> np.ndarray:
    """Cube means scaled by ``|Q|^(1/p)``: the l^p distance of two rows is ``||Pf - Pg||_p``."""
    p = check_exponent(p)
    lo, hi, block = _tiled_frame(F.grid, T)
    stack = np.pad(F.stack(), [(0, 0)] + list(zip(lo, hi)))
    if not T.cube_count:
        return np.zeros((len(F), 0))
    means = _cube_means(stack[(slice(None),) + block], T.counts, T.side_cells)
    return means.reshape(len(F), -1) * T.cube_volume ** (1 / p)


def projection_defect_bound(n: int, p: float, eps: float) -> float:
    return (2**n + 1) ** (1 / p) * eps


def kr_contract_radius(n: int, p: float, eps: float) -> float:
    """Member distance guaranteed when projections are within ``eps``.

    ``||f-g|| <= ||f-Pf|| + ||Pf-Pg|| + ||Pg-g|| < (2 (2^n+1)^(1/p) + 1) eps``.
    """
    return (2 * (2**n + 1) ** (1 / p) + 1) * eps


def _lp_distance_fn(F: FunctionFamily, p: float):
    stack = F.stack()
    vol = F.grid.cell_volume

    def dist(i, j):
        d = np.abs(stack[i] - stack[j])
        return float((vol * np.sum(d**p)) ** (1 / p))
    return dist


def kr_certify(F: FunctionFamily, p: float, eps: float, r_grid=None, rho_grid=None,
               moduli: ModuliReport | None = None) -> CoverCertificate:
    """Verified cover of ``F`` in L^p built through the cube-average projection.

    Raises :class:`PrerequisitesUnmet` when no tabulated R or rho controls the
    moduli at ``eps`` and :class:`NotCertifiableAtResolution` when rho is too
    small for a cube of whole cells.  A family with a single distinct member
    is certified directly (one center, distance 0).
    """
    p = check_exponent(p)
    if not eps > 0:
        raise ValueError("epsilon must be positive")
    n = F.grid.dim
    if moduli is None:
        moduli = family_moduli(F, p, eps, r_grid, rho_grid)
    dist = _lp_distance_fn(F, p)

    if moduli.tail_radius is None or moduli.translation_rho is None:
        first = F.members[0].values
        if all(np.array_equal(first, g.values) for g in F.members[1:]):
            cert = CoverCertificate(eps, 0.0, [0], [0] * len(F), None, "Lp", p, list(F.labels),
                                    pipeline={"trivial": "single distinct member"})
            return finalize(cert, dist, F)
        missing = "tail" if moduli.tail_radius is None else "translation"
        profile = moduli.tail_profile if missing == "tail" else moduli.translation_profile
        raise PrerequisitesUnmet(
            f"no tabulated {'R' if missing == 'tail' else 'rho'} brings the {missing} modulus below "
            f"eps^p = {eps**p:.6g} (best {min(v for _, v in profile):.6g})", modulus=missing)

    T = build_tiling(F.grid, moduli.tail_radius, moduli.translation_rho)
    images = projection_coefficients(F, T, p)
    radius = kr_contract_radius(n, p, eps)
    cert = pullback_cover(images, eps, radius, None, ord=p, epsilon=eps, metric="Lp", p=p,
                          labels=F.labels)
    cert.pipeline = {
        "R": moduli.tail_radius,
        "rho": moduli.translation_rho,
        "cube_side_cells": T.side_cells,
        "cube_count": T.cube_count,
        "defect_bound": projection_defect_bound(n, p, eps),
        "max_projection_defect": max(projection_defect(f, T, p) for f in F.members),
    }
    return finalize(cert, dist, F)


def greedy_cover(F: FunctionFamily, p: float, eps: float) -> CoverCertificate:
    """First-fit net directly in L^p: every member within ``eps`` of its center."""
    p = check_exponent(p)
    points = F.stack().reshape(len(F), -1) * F.grid.cell_volume ** (1 / p)
    centers, assignment = greedy_net(points, eps, p)
    cert = CoverCertificate(eps, eps, centers, assignment, None, "Lp", p, list(F.labels),
                            pipeline={"method": "greedy"})
    return finalize(cert, _lp_distance_fn(F, p), F)


def covering_number(F: FunctionFamily, p: float, eps: float) -> int:
    """Size of the greedy ``eps``-net: an upper bound on the covering number."""
    return greedy_cover(F, p, eps).size


@dataclass
class ConverseReport:
    """Moduli of all members measured at the radii that work for the cover's centers.

    From an ``eps``-cover with centers ``g_j`` (``eps`` = the cover radius):
    ``tail(f, R)^(1/p) < 2 eps`` with ``R`` the largest center tail radius and
    ``defect(f, k)^(1/p) < 3 eps`` for ``|k h| <= rho``, the smallest center rho.
    """

    epsilon: float
    R: float | None
    rho: float | None
    tails: list[float] = field(default_factory=list)
    defects: list[float] = field(default_factory=list)

    @property
    def tail_holds(self) -> bool:
        return self.R is not None and all(t < 2 * self.epsilon for t in self.tails)

    @property
    def translation_holds(self) -> bool:
        return self.rho is not None and all(d < 3 * self.epsilon for d in self.defects)


def converse_bounds(F: FunctionFamily, cert: CoverCertificate, p: float, r_grid=None, rho_grid=None
                    ) -> ConverseReport:
    p = check_exponent(p)
    eps = cert.radius
    center_family = FunctionFamily([F.members[c] for c in cert.centers])
    Rs, rhos = [], []
    for g in center_family:
        m = family_moduli(FunctionFamily([g]), p, eps, r_grid, rho_grid)
        Rs.append(m.tail_radius)
        rhos.append(m.translation_rho)
    R = None if any(r is None for r in Rs) else max(Rs)
    rho = None if any(r is None for r in rhos) else min(rhos)
    report = ConverseReport(eps, R, rho)
    if R is not None:
        report.tails = [tail_mass(f, R, p) ** (1 / p) for f in F.members]
    if rho is not None:
        shifts = lattice_shifts(F.grid.dim, F.grid.spacing, rho, half=True)
        d = _defects(F.stack(), shifts, F.grid.cell_volume, p)
        report.defects = [float(x) ** (1 / p) for x in d.max(axis=1, initial=0.0)]
    return report
