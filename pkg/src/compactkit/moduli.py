"""Uniform norm bound, tail decay and translation modulus of a family.

Tail masses and translation defects are returned as p-th powers, in the same
form as the thresholds ``eps**p`` they are compared against.  Translation
suprema run over lattice shifts ``y = k*h`` only; the reported modulus is the
lattice modulus and is labelled as such.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ._parallel import pmap
from .errors import EmptyFamily, NotCertifiableAtResolution
from .grid import FunctionFamily, Grid, GridFunction, _shifted_array, check_exponent, lp_norm


def tail_mass(f: GridFunction, R: float, p: float) -> float:
    """``h^n * sum |f|^p`` over cells whose center lies farther than ``R`` from the origin."""
    p = check_exponent(p)
    if R < 0:
        raise ValueError("tail radius must be nonnegative")
    outside = f.grid.center_radius() > R
    return float(f.grid.cell_volume * np.sum(np.abs(f.values[outside]) ** p))


def lattice_shifts(dim: int, spacing: float, rho: float, half: bool = False) -> np.ndarray:
    """Integer vectors ``k`` with ``|k| * spacing <= rho``, as rows.

    With ``half=True`` only one of each pair ``k, -k`` is kept (translation
    defects are symmetric), together with ``k = 0``.
    """
    K = int(math.floor(rho / spacing + 1e-12))
    rng = range(-K, K + 1)
    out = []
    for k in itertools.product(rng, repeat=dim):
        if math.hypot(*k) * spacing > rho * (1 + 1e-12):
            continue
        if half:
            nz = [c for c in k if c != 0]
            if nz and nz[0] < 0:
                continue
        out.append(k)
    return np.array(out, dtype=int).reshape(-1, dim)


def _defects(stack: np.ndarray, shifts: np.ndarray, cell_volume: float, p: float) -> np.ndarray:
    """p-th power zero-extended translation defects, shape ``(members, shifts)``."""
    m, n = stack.shape[0], stack.ndim - 1
    if len(shifts) == 0:
        return np.zeros((m, 0))
    K = int(np.abs(shifts).max())
    big = np.pad(stack, [(0, 0)] + [(K, K)] * n)
    out = np.empty((m, len(shifts)))
    for s, k in enumerate(shifts):
        if not k.any():
            out[:, s] = 0.0
            continue
        moved = np.stack([_shifted_array(b, k) for b in big])
        d = np.abs(moved - big) ** p
        out[:, s] = cell_volume * d.reshape(m, -1).sum(axis=1)
    return out


def translation_defect(f: GridFunction, k, p: float) -> float:
    """``integral |f(x + k*h) - f(x)|^p dx`` over all of R^n (p-th power, nothing clipped)."""
    p = check_exponent(p)
    k = np.atleast_1d(np.asarray(k, dtype=int)).reshape(1, -1)
    if k.shape[1] != f.dim:
        raise ValueError(f"shift vector must have {f.dim} entries")
    return float(_defects(f.values[None], k, f.grid.cell_volume, p)[0, 0])


def translation_modulus(f: GridFunction, rho: float, p: float) -> float:
    """Largest lattice translation defect over ``|k*h| <= rho`` (p-th power)."""
    p = check_exponent(p)
    shifts = lattice_shifts(f.dim, f.grid.spacing, rho, half=True)
    return float(_defects(f.values[None], shifts, f.grid.cell_volume, p).max(initial=0.0))


def default_r_grid(grid: Grid) -> list[float]:
    """16 log-spaced radii up to the farthest point of the box."""
    top = grid.max_radius()
    lo = min(grid.spacing, top / 2) if top > 0 else grid.spacing
    return [float(r) for r in np.geomspace(lo, max(top, lo), 16)]


def default_rho_grid(grid: Grid) -> list[float]:
    h = grid.spacing
    return [h, 2 * h, 4 * h, 8 * h]


def _check_tabulation(values, name):
    values = [float(v) for v in values]
    if not values:
        raise ValueError(f"{name} must be nonempty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{name} must be strictly increasing")
    if values[0] < 0:
        raise ValueError(f"{name} must be nonnegative")
    return values


@dataclass
class ModuliReport:
    """Family suprema evaluated on tabulated radii.

    ``tail_profile`` holds ``(R, sup_f tail_mass(f, R))`` and
    ``translation_profile`` holds ``(rho, sup_f sup_{|k h| <= rho} defect)``,
    both as p-th powers.  ``tail_radius`` is the smallest tabulated R whose
    tail is below ``epsilon**p``; ``translation_rho`` the largest tabulated rho
    whose defect is.  Either may be ``None`` (not certified at this
    resolution).  Tail cells are selected by their center's distance.
    """

    p: float
    epsilon: float
    norm_bound: float
    tail_profile: list[tuple[float, float]]
    translation_profile: list[tuple[float, float]]
    tail_radius: float | None
    translation_rho: float | None
    member_norms: list[float] = field(default_factory=list)
    tail_argmax: list[int] = field(default_factory=list)
    translation_argmax: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["tail_profile"] = [list(t) for t in self.tail_profile]
        d["translation_profile"] = [list(t) for t in self.translation_profile]
        d["translation_kind"] = "lattice"
        d["tail_region"] = "cell centers with |x| > R"
        return d


def family_moduli(F: FunctionFamily, p: float, eps: float, r_grid=None, rho_grid=None) -> ModuliReport:
    p = check_exponent(p)
    if len(F) == 0:
        raise EmptyFamily("empty family")
    if not eps > 0:
        raise ValueError("epsilon must be positive")
    grid = F.grid
    r_grid = _check_tabulation(default_r_grid(grid) if r_grid is None else r_grid, "R grid")
    rho_grid = _check_tabulation(default_rho_grid(grid) if rho_grid is None else rho_grid, "rho grid")
    target = eps**p

    norms = pmap(lambda f: lp_norm(f, p), F.members)

    stack = F.stack()
    radius = grid.center_radius()
    powered = np.abs(stack) ** p
    tails = np.array([[grid.cell_volume * powered[i][radius > R].sum() for R in r_grid] for i in range(len(F))])

    shifts = lattice_shifts(grid.dim, grid.spacing, rho_grid[-1], half=True)
    chunks = pmap(lambda i: _defects(stack[i:i + 1], shifts, grid.cell_volume, p)[0], range(len(F)))
    defects = np.array(chunks)
    lengths = np.linalg.norm(shifts, axis=1) * grid.spacing if len(shifts) else np.zeros(0)

    tail_profile, tail_arg = [], []
    for j, R in enumerate(r_grid):
        i = int(np.argmax(tails[:, j]))
        tail_profile.append((R, float(tails[i, j])))
        tail_arg.append(i)
    trans_profile, trans_arg = [], []
    for rho in rho_grid:
        mask = lengths <= rho * (1 + 1e-12)
        per_member = defects[:, mask].max(axis=1, initial=0.0)
        i = int(np.argmax(per_member))
        trans_profile.append((rho, float(per_member[i])))
        trans_arg.append(i)

    tail_radius = next((R for R, t in tail_profile if t < target), None)
    translation_rho = next((rho for rho, d in reversed(trans_profile) if d < target), None)
    return ModuliReport(
        p=p,
        epsilon=float(eps),
        norm_bound=float(max(norms)),
        tail_profile=tail_profile,
        translation_profile=trans_profile,
        tail_radius=tail_radius,
        translation_rho=translation_rho,
        member_norms=[float(x) for x in norms],
        tail_argmax=tail_arg,
        translation_argmax=trans_arg,
    )


@dataclass
class SequenceCondition:
    rho: float
    head_count: int
    tail_rho: float

    def to_dict(self) -> dict:
        return asdict(self)


def sequence_condition(F: FunctionFamily, p: float, eps: float, rho_grid=None) -> SequenceCondition:
    """Two-stage translation condition for a sequence ``f_1, f_2, ...``.

    First pick ``tail_rho`` (a tabulated rho) and the head length ``N`` such that
    every member past index N has all lattice defects below ``eps**p`` for
    ``|y| <= tail_rho``; the rho with the shortest head wins, the largest such
    rho on ties.  Then shrink rho to the largest tabulated value ``<= tail_rho``
    at which the N head members pass as well.
    """
    p = check_exponent(p)
    if not eps > 0:
        raise ValueError("epsilon must be positive")
    grid = F.grid
    rho_grid = _check_tabulation(default_rho_grid(grid) if rho_grid is None else rho_grid, "rho grid")
    target = eps**p
    shifts = lattice_shifts(grid.dim, grid.spacing, rho_grid[-1], half=True)
    defects = _defects(F.stack(), shifts, grid.cell_volume, p)
    lengths = np.linalg.norm(shifts, axis=1) * grid.spacing if len(shifts) else np.zeros(0)
    # ok[i, j]: member i passes at rho_grid[j]
    ok = np.stack([defects[:, lengths <= rho * (1 + 1e-12)].max(axis=1, initial=0.0) < target
                   for rho in rho_grid], axis=1)

    m = len(F)
    heads = []
    for j in range(len(rho_grid)):
        failing = np.flatnonzero(~ok[:, j])
        heads.append(int(failing[-1]) + 1 if failing.size else 0)
    best = min(heads)
    if best == m:
        raise NotCertifiableAtResolution(
            "the last member of the sequence fails at every tabulated rho", modulus="translation")
    j0 = max(j for j in range(len(rho_grid)) if heads[j] == best)
    for j in range(j0, -1, -1):
        if ok[:best, j].all():
            return SequenceCondition(rho=rho_grid[j], head_count=best, tail_rho=rho_grid[j0])
    raise NotCertifiableAtResolution(
        f"no tabulated rho <= {rho_grid[j0]} controls the first {best} members", modulus="translation")
