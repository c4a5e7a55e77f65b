"""Bounded variation on the line: total variation, Jordan decomposition,
the L^1 translation bound and a finite-resolution Helly selection.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .errors import BoundsViolated, DimensionError, GridMismatch
from .grid import GridFunction
from .moduli import translation_defect


def _check_1d(f: GridFunction) -> GridFunction:
    if f.dim != 1:
        raise DimensionError(f"bounded-variation tools are one-dimensional, got dim = {f.dim}")
    return f


@dataclass(frozen=True, eq=False)
class BVFunction:
    """A 1-D grid function seen as a BV function on the line (zero outside ``[a, b]``)."""

    base: GridFunction

    def __post_init__(self):
        _check_1d(self.base)

    @classmethod
    def from_values(cls, values, spacing=1.0, origin=0.0) -> "BVFunction":
        return cls(GridFunction.from_values(np.asarray(values, dtype=float), spacing, [origin]))

    @property
    def values(self) -> np.ndarray:
        return self.base.values

    @property
    def support_interval(self) -> tuple[float, float]:
        a = self.base.grid.origin[0]
        return a, a + self.base.grid.lengths[0]

    @property
    def interior_variation(self) -> float:
        """Variation on ``[a, b]``: sum of jumps between neighbouring cells."""
        return float(np.abs(np.diff(self.values)).sum())

    @property
    def tv(self) -> float:
        """Variation on the whole line, including the jumps to zero at both ends."""
        v = self.values
        return self.interior_variation + float(abs(v[0]) + abs(v[-1]))


def _as_bv(u) -> BVFunction:
    return u if isinstance(u, BVFunction) else BVFunction(u)


def total_variation(u, boundary: bool = True) -> float:
    """Total variation of a step function; ``boundary=False`` restricts it to ``[a, b]``."""
    u = _as_bv(u)
    return u.tv if boundary else u.interior_variation


def jordan_decomposition(u) -> tuple[BVFunction, BVFunction]:
    """``u = v - w`` with ``v = u(a) + positive variation``, ``w = negative variation``."""
    u = _as_bv(u)
    d = np.diff(u.values)
    v = u.values[0] + np.concatenate([[0.0], np.cumsum(np.maximum(d, 0.0))])
    w = np.concatenate([[0.0], np.cumsum(np.maximum(-d, 0.0))])
    return BVFunction(u.base.with_values(v)), BVFunction(u.base.with_values(w))


def tv_translation_check(u, k: int) -> tuple[float, float]:
    """``(integral |u(x+y) - u(x)| dx, |y| TV(u))`` for ``y = k*h``."""
    u = _as_bv(u)
    k = int(k)
    defect = translation_defect(u.base, [k], 1)
    bound = abs(k) * u.base.grid.spacing * u.tv
    return defect, bound


@dataclass
class SelectionResult:
    """Indices whose members agree to within ``tau`` at every grid point."""

    indices: list[int]
    tau: float
    l1_bound: float
    bins_per_point: list[list[int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _pigeonhole(parts: np.ndarray, survivors: np.ndarray, lo: float, width: float):
    chosen_bins = []
    for x in range(parts.shape[1]):
        bins = np.floor((parts[survivors, x] - lo) / width).astype(int)
        values, counts = np.unique(bins, return_counts=True)
        best = values[np.argmax(counts)]  # np.unique sorts, so ties go to the lowest bin
        survivors = survivors[bins == best]
        chosen_bins.append(int(best))
    return survivors, chosen_bins


def helly_select(seq: Sequence, tau: float, M_check: float) -> SelectionResult:
    """Finite-resolution Helly selection by pigeonholing the Jordan parts.

    Every member must have ``TV <= M_check`` on its interval and
    ``sup |u| <= M_check``.  Grid points are processed left to right; at each
    point the survivors' increasing parts ``v`` are sorted into bins of width
    ``tau / 2`` and the fullest bin (lowest on ties) is kept.  The decreasing
    parts ``w`` are then binned the same way.  Any two selected members then
    differ by less than ``tau`` at every point.
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    us = [_as_bv(u) for u in seq]
    if not us:
        raise ValueError("empty sequence")
    grid = us[0].base.grid
    for i, u in enumerate(us):
        if u.base.grid != grid:
            raise GridMismatch(f"member {i} is on a different grid")
        tv, sup = u.interior_variation, float(np.abs(u.values).max())
        if tv > M_check or sup > M_check:
            raise BoundsViolated(
                f"member {i} has TV {tv:.6g} and sup {sup:.6g}, bound is {M_check:.6g}", member=i)

    parts = [jordan_decomposition(u) for u in us]
    V = np.stack([v.values for v, _ in parts])
    W = np.stack([w.values for _, w in parts])
    width = tau / 2
    # v = (u(a) + u(x) + TV[a,x]) / 2 lies in [-M, 3M/2]; w lies in [0, M]
    survivors, v_bins = _pigeonhole(V, np.arange(len(us)), -M_check, width)
    survivors, w_bins = _pigeonhole(W, survivors, 0.0, width)
    a, b = us[0].support_interval
    return SelectionResult(
        indices=[int(i) for i in survivors],
        tau=float(tau),
        l1_bound=float(tau * (b - a)),
        bins_per_point=[[vb, wb] for vb, wb in zip(v_bins, w_bins)],
    )


def verify_selection(seq: Sequence, result: SelectionResult) -> tuple[float, float]:
    """Re-check a selection; returns ``(max pointwise gap, max pairwise L1 distance)``.

    Raises ``ValueError`` if either exceeds its stated bound.
    """
    us = [_as_bv(u) for u in seq]
    idx = result.indices
    if not idx or any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError("selected indices must be nonempty and strictly increasing")
    vals = np.stack([us[i].values for i in idx])
    gap = float((vals.max(axis=0) - vals.min(axis=0)).max())
    h = us[0].base.grid.spacing
    l1 = max((float(h * np.abs(vals[i] - vals[j]).sum())
              for i in range(len(idx)) for j in range(i + 1, len(idx))), default=0.0)
    if gap > result.tau:
        raise ValueError(f"pointwise gap {gap} exceeds tau {result.tau}")
    if l1 > result.l1_bound:
        raise ValueError(f"L1 distance {l1} exceeds {result.l1_bound}")
    return gap, l1
