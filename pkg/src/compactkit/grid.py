"""Piecewise-constant functions on uniform grids.

A :class:`GridFunction` stands for the step function on R^n that takes
``values[i]`` on the cell ``origin + h*i + [0, h)^n`` and vanishes outside the
box.  All L^p integrals of such functions are finite sums, so norms,
distances and translation defects below are exact up to floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import EmptyFamily, GridMismatch, InvalidExponent


def check_exponent(p: float) -> float:
    p = float(p)
    if not p >= 1:
        raise InvalidExponent(f"exponent must satisfy p >= 1, got {p}")
    return p


@dataclass(frozen=True)
class Grid:
    """Uniform cell grid: ``shape`` cells per axis, low corner ``origin``, spacing ``h``."""

    shape: tuple[int, ...]
    origin: tuple[float, ...]
    spacing: float

    def __post_init__(self):
        shape = tuple(int(s) for s in self.shape)
        origin = tuple(float(o) for o in self.origin)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "spacing", float(self.spacing))
        if not shape:
            raise ValueError("grid needs at least one axis")
        if len(origin) != len(shape):
            raise ValueError("origin and shape differ in length")
        if any(s < 1 for s in shape):
            raise ValueError(f"every axis needs at least one cell, got shape {shape}")
        if not (self.spacing > 0 and math.isfinite(self.spacing)):
            raise ValueError(f"spacing must be positive, got {self.spacing}")

    @classmethod
    def regular(cls, shape, spacing, origin=None) -> "Grid":
        shape = tuple(np.atleast_1d(shape).tolist())
        if origin is None:
            origin = (0.0,) * len(shape)
        return cls(shape, tuple(np.atleast_1d(origin).tolist()), spacing)

    @property
    def dim(self) -> int:
        return len(self.shape)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def lengths(self) -> tuple[float, ...]:
        return tuple(s * self.spacing for s in self.shape)

    def axis_centers(self, axis: int) -> np.ndarray:
        return self.origin[axis] + self.spacing * (np.arange(self.shape[axis]) + 0.5)

    def center_radius(self) -> np.ndarray:
        """Euclidean distance from the origin of every cell center, shaped like the grid."""
        r2 = np.zeros(self.shape)
        for axis in range(self.dim):
            c = self.axis_centers(axis)
            r2 = r2 + (c**2).reshape([-1 if a == axis else 1 for a in range(self.dim)])
        return np.sqrt(r2)

    def max_radius(self) -> float:
        """Largest distance from the origin to a point of the box."""
        far = [max(abs(o), abs(o + L)) for o, L in zip(self.origin, self.lengths)]
        return float(np.linalg.norm(far))

    def expanded(self, lo: Sequence[int], hi: Sequence[int]) -> "Grid":
        """Grid with ``lo[j]`` extra cells below and ``hi[j]`` above on axis j."""
        shape = tuple(s + int(a) + int(b) for s, a, b in zip(self.shape, lo, hi))
        origin = tuple(o - int(a) * self.spacing for o, a in zip(self.origin, lo))
        return Grid(shape, origin, self.spacing)

    def compatible(self, other: "Grid") -> bool:
        return self == other


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Step function on ``grid``; values shaped like the grid, zero outside the box.

    Real values are the norm.  Complex values are accepted so that spectral
    work (single exponentials, inverse transforms) can reuse the container.
    """

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values)
        if not (np.issubdtype(v.dtype, np.floating) or np.iscomplexobj(v)):
            v = v.astype(np.float64)
        if v.size != self.grid.size:
            raise ValueError(f"{v.size} values for a grid of {self.grid.size} cells")
        v = np.array(v.reshape(self.grid.shape), copy=True)
        if not np.all(np.isfinite(v)):
            raise ValueError("grid function values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_values(cls, values, spacing=1.0, origin=None) -> "GridFunction":
        values = np.asarray(values)
        return cls(Grid.regular(values.shape, spacing, origin), values)

    @property
    def dim(self) -> int:
        return self.grid.dim

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.grid, values)

    def _other_values(self, other):
        if isinstance(other, GridFunction):
            if not self.grid.compatible(other.grid):
                raise GridMismatch(f"{self.grid} vs {other.grid}")
            return other.values
        return other

    def __add__(self, other):
        return self.with_values(self.values + self._other_values(other))

    def __sub__(self, other):
        return self.with_values(self.values - self._other_values(other))

    def __mul__(self, c):
        return self.with_values(self.values * c)

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_values(-self.values)


def _norm_of_array(values: np.ndarray, cell_volume: float, p: float) -> float:
    a = np.abs(values)
    if math.isinf(p):
        return float(a.max(initial=0.0))
    if p == 1:
        return float(cell_volume * a.sum())
    top = a.max(initial=0.0)
    if top == 0:
        return 0.0
    # scaled to avoid overflow for large p
    return float(top * (cell_volume * np.sum((a / top) ** p)) ** (1.0 / p))


def lp_norm(f: GridFunction, p: float) -> float:
    """``(h^n sum |f|^p)^(1/p)``; ``p = inf`` gives the sup norm."""
    p = check_exponent(p)
    return _norm_of_array(f.values, f.grid.cell_volume, p)


def lp_distance(f: GridFunction, g: GridFunction, p: float) -> float:
    p = check_exponent(p)
    if not f.grid.compatible(g.grid):
        raise GridMismatch(f"cannot compare functions on {f.grid} and {g.grid}")
    return _norm_of_array(f.values - g.values, f.grid.cell_volume, p)


def _shifted_array(v: np.ndarray, k: Sequence[int]) -> np.ndarray:
    # out[i] = v[i + k], zero where i + k leaves the array
    out = np.zeros_like(v)
    src, dst = [], []
    for kj, nj in zip(k, v.shape):
        kj = int(kj)
        if abs(kj) >= nj:
            return out
        if kj >= 0:
            src.append(slice(kj, nj))
            dst.append(slice(0, nj - kj))
        else:
            src.append(slice(0, nj + kj))
            dst.append(slice(-kj, nj))
    out[tuple(dst)] = v[tuple(src)]
    return out


def shift(f: GridFunction, k: Sequence[int]) -> GridFunction:
    """Translate by the lattice vector ``y = k*h``: ``result(x) = f(x + y)``.

    The grid is kept, so mass pushed out of the box is lost; use
    :func:`zero_extend` first when the full translate is needed.
    """
    k = np.atleast_1d(np.asarray(k, dtype=int))
    if k.shape != (f.dim,):
        raise ValueError(f"shift vector must have {f.dim} entries")
    return f.with_values(_shifted_array(f.values, k))


def zero_extend(f: GridFunction, lo: Sequence[int], hi: Sequence[int] | None = None) -> GridFunction:
    """Same function on a box padded with ``lo``/``hi`` zero cells per axis."""
    lo = [int(a) for a in np.broadcast_to(lo, (f.dim,))]
    hi = lo if hi is None else [int(b) for b in np.broadcast_to(hi, (f.dim,))]
    if min(lo + hi) < 0:
        raise ValueError("padding must be nonnegative")
    values = np.pad(f.values, list(zip(lo, hi)))
    return GridFunction(f.grid.expanded(lo, hi), values)


def restrict(f: GridFunction, grid: Grid) -> GridFunction:
    """Values of ``f`` on an aligned sub-box ``grid`` (zero where ``f`` has no cells)."""
    if grid.spacing != f.grid.spacing:
        raise GridMismatch("spacings differ")
    offset = [(o2 - o1) / f.grid.spacing for o1, o2 in zip(f.grid.origin, grid.origin)]
    idx = [round(t) for t in offset]
    if any(abs(t - i) > 1e-9 for t, i in zip(offset, idx)):
        raise GridMismatch("grids are not aligned")
    lo = [max(0, -i) for i in idx]
    hi = [max(0, i + s - n) for i, s, n in zip(idx, grid.shape, f.grid.shape)]
    big = zero_extend(f, lo, hi)
    sl = tuple(slice(i + a, i + a + s) for i, a, s in zip(idx, lo, grid.shape))
    return GridFunction(grid, big.values[sl])


def rescale(f: GridFunction, lam: int) -> GridFunction:
    """The dilation ``x -> f(x / lam)`` for an integer ``lam >= 1``.

    Each cell is replicated ``lam`` times per axis at unchanged spacing, and the
    origin moves to ``lam * origin``; the result represents the dilation
    exactly, so ``lp_norm`` scales by ``lam**(n/p)``.
    """
    lam = int(lam)
    if lam < 1:
        raise ValueError("scale factor must be a positive integer")
    v = f.values
    for axis in range(f.dim):
        v = np.repeat(v, lam, axis=axis)
    grid = Grid(tuple(lam * s for s in f.grid.shape),
                tuple(lam * o for o in f.grid.origin), f.grid.spacing)
    return GridFunction(grid, v)


class FunctionFamily:
    """Nonempty ordered collection of grid functions sharing one grid."""

    def __init__(self, members: Sequence[GridFunction], labels: Sequence[str] | None = None):
        members = list(members)
        if not members:
            raise EmptyFamily("a function family needs at least one member")
        grid = members[0].grid
        for i, m in enumerate(members):
            if not grid.compatible(m.grid):
                raise GridMismatch(f"member {i} lives on {m.grid}, expected {grid}")
        if labels is None:
            labels = [f"f{i}" for i in range(len(members))]
        labels = [str(s) for s in labels]
        if len(labels) != len(members):
            raise ValueError("one label per member is required")
        if len(set(labels)) != len(labels):
            raise ValueError("member labels must be unique")
        self.members = members
        self.labels = labels
        self.grid = grid

    @classmethod
    def from_arrays(cls, arrays, spacing=1.0, origin=None, labels=None) -> "FunctionFamily":
        arrays = [np.asarray(a, dtype=float) for a in arrays]
        if not arrays:
            raise EmptyFamily("a function family needs at least one member")
        grid = Grid.regular(arrays[0].shape, spacing, origin)
        return cls([GridFunction(grid, a) for a in arrays], labels)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[GridFunction]:
        return iter(self.members)

    def __getitem__(self, i) -> GridFunction:
        return self.members[i]

    def __repr__(self):
        return f"FunctionFamily({len(self)} members on {self.grid})"

    def stack(self) -> np.ndarray:
        """Member values as an array of shape ``(len(self), *grid.shape)``."""
        return np.stack([m.values for m in self.members])

    def map(self, fn) -> "FunctionFamily":
        return FunctionFamily([fn(m) for m in self.members], self.labels)
