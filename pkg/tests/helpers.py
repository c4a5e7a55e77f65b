"""Shared test utilities: family generators and an independent certificate re-check."""

import math

import numpy as np

from compactkit.classical import DiscreteMetricFamily, SequenceFamily
from compactkit.grid import FunctionFamily

# every certificate emitted during the session, with the object it covers
EMITTED = []


def record(cert, covered):
    EMITTED.append((cert, covered))


def recheck(cert, covered) -> float:
    """Max member-to-center distance recomputed from raw arrays."""
    worst = 0.0
    for i, c in enumerate(cert.assignment):
        if isinstance(covered, FunctionFamily):
            a, b = covered.members[i].values, covered.members[c].values
            vol = covered.grid.spacing ** covered.grid.dim
            d = float((vol * np.sum(np.abs(a - b) ** cert.p)) ** (1 / cert.p))
        elif isinstance(covered, SequenceFamily):
            n = covered.length
            a = np.zeros(n)
            b = np.zeros(n)
            a[:len(covered.members[i])] = covered.members[i]
            b[:len(covered.members[c])] = covered.members[c]
            d = float(np.sum(np.abs(a - b) ** covered.p) ** (1 / covered.p))
        elif isinstance(covered, DiscreteMetricFamily):
            d = float(np.max(np.abs(covered.members[i] - covered.members[c])))
        else:
            raise TypeError(f"unknown covered object {type(covered)}")
        worst = max(worst, d)
    return worst


def bump_family(centers, n=64, width=0.6, half=4.0, dim=1):
    """Gaussian bumps on [-half, half)^dim, cell-center sampled."""
    h = 2 * half / n
    x = -half + h * (np.arange(n) + 0.5)
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    arrays = []
    for c in centers:
        c = np.broadcast_to(np.asarray(c, dtype=float), (dim,))
        r2 = sum((g - cj) ** 2 for g, cj in zip(grids, c))
        arrays.append(np.exp(-r2 / width**2))
    return FunctionFamily.from_arrays(arrays, spacing=h, origin=[-half] * dim)


def finite_sup(values):
    return max((v for v in values if math.isfinite(v)), default=0.0)


def brute_defect(values, k, h, p):
    """integral |f(x + k h) - f(x)|^p by explicit cell enumeration (zero outside the box)."""
    values = np.asarray(values, dtype=float)
    k = tuple(int(c) for c in np.atleast_1d(k))
    shape = values.shape

    def at(idx):
        if all(0 <= i < n for i, n in zip(idx, shape)):
            return values[idx]
        return 0.0

    ranges = [range(-abs(kj), n + abs(kj)) for kj, n in zip(k, shape)]
    total = 0.0
    for idx in np.ndindex(*[len(r) for r in ranges]):
        cell = tuple(r[i] for r, i in zip(ranges, idx))
        moved = tuple(c + kj for c, kj in zip(cell, k))
        total += abs(at(moved) - at(cell)) ** p
    return h ** len(shape) * total


def optimal_cover_size(points, r, p):
    """Smallest set of members such that every member is within distance < r of one (exhaustive)."""
    import itertools

    pts = [np.asarray(x, dtype=float).ravel() for x in points]
    m = len(pts)
    close = [[float(np.sum(np.abs(a - b) ** p) ** (1 / p)) < r for b in pts] for a in pts]
    for size in range(1, m + 1):
        for subset in itertools.combinations(range(m), size):
            if all(any(close[i][c] for c in subset) for i in range(m)):
                return size
    return m


def random_step_family(rng, dim, m, size=12, support=6):
    """Members supported in a centered sub-box of a ``size^dim`` grid."""
    h = float(rng.uniform(0.2, 0.6))
    lo = (size - support) // 2
    arrays = []
    for _ in range(m):
        v = np.zeros((size,) * dim)
        block = tuple(slice(lo, lo + support) for _ in range(dim))
        smooth = rng.normal(size=(support,) * dim)
        for axis in range(dim):
            smooth = np.cumsum(smooth, axis=axis) / np.sqrt(support)
        v[block] = smooth
        arrays.append(v)
    return FunctionFamily.from_arrays(arrays, spacing=h, origin=[-size * h / 2] * dim)
