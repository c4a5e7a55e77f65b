"""Fourier-tail compactness test in L^2 on the box viewed as a torus.

The transform is the unitary DFT scaled so that Plancherel reads
``||f||_2^2 = h^n * sum |c_m|^2``.  Coefficient ``m`` sits at physical
frequency ``xi = 2 pi m / L`` per axis (``L`` = axis length, ``m`` in the
centered integer range).  Translations are circular, which makes

    integral |f(x+y) - f(x)|^2 dx = h^n * sum |e^{i xi.y} - 1|^2 |c_m|^2

exact for lattice ``y = k*h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ExponentError, NotCertifiableAtResolution
from .grid import FunctionFamily, Grid, GridFunction
from .moduli import translation_defect


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    grid: Grid
    coefficients: np.ndarray = field(repr=False)
    real_input: bool = True

    @property
    def weight(self) -> float:
        """Plancherel factor: ``||f||_2^2 = weight * sum |c|^2``."""
        return self.grid.cell_volume

    def frequencies(self) -> list[np.ndarray]:
        return [2 * np.pi * np.fft.fftfreq(N, d=self.grid.spacing) for N in self.grid.shape]

    def frequency_norm(self) -> np.ndarray:
        """``|xi|`` for every coefficient, shaped like the grid."""
        r2 = np.zeros(self.grid.shape)
        for axis, xi in enumerate(self.frequencies()):
            r2 = r2 + (xi**2).reshape([-1 if a == axis else 1 for a in range(self.grid.dim)])
        return np.sqrt(r2)

    def energy(self) -> float:
        return float(self.weight * np.sum(np.abs(self.coefficients) ** 2))


def dft(f: GridFunction) -> SpectralFunction:
    c = np.fft.fftn(f.values, norm="ortho")
    return SpectralFunction(f.grid, c, not np.iscomplexobj(f.values))


def idft(S: SpectralFunction) -> GridFunction:
    v = np.fft.ifftn(S.coefficients, norm="ortho")
    return GridFunction(S.grid, v.real if S.real_input else v)


def spectral_tail(S: SpectralFunction, rho: float) -> float:
    """Energy at frequencies ``|xi| >= rho`` in Plancherel units."""
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    mask = S.frequency_norm() >= rho
    return float(S.weight * np.sum(np.abs(S.coefficients[mask]) ** 2))


def circular_shift(f: GridFunction, k) -> GridFunction:
    """``x -> f(x + k*h)`` with indices wrapped around the box."""
    k = np.atleast_1d(np.asarray(k, dtype=int))
    return f.with_values(np.roll(f.values, tuple(-k), axis=tuple(range(f.dim))))


def circular_defect(f: GridFunction, k) -> float:
    """Direct ``integral |f(x+y) - f(x)|^2`` for the circular shift ``y = k*h``."""
    g = circular_shift(f, k)
    return float(f.grid.cell_volume * np.sum(np.abs(g.values - f.values) ** 2))


def plancherel_defect(f: GridFunction, k, spectrum: SpectralFunction | None = None) -> float:
    """Circular-shift L^2 defect (squared) evaluated on the spectral side."""
    S = dft(f) if spectrum is None else spectrum
    k = np.atleast_1d(np.asarray(k, dtype=int))
    if k.shape != (f.dim,):
        raise ValueError(f"shift vector must have {f.dim} entries")
    y = k * f.grid.spacing
    phase = np.zeros(f.grid.shape)
    for axis, xi in enumerate(S.frequencies()):
        phase = phase + (xi * y[axis]).reshape([-1 if a == axis else 1 for a in range(f.dim)])
    factor = np.abs(np.exp(1j * phase) - 1) ** 2
    return float(S.weight * np.sum(factor * np.abs(S.coefficients) ** 2))


def all_circular_defects(S: SpectralFunction) -> np.ndarray:
    """Squared circular defects for every residue shift ``k mod shape`` at once.

    Uses ``defect(k) = 2 ||f||^2 - 2 h^n Re sum |c_m|^2 e^{2 pi i m.k / N}``.
    """
    power = np.abs(S.coefficients) ** 2
    corr = np.fft.ifftn(power).real * power.size
    return np.maximum(2 * S.weight * (power.sum() - corr), 0.0)


def _residue_lengths(grid: Grid) -> np.ndarray:
    """Length of the shortest lattice vector in each residue class ``k mod shape``."""
    r2 = np.zeros(grid.shape)
    for axis, N in enumerate(grid.shape):
        m = np.arange(N)
        d = np.minimum(m, N - m) * grid.spacing
        r2 = r2 + (d**2).reshape([-1 if a == axis else 1 for a in range(grid.dim)])
    return np.sqrt(r2)


def default_frequency_grid(grid: Grid, count: int = 16) -> list[float]:
    top = math.pi / grid.spacing * math.sqrt(grid.dim)
    bottom = 2 * math.pi / max(grid.lengths)
    return [float(r) for r in np.geomspace(bottom, top * 1.000001, count)]


@dataclass
class PegoReport:
    M: float
    rho: float | None
    y_bound: float
    epsilon: float
    per_member_tails: list[float]
    verified_max_defect: float = 0.0
    shifts_checked: int = 0
    zero_fill_gap: float = 0.0
    trivial: bool = False

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        if math.isinf(d["y_bound"]):
            d["y_bound"] = "inf"
        return d


def pego_certify(F: FunctionFamily, eps: float, rho_grid=None, p: float = 2.0) -> PegoReport:
    """Translation condition in L^2 from uniform spectral decay.

    Picks the smallest tabulated frequency radius ``rho`` with
    ``sup_f spectral_tail(f, rho) <= eps / 4`` and returns
    ``y_bound = sqrt(eps) / (rho * M)``, ``M = sup ||f||_2``.  Every circular
    lattice shift ``|k h| < y_bound`` is then checked to give squared defect
    ``< 2 eps``.  ``zero_fill_gap`` reports the largest difference between the
    circular and the zero-extended defect over the checked shifts.
    """
    if p != 2:
        raise ExponentError(f"the spectral criterion needs p = 2, got p = {p}")
    if not eps > 0:
        raise ValueError("epsilon must be positive")
    spectra = [dft(f) for f in F.members]
    norms = [math.sqrt(S.energy()) for S in spectra]
    M = max(norms)
    if M == 0:
        return PegoReport(0.0, None, math.inf, eps, [0.0] * len(F), trivial=True)

    grid = F.grid
    rho_grid = default_frequency_grid(grid) if rho_grid is None else [float(r) for r in rho_grid]
    chosen, tails = None, None
    for rho in sorted(rho_grid):
        if rho <= 0:
            continue
        t = [spectral_tail(S, rho) for S in spectra]
        if max(t) <= eps / 4:
            chosen, tails = rho, t
            break
    if chosen is None:
        raise NotCertifiableAtResolution(
            f"no tabulated frequency radius brings the spectral tail below eps/4 = {eps / 4:.6g}",
            modulus="spectral-tail")

    y_bound = math.sqrt(eps) / (chosen * M)
    admissible = _residue_lengths(grid) < y_bound
    worst = 0.0
    for S in spectra:
        worst = max(worst, float(all_circular_defects(S)[admissible].max(initial=0.0)))
    if not worst < 2 * eps:
        raise NotCertifiableAtResolution(
            f"circular defect {worst:.6g} reaches 2 eps within |y| < {y_bound:.6g}",
            modulus="translation")

    # zero-fill comparison on the (at most 64) shortest admissible shifts
    shape = np.array(grid.shape)
    ks = np.argwhere(admissible)
    ks = np.where(ks > shape // 2, ks - shape, ks)
    ks = ks[np.argsort(np.linalg.norm(ks, axis=1), kind="stable")][:65]
    gap = 0.0
    for k in ks:
        if k.any():
            for f in F.members:
                gap = max(gap, abs(circular_defect(f, k) - translation_defect(f, k, 2)))
    return PegoReport(M, chosen, y_bound, eps, tails, worst, int(admissible.sum()), gap)
