"""Compactness in l^p and in C(Omega) for a finite metric space Omega.

Both certifiers reduce a family to finitely many coordinates, net the
images and pull the net back, claiming radius ``3 * eps``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .certificate import CoverCertificate, image_distances, pullback_cover
from .errors import LandmarksInsufficient
from .grid import check_exponent


@dataclass
class SequenceFamily:
    """Members of l^p stored as finite prefixes; entries past a prefix are zero."""

    members: list[np.ndarray]
    p: float = 2.0

    def __post_init__(self):
        self.p = check_exponent(self.p)
        self.members = [np.asarray(x, dtype=float).ravel() for x in self.members]
        if not self.members:
            raise ValueError("a sequence family needs at least one member")
        for x in self.members:
            if not np.all(np.isfinite(x)):
                raise ValueError("sequence entries must be finite")

    @property
    def length(self) -> int:
        """Longest stored prefix; every member vanishes beyond it."""
        return max(len(x) for x in self.members)

    def padded(self, n: int | None = None) -> np.ndarray:
        n = self.length if n is None else n
        out = np.zeros((len(self.members), n))
        for i, x in enumerate(self.members):
            out[i, :len(x)] = x[:n]
        return out

    def distance(self, i: int, j: int) -> float:
        a = self.padded()
        return float(image_distances(a[i:i + 1], a[j], self.p)[0])

    def to_dict(self) -> dict:
        return {"p": self.p, "members": [x.tolist() for x in self.members]}

    @classmethod
    def from_dict(cls, doc: dict) -> "SequenceFamily":
        return cls([np.asarray(x, dtype=float) for x in doc["members"]], float(doc.get("p", 2.0)))


@dataclass
class DiscreteMetricFamily:
    """Real functions on a finite metric space.

    ``distances`` is the dense point-to-point table, ``members`` has one row
    per function and one column per point.
    """

    distances: np.ndarray
    members: np.ndarray

    def __post_init__(self):
        D = np.asarray(self.distances, dtype=float)
        F = np.atleast_2d(np.asarray(self.members, dtype=float))
        if D.ndim != 2 or D.shape[0] != D.shape[1]:
            raise ValueError("distance table must be square")
        if F.shape[1] != D.shape[0]:
            raise ValueError("members need one value per point")
        if np.any(D < 0) or np.any(np.diag(D) != 0) or not np.array_equal(D, D.T):
            raise ValueError("distance table must be nonnegative, symmetric, zero on the diagonal")
        # triangle inequality: D[i, k] <= D[i, j] + D[j, k]
        tol = 1e-12 * max(1.0, float(D.max(initial=0.0)))
        if np.any(D[:, None, :] > D[:, :, None] + D[None, :, :] + tol):
            raise ValueError("distance table violates the triangle inequality")
        self.distances, self.members = D, F

    @property
    def n_points(self) -> int:
        return self.distances.shape[0]

    def to_dict(self) -> dict:
        return {"distances": self.distances.tolist(), "members": self.members.tolist()}

    @classmethod
    def from_dict(cls, doc: dict) -> "DiscreteMetricFamily":
        return cls(np.asarray(doc["distances"]), np.asarray(doc["members"]))


def lp_truncation_certify(S: SequenceFamily, eps: float) -> CoverCertificate:
    """Cover an l^p family by truncating to the stored prefix length.

    With ``n`` the longest prefix, every tail beyond ``n`` vanishes, so the
    tail condition holds for every ``eps``.  The truncation map is then the
    identity on the stored coordinates, images are netted at ``eps`` and the
    net is pulled back with claimed radius ``3 * eps``.
    """
    if not eps > 0:
        raise ValueError("epsilon must be positive")
    images = S.padded()
    cert = pullback_cover(
        images, eps, 3 * eps, S.distance, ord=S.p, epsilon=eps, metric="lp", p=S.p, covered=S)
    cert.pipeline = {"truncation_length": S.length}
    return cert


def equicontinuity_modulus(D: DiscreteMetricFamily, delta: float) -> float:
    """``max |f(x) - f(y)|`` over members and point pairs with ``dist(x, y) < delta``."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    close = D.distances < delta
    if not close.any():
        return 0.0
    jumps = np.abs(D.members[:, :, None] - D.members[:, None, :])
    return float(jumps[:, close].max(initial=0.0))


def landmark_slack(D: DiscreteMetricFamily, landmarks) -> np.ndarray:
    """For every point, ``min_j max_f |f(x) - f(x_j)|`` over the landmarks ``x_j``."""
    landmarks = np.asarray(landmarks, dtype=int)
    gaps = np.abs(D.members[:, :, None] - D.members[:, None, landmarks]).max(axis=0)
    return gaps.min(axis=1)


def aa_certify(D: DiscreteMetricFamily, eps: float, landmarks) -> CoverCertificate:
    """Sup-norm cover through point evaluation at ``landmarks``.

    Requires every point to be within ``eps`` (uniformly over the family) of
    some landmark.  Images ``(f(x_1), ..., f(x_N))`` are netted at ``eps`` in
    the max norm and pulled back with claimed radius ``3 * eps``.
    """
    if not eps > 0:
        raise ValueError("epsilon must be positive")
    landmarks = sorted({int(j) for j in landmarks})
    if not landmarks:
        raise LandmarksInsufficient("at least one landmark is required")
    slack = landmark_slack(D, landmarks)
    worst = int(np.argmax(slack))
    if slack[worst] >= eps:
        raise LandmarksInsufficient(
            f"point {worst} differs by {slack[worst]:.6g} >= eps from every landmark", point=worst)
    images = D.members[:, landmarks]

    def sup_distance(i, j):
        return float(np.abs(D.members[i] - D.members[j]).max())

    cert = pullback_cover(images, eps, 3 * eps, sup_distance, ord=math.inf, epsilon=eps,
                          metric="sup", p=math.inf, covered=D)
    cert.pipeline = {"landmarks": landmarks}
    return cert
