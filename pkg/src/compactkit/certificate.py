"""Cover certificates and the first-fit greedy net.

A certificate is only emitted after every member's distance to its assigned
center has been computed directly; ``verified_max_distance <= radius`` is a
hard postcondition.  Listeners registered with :func:`add_listener` see each
emitted certificate together with the object it covers, which lets an outside
auditor re-check certificates independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .errors import ContractViolation

_listeners: list[Callable[["CoverCertificate", Any], None]] = []


def add_listener(fn: Callable[["CoverCertificate", Any], None]) -> None:
    _listeners.append(fn)


def remove_listener(fn) -> None:
    if fn in _listeners:
        _listeners.remove(fn)


@dataclass
class CoverCertificate:
    """Finite cover of a family: member ``i`` lies within ``radius`` of ``assignment[i]``.

    ``centers`` and ``assignment`` hold member indices (centers are members).
    ``metric`` names the distance the radius refers to (``"Lp"`` for grid
    functions, ``"lp"`` for sequences, ``"sup"`` for functions on a finite
    metric space) and ``p`` its exponent.
    """

    epsilon: float
    radius: float
    centers: list[int]
    assignment: list[int]
    verified_max_distance: float | None
    metric: str = "Lp"
    p: float = 2.0
    labels: list[str] | None = None
    distances: list[float] = field(default_factory=list)
    pipeline: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.centers)

    @property
    def verified(self) -> bool:
        return self.verified_max_distance is not None and self.verified_max_distance <= self.radius

    def members_of(self, center: int) -> list[int]:
        return [i for i, c in enumerate(self.assignment) if c == center]

    def to_dict(self) -> dict:
        labels = self.labels or [str(i) for i in range(len(self.assignment))]
        return {
            "epsilon": self.epsilon,
            "radius": self.radius,
            "metric": self.metric,
            "p": _json_float(self.p),
            "centers": [labels[c] for c in self.centers],
            "assignment": {labels[i]: labels[c] for i, c in enumerate(self.assignment)},
            "verified_max_distance": self.verified_max_distance,
            "pipeline": self.pipeline,
        }


def _json_float(x):
    return "inf" if isinstance(x, float) and math.isinf(x) else x


def image_distances(points: np.ndarray, x: np.ndarray, ord: float) -> np.ndarray:
    """``l^ord`` distances from every row of ``points`` to ``x``."""
    diff = np.abs(points - x).reshape(len(points), -1)
    if math.isinf(ord):
        return diff.max(axis=1, initial=0.0)
    if ord == 1:
        return diff.sum(axis=1)
    return np.sum(diff**ord, axis=1) ** (1.0 / ord)


def greedy_net(points, delta: float, ord: float = 2.0) -> tuple[list[int], list[int]]:
    """First-fit net in input order.

    Row ``i`` becomes a center iff no earlier center lies at distance
    ``< delta``; otherwise it is assigned to the first such center.
    Returns ``(centers, assignment)`` as index lists.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if not delta > 0:
        raise ValueError("net radius must be positive")
    centers: list[int] = []
    assignment: list[int] = []
    for i in range(len(points)):
        if centers:
            d = image_distances(points[centers], points[i], ord)
            hit = np.flatnonzero(d < delta)
            if hit.size:
                assignment.append(centers[int(hit[0])])
                continue
        centers.append(i)
        assignment.append(i)
    return centers, assignment


def finalize(cert: CoverCertificate, member_distance: Callable[[int, int], float], covered: Any = None,
             ) -> CoverCertificate:
    """Fill in verified distances; raise :class:`ContractViolation` if the radius fails."""
    dists = [0.0 if i == c else float(member_distance(i, c)) for i, c in enumerate(cert.assignment)]
    cert.distances = dists
    cert.verified_max_distance = max(dists, default=0.0)
    if cert.verified_max_distance > cert.radius:
        worst = int(np.argmax(dists))
        raise ContractViolation(
            f"member {worst} is at distance {cert.verified_max_distance:.6g} from its center, "
            f"above the claimed radius {cert.radius:.6g}")
    for fn in list(_listeners):
        fn(cert, covered)
    return cert


def pullback_cover(images: Sequence, delta: float, contract_radius: float,
                   member_distance: Callable[[int, int], float] | None = None, *,
                   ord: float = 2.0, epsilon: float | None = None, metric: str = "Lp",
                   p: float | None = None, labels=None, covered: Any = None) -> CoverCertificate:
    """Cover members through a map into a finite-dimensional space.

    The caller guarantees that image distance ``< delta`` implies member
    distance ``< contract_radius``.  A greedy ``delta``-net of the images is
    pulled back to the members.  When ``member_distance`` is given the cover
    is verified on the true distances (and rejected if the contract fails);
    otherwise an unverified skeleton is returned.
    """
    centers, assignment = greedy_net(images, delta, ord)
    cert = CoverCertificate(
        epsilon=float(delta if epsilon is None else epsilon),
        radius=float(contract_radius),
        centers=centers,
        assignment=assignment,
        verified_max_distance=None,
        metric=metric,
        p=float(ord if p is None else p),
        labels=list(labels) if labels is not None else None,
    )
    if member_distance is None:
        return cert
    return finalize(cert, member_distance, covered)
