import itertools

import numpy as np
import pytest

from compactkit.classical import (DiscreteMetricFamily, SequenceFamily, aa_certify,
                                  equicontinuity_modulus, lp_truncation_certify)
from compactkit.errors import LandmarksInsufficient

from helpers import recheck


def unit_vectors(m):
    return [np.eye(m)[i] for i in range(m)]


def path_graph(n):
    idx = np.arange(n)
    return np.abs(idx[:, None] - idx[None, :]).astype(float)


def test_zero_sequence():
    cert = lp_truncation_certify(SequenceFamily([np.zeros(3)], p=2), 0.1)
    assert cert.centers == [0] and cert.verified_max_distance == 0


def test_unit_vectors_keep_every_center():
    S = SequenceFamily(unit_vectors(5), p=1)
    # oracle: pairwise distances are all 2 > eps, so no member can join another
    dists = [np.abs(a - b).sum() for a, b in itertools.combinations(S.members, 2)]
    assert min(dists) == 2
    cert = lp_truncation_certify(S, 0.4)
    assert cert.size == 5
    assert cert.radius == pytest.approx(1.2)


def test_duplicates_collapse():
    e1 = np.array([1.0, 0.0])
    cert = lp_truncation_certify(SequenceFamily([e1, e1, e1]), 0.1)
    assert cert.centers == [0] and cert.assignment == [0, 0, 0]


def test_ragged_prefixes():
    S = SequenceFamily([[1.0], [1.0, 0.0, 0.05], [0.0, 0.0, 0.0, 2.0]], p=2)
    cert = lp_truncation_certify(S, 0.1)
    assert cert.assignment == [0, 0, 2]
    assert cert.verified_max_distance == pytest.approx(0.05)
    assert recheck(cert, S) == pytest.approx(cert.verified_max_distance)


def test_truncation_radius_bound(rng):
    for _ in range(20):
        m = int(rng.integers(1, 12))
        S = SequenceFamily([rng.normal(size=rng.integers(1, 8)) for _ in range(m)],
                           p=float(rng.choice([1, 2, 3])))
        eps = float(rng.uniform(0.1, 2))
        cert = lp_truncation_certify(S, eps)
        assert recheck(cert, S) <= 3 * eps


def test_equicontinuity_examples():
    D = DiscreteMetricFamily(np.array([[0.0, 1.0], [1.0, 0.0]]), np.array([[0.0, 1.0]]))
    assert equicontinuity_modulus(D, 0.5) == 0
    assert equicontinuity_modulus(D, 2.0) == 1
    const = DiscreteMetricFamily(path_graph(4), np.full((1, 4), 3.0))
    for delta in (0.5, 1.5, 10):
        assert equicontinuity_modulus(const, delta) == 0


def test_metric_validation():
    with pytest.raises(ValueError):
        DiscreteMetricFamily(np.array([[0.0, 1.0], [2.0, 0.0]]), np.zeros((1, 2)))
    with pytest.raises(ValueError):
        # 0-2 is longer than 0-1-2
        DiscreteMetricFamily(np.array([[0, 1, 5], [1, 0, 1], [5, 1, 0.0]]), np.zeros((1, 3)))


def lipschitz_family(rng, n_points, m):
    steps = rng.uniform(-1, 1, size=(m, n_points - 1))
    return np.concatenate([np.zeros((m, 1)), np.cumsum(steps, axis=1)], axis=1) + rng.normal(size=(m, 1))


def test_aa_full_landmarks_is_identity(rng):
    D = DiscreteMetricFamily(path_graph(6), lipschitz_family(rng, 6, 10))
    eps = 0.8
    cert = aa_certify(D, eps, range(6))
    assert cert.verified_max_distance < eps


def test_aa_lipschitz_every_other_landmark(rng):
    members = lipschitz_family(rng, 9, 15)
    D = DiscreteMetricFamily(path_graph(9), members)
    # oracle: each point is one unit edge from a landmark, so |f(x) - f(x_j)| <= 1 < 1.5
    landmarks = list(range(0, 9, 2))
    for x in range(9):
        j = min(landmarks, key=lambda L: abs(L - x))
        assert np.abs(members[:, x] - members[:, j]).max() <= 1.0
    cert = aa_certify(D, 1.5, landmarks)
    assert recheck(cert, D) <= 4.5
    assert cert.metric == "sup"


def test_aa_singleton():
    D = DiscreteMetricFamily(path_graph(3), np.array([[0.0, 0.5, 1.0]]))
    assert aa_certify(D, 0.6, [0, 2]).centers == [0]


def test_aa_insufficient_landmarks():
    D = DiscreteMetricFamily(path_graph(5), np.array([[0.0, 1.0, 2.0, 3.0, 4.0]]))
    with pytest.raises(LandmarksInsufficient) as err:
        aa_certify(D, 0.5, [0])
    assert err.value.point == 4


def test_aa_radius_bound_random(rng):
    for _ in range(20):
        n = int(rng.integers(3, 10))
        D = DiscreteMetricFamily(path_graph(n), lipschitz_family(rng, n, int(rng.integers(1, 20))))
        cert = aa_certify(D, 1.01, range(0, n, 2))
        assert recheck(cert, D) <= 3 * 1.01


def test_json_roundtrip():
    S = SequenceFamily([[1.0, 2.0], [3.0]], p=3)
    T = SequenceFamily.from_dict(S.to_dict())
    assert T.p == 3 and [x.tolist() for x in T.members] == [[1.0, 2.0], [3.0]]
    D = DiscreteMetricFamily(path_graph(3), np.ones((2, 3)))
    E = DiscreteMetricFamily.from_dict(D.to_dict())
    np.testing.assert_array_equal(E.distances, D.distances)
