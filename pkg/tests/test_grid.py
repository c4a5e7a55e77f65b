import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from compactkit.errors import EmptyFamily, GridMismatch, InvalidExponent
from compactkit.grid import (FunctionFamily, Grid, GridFunction, lp_distance, lp_norm, rescale,
                             restrict, shift, zero_extend)

gf = GridFunction.from_values
finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def test_grid_invariants():
    with pytest.raises(ValueError):
        Grid((0,), (0.0,), 1.0)
    with pytest.raises(ValueError):
        Grid((3,), (0.0,), 0.0)
    g = Grid((2, 3), (0, 0), 0.5)
    assert g.dim == 2 and g.size == 6 and g.cell_volume == 0.25
    assert g.compatible(Grid((2, 3), (0.0, 0.0), 0.5))
    assert not g.compatible(Grid((2, 3), (0.0, 0.5), 0.5))


def test_values_must_be_finite():
    with pytest.raises(ValueError):
        gf([1.0, np.nan])
    with pytest.raises(ValueError):
        gf([np.inf])


def test_values_are_read_only():
    f = gf([1.0, 2.0])
    with pytest.raises(ValueError):
        f.values[0] = 5


def test_lp_norm_examples():
    assert lp_norm(gf(np.zeros(5)), 2) == 0
    ind = gf(np.ones(4), spacing=0.25)
    for p in (1, 1.5, 2, 7):
        assert lp_norm(ind, p) == pytest.approx(1.0, rel=1e-14)
    assert lp_norm(gf([1.0, 2.0]), 2) == pytest.approx(np.sqrt(5), rel=1e-15)
    assert lp_norm(gf([1.0, -3.0]), np.inf) == 3


def test_lp_norm_rejects_small_exponent():
    with pytest.raises(InvalidExponent):
        lp_norm(gf([1.0]), 0.5)


def test_lp_norm_matches_cell_sum():
    rng = np.random.default_rng(0)
    v = rng.normal(size=(5, 7))
    f = gf(v, spacing=0.3)
    assert lp_norm(f, 3) ** 3 == pytest.approx(0.3**2 * np.sum(np.abs(v) ** 3), rel=1e-12)


def test_lp_distance_examples():
    f, g = gf([1.0, 0.0]), gf([0.0, 1.0])
    assert lp_distance(f, f, 2) == 0
    assert lp_distance(f, g, 1) == pytest.approx(2.0)
    assert lp_distance(f, g, 2) == pytest.approx(np.sqrt(2))


def test_lp_distance_grid_mismatch():
    with pytest.raises(GridMismatch):
        lp_distance(gf([1.0, 0.0]), gf([1.0, 0.0], spacing=2.0), 2)


@settings(max_examples=60, deadline=None)
@given(arrays(float, (6,), elements=finite), st.floats(-50, 50), st.sampled_from([1, 1.5, 2, 3]))
def test_norm_homogeneity(v, c, p):
    f = gf(v, spacing=0.7)
    assert lp_norm(c * f, p) == pytest.approx(abs(c) * lp_norm(f, p), rel=1e-12, abs=1e-300)


@settings(max_examples=60, deadline=None)
@given(arrays(float, (3, 4, 4), elements=finite), st.sampled_from([1, 2, 2.5]))
def test_triangle_inequality(v, p):
    f, g, h = (gf(x, spacing=0.5) for x in v)
    assert lp_distance(f, h, p) <= lp_distance(f, g, p) + lp_distance(g, h, p) + 1e-9


def test_shift_examples():
    f = gf([0.0, 1.0, 0.0])
    np.testing.assert_array_equal(shift(f, [0]).values, f.values)
    np.testing.assert_array_equal(shift(f, [1]).values, [1.0, 0.0, 0.0])
    np.testing.assert_array_equal(shift(f, [-1]).values, [0.0, 0.0, 1.0])
    np.testing.assert_array_equal(shift(gf([1.0, 1.0]), [5]).values, [0.0, 0.0])


def test_shift_2d_index_arithmetic():
    v = np.arange(12.0).reshape(3, 4)
    out = shift(gf(v), [1, -2]).values
    for i in range(3):
        for j in range(4):
            src = (i + 1, j - 2)
            expect = v[src] if 0 <= src[0] < 3 and 0 <= src[1] < 4 else 0.0
            assert out[i, j] == expect


@settings(max_examples=40, deadline=None)
@given(arrays(float, (5, 6), elements=finite), st.integers(-3, 3), st.integers(-3, 3))
def test_shift_roundtrip_on_interior(v, a, b):
    f = gf(v)
    back = shift(shift(f, [a, b]), [-a, -b]).values
    # cells whose +-k images stay in the box
    for i in range(5):
        for j in range(6):
            if all(0 <= i + s * a < 5 and 0 <= j + s * b < 6 for s in (1, -1)):
                assert back[i, j] == v[i, j]


def test_rescale_examples():
    f = gf([3.0])
    assert rescale(f, 1).values.tolist() == [3.0]
    r = rescale(f, 2)
    assert r.values.tolist() == [3.0, 3.0]
    assert lp_norm(f, 1) == 3 and lp_norm(r, 1) == 6


def test_rescale_represents_dilation():
    f = gf([1.0, 2.0], spacing=0.5, origin=[-0.5])
    r = rescale(f, 3)
    assert r.grid.origin == (-1.5,) and r.grid.spacing == 0.5
    # r(x) == f(x / 3) at every cell center of r
    centers = r.grid.axis_centers(0)
    idx = np.floor((centers / 3 - f.grid.origin[0]) / f.grid.spacing).astype(int)
    np.testing.assert_array_equal(r.values, f.values[idx])


def test_rescale_norm_ratio_2d():
    rng = np.random.default_rng(3)
    f = gf(rng.normal(size=(4, 5)), spacing=0.2)
    assert lp_norm(rescale(f, 2), 2) / lp_norm(f, 2) == pytest.approx(2.0, rel=1e-12)


def test_scaling_law_random():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = int(rng.integers(1, 3))
        p = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
        f = gf(rng.normal(size=tuple(rng.integers(1, 6, size=n))), spacing=float(rng.uniform(0.1, 1)))
        for lam in (1, 2, 3):
            base = lp_norm(f, p)
            assert abs(lp_norm(rescale(f, lam), p) - lam ** (n / p) * base) <= 1e-12 * base


def test_zero_extend_and_restrict():
    f = gf([1.0, 2.0], spacing=0.5)
    big = zero_extend(f, [2], [1])
    assert big.values.tolist() == [0, 0, 1, 2, 0]
    assert big.grid.origin == (-1.0,)
    assert lp_norm(big, 2) == lp_norm(f, 2)
    back = restrict(big, f.grid)
    assert back.values.tolist() == [1.0, 2.0]


def test_arithmetic():
    f, g = gf([1.0, 2.0]), gf([0.5, 0.5])
    assert (f - g).values.tolist() == [0.5, 1.5]
    assert (2 * f + g).values.tolist() == [2.5, 4.5]
    with pytest.raises(GridMismatch):
        f + gf([1.0, 2.0, 3.0])


def test_family_validation():
    with pytest.raises(EmptyFamily):
        FunctionFamily([])
    with pytest.raises(GridMismatch):
        FunctionFamily([gf([1.0]), gf([1.0, 2.0])])
    with pytest.raises(ValueError):
        FunctionFamily([gf([1.0]), gf([2.0])], labels=["a", "a"])
    F = FunctionFamily.from_arrays([[1, 2], [3, 4]], labels=["a", "b"])
    assert len(F) == 2 and F.labels == ["a", "b"] and F.stack().shape == (2, 2)
