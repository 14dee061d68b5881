"""Grid construction, index bijections, and multilinear interpolation."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import basketetd as bk
from basketetd.errors import (DomainError, InconsistentSteps, IndexOutOfRange,
                              OutOfDomain)
from basketetd.grid import (DEFAULT_BOUND, all_y, flatten, interior_mask,
                            is_boundary, node_s, node_y, unflatten)


def square(intervals, bound=DEFAULT_BOUND, axes=2, beta=None):
    return bk.build_grid([-bound] * axes, [bound] * axes,
                         [intervals] * axes, beta=beta)


def test_build_grid_basic_geometry():
    g = square(40)
    assert g.h == pytest.approx(0.4)
    assert g.shape == (41, 41)
    assert g.total == 41 * 41
    np.testing.assert_array_equal(g.strides, [1, 41])
    np.testing.assert_allclose(g.h_axis, [0.4, 0.4])


def test_build_grid_anisotropic_beta():
    g = bk.build_grid([-8.0, -4.0], [8.0, 4.0], [40, 40], beta=[1.0, 0.5])
    assert g.h == pytest.approx(0.4)
    np.testing.assert_allclose(g.h_axis, [0.4, 0.2])


def test_build_grid_rejects_inconsistent_steps():
    # same beta on both axes but different spans/intervals -> no base step
    with pytest.raises(InconsistentSteps):
        bk.build_grid([-8.0, -8.0], [8.0, 8.0], [40, 50])


def test_build_grid_rejects_bad_inputs():
    with pytest.raises(DomainError):
        bk.build_grid([-8.0], [8.0, 8.0], [40, 40])
    with pytest.raises(DomainError):
        bk.build_grid([-8.0, 8.0], [8.0, -8.0], [40, 40])
    with pytest.raises(DomainError):
        bk.build_grid([-8.0, -8.0], [8.0, 8.0], [40, 1])
    with pytest.raises(DomainError):
        bk.build_grid([-8.0, -8.0], [8.0, 8.0], [40, 40], beta=[1.0, 0.0])


def test_flatten_matches_ravel_multi_index_fortran_order():
    g = bk.build_grid([-8.0, -8.0, -8.0], [8.0, 8.0, 8.0], [4, 4, 4])
    for j0 in range(5):
        for j1 in range(5):
            for j2 in range(5):
                multi = np.array([j0, j1, j2])
                expected = np.ravel_multi_index(multi, g.shape, order="F")
                assert flatten(g, multi) == expected


def test_flatten_unflatten_bijection_exhaustive():
    g = bk.build_grid([-8.0, -8.0], [8.0, 8.0], [6, 6])
    flats = np.arange(g.total)
    multis = unflatten(g, flats)
    np.testing.assert_array_equal(flatten(g, multis), flats)
    # and the reverse direction, node by node
    seen = {int(flatten(g, m)) for m in multis}
    assert seen == set(range(g.total))


@given(st.integers(min_value=2, max_value=9),
       st.integers(min_value=2, max_value=9),
       st.integers(min_value=2, max_value=9))
def test_flatten_unflatten_round_trip_3d(n0, n1, n2):
    g = bk.build_grid([0.0, 0.0, 0.0], [float(n0), float(n1), float(n2)],
                      [n0, n1, n2])
    flats = np.arange(g.total)
    np.testing.assert_array_equal(flatten(g, unflatten(g, flats)), flats)


def test_index_range_checks():
    g = square(4)
    with pytest.raises(IndexOutOfRange):
        flatten(g, [5, 0])
    with pytest.raises(IndexOutOfRange):
        flatten(g, [-1, 2])
    with pytest.raises(IndexOutOfRange):
        unflatten(g, g.total)


def test_is_boundary_and_interior_mask():
    g = square(4)
    assert is_boundary(g, [0, 2])
    assert is_boundary(g, [4, 4])
    assert not is_boundary(g, [2, 2])
    mask = interior_mask(g)
    assert mask.sum() == 3 * 3
    inner = unflatten(g, np.flatnonzero(mask))
    assert np.all((inner >= 1) & (inner <= 3))


def test_node_y_and_all_y_consistent():
    g = square(4)
    np.testing.assert_allclose(node_y(g, 0), [-8.0, -8.0])
    np.testing.assert_allclose(node_y(g, g.total - 1), [8.0, 8.0])
    ys = all_y(g)
    assert ys.shape == (g.total, 2)
    center = flatten(g, [2, 2])
    np.testing.assert_allclose(ys[center], [0.0, 0.0], atol=1e-15)


def test_node_s_matches_inverse_point(benchmark_put):
    market, option = benchmark_put
    tp = bk.build_transform(market)
    g = square(4)
    center = flatten(g, [2, 2])
    np.testing.assert_allclose(node_s(g, tp, market, option, center),
                               [option.strike, option.strike], rtol=1e-14)


def test_interpolate_exact_at_nodes():
    g = square(5)
    rng = np.random.default_rng(3)
    values = rng.standard_normal(g.total)
    for flat in rng.integers(0, g.total, 20):
        y = node_y(g, int(flat))
        assert bk.interpolate(g, values, y) == pytest.approx(
            values[int(flat)], abs=1e-13)


@given(st.floats(min_value=-8.0, max_value=8.0),
       st.floats(min_value=-8.0, max_value=8.0))
def test_interpolate_exact_on_linear_fields(y0, y1):
    g = square(5)
    a, b, c = 0.7, -1.3, 2.1
    values = all_y(g) @ np.array([a, b]) + c
    got = bk.interpolate(g, values, np.array([y0, y1]))
    assert got == pytest.approx(a * y0 + b * y1 + c, abs=1e-10)


def test_interpolate_rejects_outside_points():
    g = square(5)
    values = np.zeros(g.total)
    with pytest.raises(OutOfDomain):
        bk.interpolate(g, values, np.array([8.0 + 1e-9, 0.0]))
    with pytest.raises(OutOfDomain):
        bk.interpolate(g, values, np.array([0.0, -9.0]))
    with pytest.raises(ValueError):
        bk.interpolate(g, values, np.array([0.0, 0.0, 0.0]))
