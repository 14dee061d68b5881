"""Time stepping: initial data, one-step algebra, bounds, and boundary freeze."""

import numpy as np
import pytest

import basketetd as bk
from basketetd.expo import make_backend
from basketetd.grid import all_y, flatten, interior_mask
from basketetd.operator import assemble, stencil
from basketetd.stepper import initial_state, initial_vector, run, step


def setup(market, option, intervals, k=None, n_steps=None, bound=8.0):
    tp = bk.build_transform(market)
    m = market.n_assets
    grid = bk.build_grid([-bound] * m, [bound] * m, [intervals] * m)
    op = assemble(stencil(tp, grid, market.rate), grid)
    coeffs = op.coeffs
    if k is None:
        k, n_steps = bk.auto_time_step(option.maturity, grid.h, coeffs.d,
                                       market.rate, option.penalty_effective)
    state = initial_state(grid, tp, market, option, k, n_steps)
    return tp, grid, op, state


def test_initial_vector_is_normalized_payoff(benchmark_put):
    market, option = benchmark_put
    tp, grid, _, _ = setup(market, option, 8)
    u0 = initial_vector(grid, tp, market, option)
    # center node is at the strike: payoff 0
    assert u0[flatten(grid, [4, 4])] == 0.0
    # far-left corner: deep in the money
    assert 0.85 < u0[0] < 1.0
    # spot check one node directly
    j = flatten(grid, [3, 5])
    y = all_y(grid)[j]
    s = bk.inverse_point(tp, market, option, y)
    assert u0[j] == pytest.approx(
        float(bk.payoff(option, s)) / option.strike, rel=1e-14)
    assert np.all(u0 >= 0.0) and np.all(u0 <= 1.0)


def test_single_step_without_penalty_is_pure_exponential(benchmark_put):
    market, _ = benchmark_put
    option = bk.BasketOption(weights=[0.7, 0.3], strike=50.0, maturity=1.0,
                             kind="put", exercise="american", penalty=0.0)
    tp, grid, op, state = setup(market, option, 10, k=5e-3, n_steps=1)
    be = make_backend(op, 5e-3, mode="dense")
    expected = be.exp_full(state.u0)
    step(state, be)
    np.testing.assert_array_equal(state.u, expected)
    assert state.n == 1


def test_european_exercise_disables_penalty(benchmark_put):
    market, _ = benchmark_put
    euro = bk.BasketOption(weights=[0.7, 0.3], strike=50.0, maturity=1.0,
                           kind="put", exercise="european", penalty=100.0)
    tp, grid, op, state = setup(market, euro, 10, k=5e-3, n_steps=1)
    assert state.lam == 0.0
    be = make_backend(op, 5e-3, mode="dense")
    expected = be.exp_full(state.u0)
    step(state, be)
    np.testing.assert_array_equal(state.u, expected)


def test_single_step_penalty_algebra(benchmark_put):
    """One step must equal exp(Ak)u + k*lam*phi((u0-u)^+) exactly."""
    market, option = benchmark_put
    k = 5e-3
    tp, grid, op, state = setup(market, option, 10, k=k, n_steps=2)
    be = make_backend(op, k, mode="dense")
    step(state, be)  # now u != u0 somewhere
    u_before = state.u.copy()
    expected = be.exp_full(u_before) + k * option.penalty * be.phi(
        np.maximum(state.u0 - u_before, 0.0))
    step(state, be)
    np.testing.assert_array_equal(state.u, expected)


def test_penalty_pushes_value_above_pure_exponential(benchmark_put):
    market, option = benchmark_put
    k = 5e-3
    _, grid, op, state = setup(market, option, 20, k=k, n_steps=40)
    be = make_backend(op, k, mode="dense")
    res_pen = run(state, be)
    euro = bk.BasketOption(weights=[0.7, 0.3], strike=50.0, maturity=1.0,
                           kind="put", exercise="european", penalty=0.0)
    _, _, _, state0 = setup(market, euro, 20, k=k, n_steps=40)
    res_exp = run(state0, be)
    assert np.all(res_pen.u >= res_exp.u - 1e-14)
    assert np.max(res_pen.u - res_exp.u) > 1e-6


def test_boundary_values_never_move(benchmark_put):
    market, option = benchmark_put
    _, grid, op, state = setup(market, option, 12)
    be = make_backend(op, state.k, mode="action")
    frozen = state.u0[state.boundary].copy()
    res = run(state, be)
    np.testing.assert_array_equal(res.u[state.boundary], frozen)


def test_put_values_stay_in_unit_interval_under_stable_step(benchmark_put):
    market, option = benchmark_put
    _, grid, op, state = setup(market, option, 24)
    rep_k = state.k
    be = make_backend(op, rep_k, mode="dense")
    res = run(state, be)
    assert float(np.min(res.min_u)) >= 0.0
    assert float(np.max(res.max_u)) <= 1.0 + 1e-12
    assert res.min_u.shape == (state.n_steps + 1,)
    assert res.max_u.shape == (state.n_steps + 1,)
    assert res.n_steps == state.n_steps
    assert res.wall_time > 0.0


def test_run_records_initial_extrema_first(benchmark_put):
    market, option = benchmark_put
    _, grid, op, state = setup(market, option, 10, k=5e-3, n_steps=3)
    u0_min, u0_max = state.u0.min(), state.u0.max()
    be = make_backend(op, 5e-3, mode="dense")
    res = run(state, be)
    assert res.min_u[0] == u0_min
    assert res.max_u[0] == u0_max


def test_american_value_dominates_intrinsic_at_high_penalty(benchmark_put):
    """With lam large, the converged solution should sit above u0 - O(1/lam)."""
    market, _ = benchmark_put
    option = bk.BasketOption(weights=[0.7, 0.3], strike=50.0, maturity=1.0,
                             kind="put", exercise="american", penalty=1000.0)
    _, grid, op, state = setup(market, option, 20)
    be = make_backend(op, state.k, mode="dense")
    res = run(state, be)
    interior = interior_mask(grid)
    shortfall = np.maximum(state.u0 - res.u, 0.0)[interior]
    assert float(shortfall.max()) <= 2e-3
