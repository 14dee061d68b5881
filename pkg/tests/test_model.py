"""Market/option containers, payoff evaluation, and validation."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import basketetd as bk


def test_market_defaults_zero_dividend_identity_correlation():
    m = bk.MarketModel(rate=0.05, sigma=[0.3, 0.2, 0.1])
    assert m.n_assets == 3
    np.testing.assert_array_equal(m.dividend, np.zeros(3))
    np.testing.assert_array_equal(m.correlation, np.eye(3))


def test_market_rejects_bad_shapes():
    with pytest.raises(ValueError):
        bk.MarketModel(rate=0.05, sigma=[])
    with pytest.raises(ValueError):
        bk.MarketModel(rate=0.05, sigma=[0.3, 0.2], dividend=[0.01])
    with pytest.raises(ValueError):
        bk.MarketModel(rate=0.05, sigma=[0.3, 0.2], correlation=[[1.0, 0.5]])


def test_option_rejects_bad_enums():
    with pytest.raises(ValueError):
        bk.BasketOption(weights=[0.5, 0.5], strike=9.0, maturity=1.0,
                        kind="straddle", exercise="american", penalty=1.0)
    with pytest.raises(ValueError):
        bk.BasketOption(weights=[0.5, 0.5], strike=9.0, maturity=1.0,
                        kind="put", exercise="bermudan", penalty=1.0)
    with pytest.raises(ValueError):
        bk.BasketOption(weights=[], strike=9.0, maturity=1.0,
                        kind="put", exercise="american", penalty=1.0)


def test_validate_flags_value_range_violations(benchmark_put):
    market, option = benchmark_put
    bad_market = bk.MarketModel(rate=0.05, sigma=[0.3, -0.2])
    assert not bk.validate(bad_market).ok

    bad_corr = bk.MarketModel(rate=0.05, sigma=[0.3, 0.2],
                              correlation=[[1.0, 0.5], [0.4, 1.0]])
    report = bk.validate(bad_corr)
    assert any("symmetric" in p for p in report.problems)

    degenerate = bk.MarketModel(rate=0.05, sigma=[0.3, 0.2],
                                correlation=[[1.0, 1.0], [1.0, 1.0]])
    report = bk.validate(degenerate)
    assert any("positive definite" in p for p in report.problems)

    for strike, maturity, penalty in ((-1.0, 1.0, 1.0), (9.0, 0.0, 1.0),
                                      (9.0, 1.0, -2.0)):
        bad = bk.BasketOption(weights=[0.5, 0.5], strike=strike,
                              maturity=maturity, kind="put",
                              exercise="american", penalty=penalty)
        assert not bk.validate(market, bad).ok


def test_validate_reports_dimension_mismatch(benchmark_put):
    market, _ = benchmark_put
    option = bk.BasketOption(weights=[0.5, 0.3, 0.2], strike=50.0,
                             maturity=1.0, kind="put", exercise="american",
                             penalty=1.0)
    report = bk.validate(market, option)
    assert not report.ok
    assert any("assets" in p for p in report.problems)


def test_validate_ok_on_all_bundled_setups(wide_vol_put, benchmark_put,
                                           low_vol_call, three_asset_call):
    for market, option in (wide_vol_put, benchmark_put, low_vol_call,
                           three_asset_call):
        report = bk.validate(market, option)
        assert report.ok, report.problems


def test_penalty_effective_is_zero_for_european(benchmark_put):
    _, option = benchmark_put
    euro = bk.BasketOption(weights=option.weights, strike=option.strike,
                           maturity=option.maturity, kind="put",
                           exercise="european", penalty=123.0)
    assert euro.penalty_effective == 0.0
    assert option.penalty_effective == option.penalty == 100.0


def test_put_payoff_values(benchmark_put):
    _, option = benchmark_put
    spots = np.array([[40.0, 40.0], [50.0, 50.0], [80.0, 90.0]])
    got = bk.payoff(option, spots)
    np.testing.assert_allclose(got, [10.0, 0.0, 0.0], atol=1e-14)


def test_call_payoff_values(low_vol_call):
    _, option = low_vol_call
    spots = np.array([[120.0, 110.0], [90.0, 90.0]])
    got = bk.payoff(option, spots)
    np.testing.assert_allclose(got, [15.0, 0.0], atol=1e-14)


def test_payoff_accepts_single_point(benchmark_put):
    _, option = benchmark_put
    assert bk.payoff(option, np.array([40.0, 40.0])) == pytest.approx(10.0)


@given(st.lists(st.floats(min_value=0.0, max_value=500.0), min_size=2,
                max_size=2))
def test_put_payoff_bounded_by_strike(spots):
    option = bk.BasketOption(weights=[0.5, 0.5], strike=50.0, maturity=1.0,
                             kind="put", exercise="american", penalty=1.0)
    value = float(bk.payoff(option, np.asarray(spots)))
    assert 0.0 <= value <= option.strike


@given(st.floats(min_value=0.1, max_value=400.0),
       st.floats(min_value=0.1, max_value=400.0))
def test_call_put_payoff_parity(s1, s2):
    common = dict(weights=[0.6, 0.4], strike=100.0, maturity=1.0,
                  exercise="european", penalty=0.0)
    call = bk.BasketOption(kind="call", **common)
    put = bk.BasketOption(kind="put", **common)
    spots = np.array([s1, s2])
    basket = 0.6 * s1 + 0.4 * s2
    lhs = float(bk.payoff(call, spots) - bk.payoff(put, spots))
    assert lhs == pytest.approx(basket - 100.0, abs=1e-9)
