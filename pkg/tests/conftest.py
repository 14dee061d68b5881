"""Shared fixtures: the worked market setups and an acceptance summary hook."""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import basketetd as bk

settings.register_profile(
    "default",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def wide_vol_put():
    """Two-asset put with one high-volatility leg and a small strike."""
    market = bk.MarketModel(rate=0.05, sigma=[0.65, 0.25],
                            correlation=[[1.0, 0.1], [0.1, 1.0]])
    option = bk.BasketOption(weights=[0.5, 0.5], strike=9.0, maturity=1.0,
                             kind="put", exercise="american", penalty=100.0)
    return market, option


@pytest.fixture
def benchmark_put():
    """Two-asset 70/30 put, the main golden-value configuration."""
    market = bk.MarketModel(rate=0.05, sigma=[0.3, 0.2],
                            correlation=[[1.0, 0.6], [0.6, 1.0]])
    option = bk.BasketOption(weights=[0.7, 0.3], strike=50.0, maturity=1.0,
                             kind="put", exercise="american", penalty=100.0)
    return market, option


@pytest.fixture
def low_vol_call():
    """Two-asset call with dividends and a short maturity."""
    market = bk.MarketModel(rate=0.03, sigma=[0.12, 0.14],
                            dividend=[0.01, 0.01],
                            correlation=[[1.0, 0.3], [0.3, 1.0]])
    option = bk.BasketOption(weights=[0.5, 0.5], strike=100.0, maturity=0.5,
                             kind="call", exercise="american", penalty=100.0)
    return market, option


@pytest.fixture
def three_asset_call():
    """Equally weighted three-asset European call."""
    market = bk.MarketModel(rate=0.04, sigma=[0.3, 0.35, 0.4],
                            correlation=[[1.0, 0.5, 0.5],
                                         [0.5, 1.0, 0.5],
                                         [0.5, 0.5, 1.0]])
    option = bk.BasketOption(weights=[1 / 3, 1 / 3, 1 / 3], strike=100.0,
                             maturity=1.0, kind="call", exercise="european",
                             penalty=0.0)
    return market, option


def random_correlation(rng: np.random.Generator, m: int) -> np.ndarray:
    """Strictly positive definite correlation matrix of size m."""
    g = rng.standard_normal((m, m + 2))
    cov = g @ g.T + 0.5 * m * np.eye(m)
    s = np.sqrt(np.diag(cov))
    return cov / np.outer(s, s)


ACCEPTANCE = {}


@pytest.fixture(scope="session")
def acceptance():
    """Recorder for acceptance sub-checks, aggregated per criterion."""

    def record(num, title, label, passed, detail=""):
        entry = ACCEPTANCE.setdefault(num, {"title": title, "checks": []})
        entry["checks"].append((label, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        entry = ACCEPTANCE[num]
        ok = all(passed for _, passed, _ in entry["checks"])
        parts = "; ".join(
            f"{label}: {'ok' if passed else 'FAIL'}"
            + (f" [{detail}]" if detail else "")
            for label, passed, detail in entry["checks"])
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(
            f"[criterion {num}] {status} — {entry['title']}: {parts}")
