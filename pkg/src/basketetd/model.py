"""Market and contract records for basket options.

A basket option on M assets pays (E - sum_i alpha_i S_i)^+ (put) or
(sum_i alpha_i S_i - E)^+ (call). American exercise is handled upstream by a
penalty term with rate lambda; European contracts force lambda = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

KINDS = ("put", "call")
EXERCISES = ("american", "european")


@dataclass
class MarketModel:
    """Risk-free rate, per-asset volatility/dividend yield, correlation matrix."""

    rate: float
    sigma: np.ndarray
    dividend: np.ndarray | None = None
    correlation: np.ndarray | None = None

    def __post_init__(self):
        self.sigma = np.atleast_1d(np.asarray(self.sigma, dtype=float))
        if self.sigma.ndim != 1 or self.sigma.size == 0:
            raise ValueError("sigma must be a non-empty 1-D sequence")
        m = self.sigma.size
        if self.dividend is None:
            self.dividend = np.zeros(m)
        self.dividend = np.atleast_1d(np.asarray(self.dividend, dtype=float))
        if self.dividend.shape != (m,):
            raise ValueError(f"dividend must have shape ({m},), got {self.dividend.shape}")
        if self.correlation is None:
            self.correlation = np.eye(m)
        self.correlation = np.asarray(self.correlation, dtype=float)
        if self.correlation.shape != (m, m):
            raise ValueError(f"correlation must have shape ({m}, {m}), got {self.correlation.shape}")
        self.rate = float(self.rate)

    @property
    def n_assets(self) -> int:
        return self.sigma.size


@dataclass
class BasketOption:
    """Contract terms. `penalty` is the American penalty rate lambda (1/year)."""

    weights: np.ndarray
    strike: float
    maturity: float
    kind: str = "put"
    exercise: str = "american"
    penalty: float = 0.0

    def __post_init__(self):
        self.weights = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if self.weights.ndim != 1 or self.weights.size == 0:
            raise ValueError("weights must be a non-empty 1-D sequence")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.exercise not in EXERCISES:
            raise ValueError(f"exercise must be one of {EXERCISES}, got {self.exercise!r}")
        self.strike = float(self.strike)
        self.maturity = float(self.maturity)
        self.penalty = float(self.penalty)

    @property
    def n_assets(self) -> int:
        return self.weights.size

    @property
    def penalty_effective(self) -> float:
        """Penalty actually applied by the scheme: European disables it."""
        return 0.0 if self.exercise == "european" else self.penalty


def payoff(option: BasketOption, spots) -> np.ndarray | float:
    """Payoff at S, vectorized over the leading axes of `spots` (last axis = asset)."""
    s = np.asarray(spots, dtype=float)
    basket = s @ option.weights
    if option.kind == "put":
        return np.maximum(option.strike - basket, 0.0)
    return np.maximum(basket - option.strike, 0.0)


@dataclass
class ValidationReport:
    """Plain list of violated invariants; empty means the inputs are usable."""

    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __str__(self) -> str:
        return "ok" if self.ok else "; ".join(self.problems)


def _correlation_problems(corr: np.ndarray) -> list[str]:
    out = []
    if not np.all(np.isfinite(corr)):
        return ["correlation has non-finite entries"]
    if np.max(np.abs(corr - corr.T)) > 1e-12:
        out.append("correlation is not symmetric")
    if np.max(np.abs(np.diag(corr) - 1.0)) > 1e-12:
        out.append("correlation diagonal is not 1")
    if np.max(np.abs(corr)) > 1.0 + 1e-12:
        out.append("correlation has |rho| > 1")
    if not out:
        # strict positive definiteness, needed because the factor diagonal
        # D_ii ends up in denominators downstream
        try:
            np.linalg.cholesky(corr)
        except np.linalg.LinAlgError:
            out.append("correlation is not strictly positive definite")
    return out


def validate(model: MarketModel, option: BasketOption | None = None) -> ValidationReport:
    """Check every model/contract invariant and report violations by name."""
    problems = []
    if not np.isfinite(model.rate):
        problems.append(f"rate is not finite: {model.rate}")
    if not np.all(np.isfinite(model.sigma)) or np.any(model.sigma <= 0.0):
        problems.append(f"sigma must be positive and finite, got {model.sigma.tolist()}")
    if not np.all(np.isfinite(model.dividend)) or np.any(model.dividend < 0.0):
        problems.append(f"dividend must be nonnegative, got {model.dividend.tolist()}")
    problems += _correlation_problems(model.correlation)

    if option is not None:
        if option.n_assets != model.n_assets:
            problems.append(
                f"weights length {option.n_assets} != number of assets {model.n_assets}"
            )
        if not np.all(np.isfinite(option.weights)) or np.any(option.weights <= 0.0):
            problems.append(f"weights must be positive, got {option.weights.tolist()}")
        if not np.isfinite(option.strike) or option.strike <= 0.0:
            problems.append(f"strike must be positive, got {option.strike}")
        if not np.isfinite(option.maturity) or option.maturity <= 0.0:
            problems.append(f"maturity must be positive, got {option.maturity}")
        if not np.isfinite(option.penalty) or option.penalty < 0.0:
            problems.append(f"penalty must be nonnegative, got {option.penalty}")
    return ValidationReport(problems)
