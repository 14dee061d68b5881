"""Reference pricers, independent of the PDE pipeline.

Three oracles with nothing in common with the finite-difference code path
except the contract definitions: a correlated two-asset binomial tree
(American or European baskets), plain Monte Carlo under correlated geometric
Brownian motion (European, any number of assets), and a one-dimensional CRR
tree. They exist to cross-check prices, so they stay deliberately simple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidProbabilities
from .model import BasketOption, MarketModel, payoff
from .transform import ldlt


@dataclass
class TreeParams:
    steps: int = 1000


@dataclass
class McParams:
    paths: int = 1_000_000
    seed: int = 0
    antithetic: bool = True


@dataclass
class McResult:
    price: float
    stderr: float
    paths: int


def tree_price_2asset(model: MarketModel, option: BasketOption, spot,
                      params: TreeParams = TreeParams()) -> float:
    """Recombining 4-branch lattice for two correlated assets.

    Joint branch probabilities for moves (s1, s2), s in {+1,-1}:

        p = (1 + s1 s2 rho + sqrt(dt) (s1 mu1/sigma1 + s2 mu2/sigma2)) / 4

    with mu_i = r - q_i - sigma_i^2/2. They sum to 1 by construction; each
    must land in [0,1], otherwise the step count is too small for these
    parameters and InvalidProbabilities is raised.
    """
    if model.n_assets != 2:
        raise ValueError("two-asset tree requires exactly 2 assets")
    spot = np.asarray(spot, dtype=float)
    n = int(params.steps)
    dt = option.maturity / n
    sig = model.sigma
    mu = model.rate - model.dividend - 0.5 * sig**2
    rho = float(model.correlation[0, 1])
    drift = math.sqrt(dt) * (mu / sig)

    probs = {}
    for s1 in (+1, -1):
        for s2 in (+1, -1):
            p = (1.0 + s1 * s2 * rho + s1 * drift[0] + s2 * drift[1]) / 4.0
            if not 0.0 <= p <= 1.0:
                raise InvalidProbabilities(
                    f"branch ({s1:+d},{s2:+d}) probability {p:.4f} outside [0,1]; "
                    f"increase steps beyond {n}"
                )
            probs[(s1, s2)] = p
    disc = math.exp(-model.rate * dt)
    american = option.exercise == "american"

    def level_spots(m: int) -> tuple[np.ndarray, np.ndarray]:
        ups = 2.0 * np.arange(m + 1) - m
        return (spot[0] * np.exp(sig[0] * math.sqrt(dt) * ups),
                spot[1] * np.exp(sig[1] * math.sqrt(dt) * ups))

    def intrinsic(m: int) -> np.ndarray:
        s1, s2 = level_spots(m)
        basket = option.weights[0] * s1[:, None] + option.weights[1] * s2[None, :]
        if option.kind == "put":
            return np.maximum(option.strike - basket, 0.0)
        return np.maximum(basket - option.strike, 0.0)

    v = intrinsic(n)
    for m in range(n - 1, -1, -1):
        v = disc * (probs[(+1, +1)] * v[1:, 1:] + probs[(+1, -1)] * v[1:, :-1]
                    + probs[(-1, +1)] * v[:-1, 1:] + probs[(-1, -1)] * v[:-1, :-1])
        if american:
            v = np.maximum(v, intrinsic(m))
    return float(v[0, 0])


def crr_price_1d(model: MarketModel, option: BasketOption, spot: float,
                 steps: int = 1000) -> float:
    """Standard one-asset CRR tree, American or European."""
    if model.n_assets != 1:
        raise ValueError("CRR oracle requires exactly 1 asset")
    n = int(steps)
    dt = option.maturity / n
    sig = float(model.sigma[0])
    up = math.exp(sig * math.sqrt(dt))
    down = 1.0 / up
    growth = math.exp((model.rate - float(model.dividend[0])) * dt)
    p = (growth - down) / (up - down)
    if not 0.0 <= p <= 1.0:
        raise InvalidProbabilities(f"CRR probability {p:.4f} outside [0,1] at {n} steps")
    disc = math.exp(-model.rate * dt)
    w = float(option.weights[0])
    american = option.exercise == "american"

    def intrinsic(m: int) -> np.ndarray:
        s = spot * np.exp(sig * math.sqrt(dt) * (2.0 * np.arange(m + 1) - m))
        if option.kind == "put":
            return np.maximum(option.strike - w * s, 0.0)
        return np.maximum(w * s - option.strike, 0.0)

    v = intrinsic(n)
    for m in range(n - 1, -1, -1):
        v = disc * (p * v[1:] + (1.0 - p) * v[:-1])
        if american:
            v = np.maximum(v, intrinsic(m))
    return float(v[0])


def mc_price_european(model: MarketModel, option: BasketOption, spot,
                      params: McParams = McParams()) -> McResult:
    """Discounted expected payoff under correlated GBM, exact terminal sampling.

    Correlation enters through F = L sqrt(D) from the LDL^T factor of R, so
    that F F^T = R. Antithetic pairing averages each draw with its mirror
    before the standard error is taken.
    """
    if option.exercise != "european":
        raise ValueError("Monte Carlo oracle prices European exercise only")
    spot = np.asarray(spot, dtype=float)
    t = option.maturity
    l_factor, d_diag = ldlt(model.correlation)
    f = l_factor * np.sqrt(d_diag)[None, :]
    drift = (model.rate - model.dividend - 0.5 * model.sigma**2) * t
    vol = model.sigma * math.sqrt(t)
    disc = math.exp(-model.rate * t)
    rng = np.random.default_rng(params.seed)

    if params.antithetic:
        half = max(1, params.paths // 2)
        z = rng.standard_normal((half, model.n_assets))
        x = z @ f.T
        pay_up = payoff(option, spot * np.exp(drift + vol * x))
        pay_dn = payoff(option, spot * np.exp(drift - vol * x))
        samples = disc * 0.5 * (pay_up + pay_dn)
        used = 2 * half
    else:
        z = rng.standard_normal((params.paths, model.n_assets))
        x = z @ f.T
        samples = disc * payoff(option, spot * np.exp(drift + vol * x))
        used = params.paths
    price = float(samples.mean())
    stderr = float(samples.std(ddof=1) / math.sqrt(samples.size))
    return McResult(price=price, stderr=stderr, paths=used)
