"""Variable changes that remove cross derivatives from the pricing PDE.

Two substitutions are composed. First the dimensionless log change
x_i = (1/sigma_i) ln(S_i/E), V = P/E, which normalizes the diffusion matrix to
the correlation matrix R. Then y = C x with C = L^{-1} from the factorization
R = L D L^T (L unit lower-triangular, D positive diagonal), after which the
second-order part is diagonal:

    dU/dtau = 1/2 sum_i D_ii d2U/dy_i2 + sum_i c_i dU/dy_i - r U + penalty,

with drift coefficients c_i = sum_j C_ij delta_j, where
delta_j = (r - q_j - sigma_j^2/2)/sigma_j.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DomainError, NonPositivePivot
from .model import BasketOption, MarketModel

PIVOT_RTOL = 1e-12


def ldlt(corr) -> tuple[np.ndarray, np.ndarray]:
    """Unpivoted LDL^T of a symmetric matrix.

    Returns (L, d) with L unit lower-triangular and d the diagonal of D.
    Raises NonPositivePivot when a pivot falls at or below
    PIVOT_RTOL * max diagonal, which signals a (numerically) degenerate
    correlation matrix. No pivoting: the axis order of the input is preserved,
    matching the closed forms used for the 2- and 3-asset stencils.
    """
    R = np.asarray(corr, dtype=float)
    m = R.shape[0]
    if R.shape != (m, m):
        raise ValueError(f"expected a square matrix, got shape {R.shape}")
    L = np.eye(m)
    d = np.zeros(m)
    tol = PIVOT_RTOL * np.max(np.abs(np.diag(R)))
    for j in range(m):
        d[j] = R[j, j] - np.dot(L[j, :j] ** 2, d[:j])
        if d[j] <= tol:
            raise NonPositivePivot(
                f"pivot D_{j}{j} = {d[j]:.3e} <= tolerance {tol:.3e}; "
                "correlation matrix is not strictly positive definite"
            )
        if j + 1 < m:
            L[j + 1:, j] = (R[j + 1:, j] - L[j + 1:, :j] @ (L[j, :j] * d[:j])) / d[j]
    return L, d


@dataclass
class TransformedProblem:
    """Factor pair, its inverse, and the transformed drift coefficients."""

    L: np.ndarray        # unit lower-triangular, R = L diag(d) L^T
    d: np.ndarray        # diagonal of D, all > 0
    C: np.ndarray        # L^{-1}; y = C x
    delta: np.ndarray    # (r - q_i - sigma_i^2/2)/sigma_i
    c: np.ndarray        # C @ delta

    @property
    def n_assets(self) -> int:
        return self.d.size


def drift_coefficients(C: np.ndarray, model: MarketModel) -> tuple[np.ndarray, np.ndarray]:
    delta = (model.rate - model.dividend - 0.5 * model.sigma**2) / model.sigma
    return delta, C @ delta


def build_transform(model: MarketModel) -> TransformedProblem:
    L, d = ldlt(model.correlation)
    C = solve_triangular(L, np.eye(model.n_assets), lower=True, unit_diagonal=True)
    delta, c = drift_coefficients(C, model)
    return TransformedProblem(L=L, d=d, C=C, delta=delta, c=c)


def forward_point(tp: TransformedProblem, model: MarketModel, option: BasketOption, spots):
    """Map prices S (last axis = asset) to transformed coordinates y."""
    s = np.asarray(spots, dtype=float)
    if np.any(s <= 0.0):
        raise DomainError(f"spot prices must be positive, got {s}")
    x = np.log(s / option.strike) / model.sigma
    return x @ tp.C.T


def inverse_point(tp: TransformedProblem, model: MarketModel, option: BasketOption, y):
    """Map transformed coordinates y back to prices, x = L y, S = E exp(sigma x)."""
    x = np.asarray(y, dtype=float) @ tp.L.T
    return option.strike * np.exp(model.sigma * x)
