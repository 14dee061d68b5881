"""Sufficient step-size conditions for positivity and sup-norm stability.

Two bounds, both cheap to evaluate before any assembly:

    h <= h_max = min over axes with c_i != 0 of d_i/|c_i|

keeps every off-diagonal stencil weight nonnegative (A Metzler, mu_inf[A] = 0,
so ||e^{Ak}||_inf = 1), and

    k <  k_max = h^2 / (d + (r + lambda) h^2)

keeps the penalty update a convex-like combination, giving 0 <= u <= 1 for
puts. Both are sufficient, not necessary; the CLI refuses to run outside them
unless explicitly overridden.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import Grid
from .transform import TransformedProblem

AUTO_SAFETY = 0.9


def h_condition(d_axis, c) -> float:
    """h_max = min_i d_i/|c_i|; axes with c_i = 0 impose nothing (+inf)."""
    d_axis = np.asarray(d_axis, dtype=float)
    c = np.asarray(c, dtype=float)
    with np.errstate(divide="ignore"):
        ratios = np.where(c != 0.0, d_axis / np.abs(c), np.inf)
    return float(np.min(ratios))


def k_condition(h: float, d: float, rate: float, lam: float) -> float:
    """Strict upper bound on the time step; callers must stay below it."""
    return h * h / (d + (rate + lam) * h * h)


@dataclass
class StabilityReport:
    h_used: float
    h_max: float
    h_ok: bool
    k_used: float
    k_max: float
    k_ok: bool
    lam: float
    d: float
    satisfied: bool

    def as_dict(self) -> dict:
        return {
            "h_used": self.h_used, "h_max": self.h_max, "h_ok": self.h_ok,
            "k_used": self.k_used, "k_max": self.k_max, "k_ok": self.k_ok,
            "lambda": self.lam, "d": self.d, "satisfied": self.satisfied,
        }


def report(tp: TransformedProblem, grid: Grid, rate: float, lam: float,
           k: float) -> StabilityReport:
    d_axis = tp.d / grid.beta**2
    d = float(d_axis.sum())
    h_max = h_condition(d_axis, tp.c)
    k_max = k_condition(grid.h, d, rate, lam)
    h_ok = grid.h <= h_max
    k_ok = k < k_max
    return StabilityReport(h_used=grid.h, h_max=h_max, h_ok=h_ok,
                           k_used=k, k_max=k_max, k_ok=k_ok,
                           lam=lam, d=d, satisfied=h_ok and k_ok)


def auto_time_step(maturity: float, h: float, d: float, rate: float,
                   lam: float, safety: float = AUTO_SAFETY) -> tuple[float, int]:
    """Largest k = T/N_tau with integral N_tau and k <= safety * k_max."""
    target = safety * k_condition(h, d, rate, lam)
    n_steps = max(1, math.ceil(maturity / target))
    return maturity / n_steps, n_steps


def snap_time_step(maturity: float, k: float) -> tuple[float, int]:
    """Round an explicit k down so that N_tau * k = T exactly.

    A k that already divides T (up to roundoff) is returned unchanged in
    effect: N_tau = round(T/k) when the ratio is within 1e-9 of an integer.
    """
    ratio = maturity / k
    n_steps = round(ratio) if abs(ratio - round(ratio)) <= 1e-9 * ratio else math.ceil(ratio)
    n_steps = max(1, n_steps)
    return maturity / n_steps, n_steps
