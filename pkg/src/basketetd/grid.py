"""Uniform tensor grid in transformed coordinates.

Nodes on axis m are xi_m^j = lo_m + j h_m, j = 0..N_m, with h_m = beta_m h for
a single base step h. Flat index (first axis fastest):

    j = sum_m j_m * strides[m],   strides[m] = prod_{n<m} (N_n + 1),

so the axis-m neighbors of an interior node sit at flat offsets +-strides[m].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InconsistentSteps, IndexOutOfRange, OutOfDomain
from .transform import TransformedProblem, inverse_point

DEFAULT_BOUND = 8.0

STEP_RTOL = 1e-12


@dataclass
class Grid:
    lo: np.ndarray
    hi: np.ndarray
    n: np.ndarray          # intervals per axis
    beta: np.ndarray
    h: float               # base step; per-axis step is beta_m * h
    h_axis: np.ndarray
    shape: tuple           # nodes per axis, n + 1
    strides: np.ndarray
    total: int

    @property
    def n_axes(self) -> int:
        return self.n.size


def build_grid(lo, hi, intervals, beta=None) -> Grid:
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    n = np.atleast_1d(np.asarray(intervals, dtype=np.int64))
    m = n.size
    if lo.shape != (m,) or hi.shape != (m,):
        raise DomainError(f"bounds and interval counts disagree: {lo.shape} {hi.shape} ({m},)")
    beta = np.ones(m) if beta is None else np.atleast_1d(np.asarray(beta, dtype=float))
    if beta.shape != (m,):
        raise DomainError(f"beta must have shape ({m},), got {beta.shape}")
    if np.any(hi <= lo):
        raise DomainError(f"upper bounds must exceed lower bounds, got {lo} .. {hi}")
    if np.any(n < 2):
        raise DomainError(f"need at least 2 intervals per axis, got {n.tolist()}")
    if np.any(beta <= 0.0):
        raise DomainError(f"beta must be positive, got {beta.tolist()}")

    h_axis = (hi - lo) / n
    base = h_axis / beta
    h = float(base[0])
    if np.max(np.abs(base - h)) > STEP_RTOL * abs(h):
        raise InconsistentSteps(
            f"no common base step: per-axis h/beta = {base.tolist()}"
        )
    shape = tuple(int(v) + 1 for v in n)
    strides = np.concatenate(([1], np.cumprod(shape[:-1]))).astype(np.int64)
    return Grid(lo=lo, hi=hi, n=n, beta=beta, h=h, h_axis=h_axis,
                shape=shape, strides=strides, total=int(np.prod(shape)))


def _check_multi(grid: Grid, multi: np.ndarray):
    if np.any(multi < 0) or np.any(multi > grid.n):
        raise IndexOutOfRange(f"multi-index {multi} outside 0..{grid.n.tolist()}")


def flatten(grid: Grid, multi) -> np.ndarray | np.int64:
    """Multi-index (..., M) to flat index."""
    multi = np.asarray(multi, dtype=np.int64)
    _check_multi(grid, multi)
    return multi @ grid.strides


def unflatten(grid: Grid, flat) -> np.ndarray:
    """Flat index to multi-index, shape (..., M)."""
    flat = np.asarray(flat, dtype=np.int64)
    if np.any(flat < 0) or np.any(flat >= grid.total):
        raise IndexOutOfRange(f"flat index {flat} outside 0..{grid.total - 1}")
    out = np.empty(flat.shape + (grid.n_axes,), dtype=np.int64)
    rem = flat
    for m in range(grid.n_axes):
        rem, out[..., m] = np.divmod(rem, grid.shape[m])
    return out


def is_boundary(grid: Grid, multi) -> np.ndarray | bool:
    multi = np.asarray(multi, dtype=np.int64)
    _check_multi(grid, multi)
    return np.any((multi == 0) | (multi == grid.n), axis=-1)


def node_y(grid: Grid, flat) -> np.ndarray:
    return grid.lo + unflatten(grid, flat) * grid.h_axis


def node_s(grid: Grid, tp: TransformedProblem, model, option, flat) -> np.ndarray:
    return inverse_point(tp, model, option, node_y(grid, flat))


def all_y(grid: Grid) -> np.ndarray:
    """Coordinates of every node, shape (total, M), ordered by flat index."""
    return node_y(grid, np.arange(grid.total))


def interior_mask(grid: Grid) -> np.ndarray:
    """Boolean (total,), True on interior nodes."""
    return ~is_boundary(grid, unflatten(grid, np.arange(grid.total)))


def interpolate(grid: Grid, values: np.ndarray, y) -> float:
    """Multilinear interpolation of nodal `values` at a point y.

    Combines the 2^M corners of the enclosing cell. Exact on nodes and on
    globally linear fields. Raises OutOfDomain outside the bounds.
    """
    y = np.asarray(y, dtype=float)
    if y.shape != (grid.n_axes,):
        raise ValueError(f"query point must have shape ({grid.n_axes},), got {y.shape}")
    if np.any(y < grid.lo) or np.any(y > grid.hi):
        raise OutOfDomain(f"point {y.tolist()} outside {grid.lo.tolist()}..{grid.hi.tolist()}")
    t = (y - grid.lo) / grid.h_axis
    cell = np.minimum(np.floor(t).astype(np.int64), grid.n - 1)
    frac = t - cell

    # enumerate corner offsets as bit patterns of 0/1 per axis
    m = grid.n_axes
    bits = (np.arange(2**m)[:, None] >> np.arange(m)[None, :]) & 1
    idx = (cell[None, :] + bits) @ grid.strides
    weights = np.prod(np.where(bits == 1, frac, 1.0 - frac), axis=1)
    return float(weights @ np.asarray(values)[idx])
