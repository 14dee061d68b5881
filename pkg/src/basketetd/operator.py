"""Spatial semi-discretization: stencil coefficients and the sparse operator A.

Central differences on the transformed PDE give, per interior node, the
2M+1-point stencil

    a0    = -(d + r h^2)/h^2,          d,   d_i = D_ii/beta_i^2,  d = sum d_i
    a_+i  = (d_i + (h/beta_i) c_i)/(2 h^2)
    a_-i  = (d_i - (h/beta_i) c_i)/(2 h^2)

so that a0 + sum_i (a_+i + a_-i) = -r identically. Boundary nodes keep their
initial value (the artificial boundary data is constant in tau), hence their
rows of A are identically zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .grid import Grid, interior_mask
from .transform import TransformedProblem


@dataclass
class StencilCoefficients:
    a0: float
    a_plus: np.ndarray
    a_minus: np.ndarray
    d_axis: np.ndarray   # d_i = D_ii / beta_i^2
    d: float
    h: float
    rate: float


def stencil(tp: TransformedProblem, grid: Grid, rate: float) -> StencilCoefficients:
    d_axis = tp.d / grid.beta**2
    d = float(d_axis.sum())
    h = grid.h
    a0 = -(d + rate * h * h) / (h * h)
    a_plus = (d_axis + (h / grid.beta) * tp.c) / (2.0 * h * h)
    a_minus = (d_axis - (h / grid.beta) * tp.c) / (2.0 * h * h)
    return StencilCoefficients(a0=a0, a_plus=a_plus, a_minus=a_minus,
                               d_axis=d_axis, d=d, h=h, rate=float(rate))


@dataclass
class DiscreteOperator:
    matrix: sp.csr_array
    coeffs: StencilCoefficients
    grid: Grid
    interior: np.ndarray   # boolean (total,)


def assemble(coeffs: StencilCoefficients, grid: Grid) -> DiscreteOperator:
    """Assemble A as diagonals at flat offsets 0, +-strides[m].

    The diagonal entry for row i is written only when node i is interior, so
    boundary rows come out identically zero and the periodic wrap-around that
    flat offsets would otherwise introduce never materializes (rows whose
    axis-m neighbor would wrap are boundary rows on that axis).
    """
    interior = interior_mask(grid)
    total = grid.total
    diagonals = [np.where(interior, coeffs.a0, 0.0)]
    offsets = [0]
    for m in range(grid.n_axes):
        off = int(grid.strides[m])
        # entries (i, i+off) for i = 0..total-off-1, valid when row i is interior
        diagonals.append(np.where(interior[: total - off], coeffs.a_plus[m], 0.0))
        offsets.append(off)
        # entries (i+off, i), valid when row i+off is interior
        diagonals.append(np.where(interior[off:], coeffs.a_minus[m], 0.0))
        offsets.append(-off)
    A = sp.diags_array(diagonals, offsets=offsets, shape=(total, total), format="csr")
    A.eliminate_zeros()
    return DiscreteOperator(matrix=A, coeffs=coeffs, grid=grid, interior=interior)


def norm_inf(A: sp.csr_array) -> float:
    """Maximum absolute row sum."""
    return float(np.max(np.abs(A).sum(axis=1))) if A.shape[0] else 0.0


def log_norm_inf(A: sp.csr_array) -> float:
    """mu_inf[A] = max_i (a_ii + sum_{j != i} |a_ij|)."""
    abs_rows = np.asarray(np.abs(A).sum(axis=1)).ravel()
    diag = A.diagonal()
    return float(np.max(abs_rows + diag - np.abs(diag)))


def is_metzler(A: sp.csr_array) -> bool:
    """True iff every off-diagonal entry is nonnegative."""
    coo = A.tocoo()
    off = coo.row != coo.col
    return bool(np.all(coo.data[off] >= 0.0))


def dump_coo(op: DiscreteOperator, path) -> None:
    """Write (row, col, value) triples, one per line, ordered by row then col."""
    coo = op.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w") as f:
        f.write("row,col,value\n")
        for r, c, v in zip(coo.row[order], coo.col[order], coo.data[order]):
            f.write(f"{r},{c},{v:.17g}\n")
