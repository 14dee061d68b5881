"""Multi-asset basket option pricing on a decorrelated grid.

Pipeline: LDL^T change of variables (no cross derivatives) -> uniform tensor
grid -> banded operator A -> explicit exponential time differencing with a
Simpson phi for the American penalty, under provable positivity and sup-norm
step-size conditions. Independent tree and Monte Carlo oracles included.
"""

from .errors import (ConfigError, ConvergenceFailure, DomainError,
                     InconsistentSteps, IndexOutOfRange, InvalidProbabilities,
                     NonPositivePivot, OutOfDomain)
from .model import BasketOption, MarketModel, ValidationReport, payoff, validate
from .transform import TransformedProblem, build_transform, forward_point, inverse_point, ldlt
from .grid import Grid, build_grid, interpolate
from .operator import DiscreteOperator, StencilCoefficients, assemble, stencil
from .stability import StabilityReport, auto_time_step, h_condition, k_condition, report
from .expo import ActionOnly, DenseCached, exp_action, make_backend, phi_action
from .stepper import RunResult, SolverState, initial_state, initial_vector, run, step
from .oracles import (McParams, McResult, TreeParams, crr_price_1d,
                      mc_price_european, tree_price_2asset)

__version__ = "0.1.0"

__all__ = [
    "BasketOption", "MarketModel", "ValidationReport", "payoff", "validate",
    "TransformedProblem", "build_transform", "forward_point", "inverse_point", "ldlt",
    "Grid", "build_grid", "interpolate",
    "DiscreteOperator", "StencilCoefficients", "assemble", "stencil",
    "StabilityReport", "auto_time_step", "h_condition", "k_condition", "report",
    "ActionOnly", "DenseCached", "exp_action", "make_backend", "phi_action",
    "RunResult", "SolverState", "initial_state", "initial_vector", "run", "step",
    "McParams", "McResult", "TreeParams", "crr_price_1d",
    "mc_price_european", "tree_price_2asset",
    "ConfigError", "ConvergenceFailure", "DomainError", "InconsistentSteps",
    "IndexOutOfRange", "InvalidProbabilities", "NonPositivePivot", "OutOfDomain",
]
