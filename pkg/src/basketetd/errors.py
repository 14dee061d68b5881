"""Typed exceptions shared across the pricing pipeline."""


class NonPositivePivot(ValueError):
    """LDL^T hit a pivot at or below tolerance: correlation matrix is degenerate."""


class DomainError(ValueError):
    """Input outside the mathematical domain (non-positive spot, bad bounds)."""


class InconsistentSteps(ValueError):
    """Per-axis mesh widths do not share a common base step h."""


class IndexOutOfRange(IndexError):
    """Grid index outside [0, N_m] on some axis."""


class ConvergenceFailure(RuntimeError):
    """Matrix exponential action did not meet tolerance within its matvec budget."""


class InvalidProbabilities(ValueError):
    """Lattice branch probabilities left [0, 1]; refine the step count."""


class OutOfDomain(ValueError):
    """Query point maps outside the truncated computational domain."""


class ConfigError(ValueError):
    """Run configuration failed parsing or validation."""
