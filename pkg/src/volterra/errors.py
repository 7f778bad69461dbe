"""Exception types shared across the package."""


class VolterraError(Exception):
    """Base class for all library errors."""


class GridMismatch(VolterraError):
    """Operands live on different grids."""


class DimMismatch(VolterraError):
    """Vector dimensions of two objects disagree."""


class NotAnchoredAtAlpha(VolterraError):
    """Function does not vanish at the left endpoint of the interval."""


class OutsideTriangle(VolterraError):
    """Kernel evaluation requested outside the causal triangle tau <= t."""


class KernelContract(VolterraError):
    """A kernel constructor precondition is violated."""


class MissingBounds(VolterraError):
    """Kernel does not declare the growth bounds a check requires."""


class SingularBlock(VolterraError):
    """A diagonal block of the collocation system is not invertible.

    Usually a signal that the grid is too coarse for the linearized
    kernel rather than a genuine rank deficiency of the problem.
    """


class SolverError(VolterraError):
    """Base class for iterative-solver failures.

    Carries the partial report assembled up to the failure so callers
    can inspect histories without re-running the solve.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class MaxIterExceeded(SolverError):
    """Iteration budget exhausted before the tolerance was met."""


class LineSearchStalled(SolverError):
    """Backtracking produced no decrease above the minimal step size."""


class ConfigError(VolterraError):
    """Problem configuration file is malformed or inconsistent."""
