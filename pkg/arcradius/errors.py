class ArcRadiusError(Exception):
    """Base class for every error raised by the package."""


class PreconditionError(ArcRadiusError, ValueError):
    """Input violates an operation's precondition (CLI exit code 2)."""


class BudgetExceededError(PreconditionError):
    def __init__(self, msg, required=None):
        super().__init__(msg)
        self.required = required


class ConvergenceError(ArcRadiusError):
    def __init__(self, msg, estimate=None, iterations=None):
        super().__init__(msg)
        self.estimate = estimate
        self.iterations = iterations


class NormalizationError(ArcRadiusError):
    """Arc rewiring could not reach a prefix-nested strongly connected digraph."""


class ConsistencyError(ArcRadiusError):
    """Two independent computations of the same quantity disagree."""
