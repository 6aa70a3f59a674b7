"""Exception types shared across the package."""


class CollarExtError(Exception):
    """Base class for errors raised by this package."""


class ClearanceError(CollarExtError, ValueError):
    """Point sits too close to the chart boundary for the finite-difference stencil."""


class DefinitenessError(CollarExtError, ValueError):
    """A metric evaluation produced a matrix that is not positive definite."""

    def __init__(self, message, point=None, eigenvalue=None):
        super().__init__(message)
        self.point = point
        self.eigenvalue = eigenvalue


class DegeneratePlaneError(CollarExtError, ValueError):
    """The two tangent vectors span a numerically degenerate 2-plane."""


class DomainMismatchError(CollarExtError, ValueError):
    """Two chart-level objects live on different coordinate boxes."""


class SearchFailureError(CollarExtError, RuntimeError):
    """A doubling parameter search hit its cap without meeting its target."""

    def __init__(self, message, trace=None, worst=None):
        super().__init__(message)
        self.trace = list(trace) if trace is not None else []
        self.worst = worst


class BudgetExceededError(CollarExtError, RuntimeError):
    """An enumeration outgrew its element budget."""


class ConfigError(CollarExtError, ValueError):
    """A scenario configuration failed to parse or validate."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = f" (line {line})" if line is not None else ""
        super().__init__(message + where)
