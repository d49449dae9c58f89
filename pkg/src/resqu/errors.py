"""Exception hierarchy shared across the package.

Each error maps to a CLI exit code via its ``exit_code`` attribute.
"""


class ResquError(Exception):
    exit_code = 1


class ValidationError(ResquError, ValueError):
    """Invalid input value (probability out of range, bad table, ...)."""

    exit_code = 1


class DomainError(ValidationError):
    """Non-finite or otherwise out-of-domain numeric input."""


class SingularCutoffError(ValidationError):
    """Cutoff undefined because the detector has zero sensitivity."""


class DegeneratePriorError(ValidationError):
    """Target prior at 0 or 1, where the optimal criterion is undefined."""


class UnreachableBranchError(ResquError):
    """A classification branch of the automation has zero probability."""

    def __init__(self, branch, message=None):
        self.branch = branch
        super().__init__(message or f"automation branch {branch!r} has zero probability")


class DegenerateEntropyError(ResquError):
    """A ratio's denominator entropy is zero, so the ratio is undefined."""

    exit_code = 3

    def __init__(self, message, h_denominator=0.0, h_numerator=None):
        self.h_denominator = h_denominator
        self.h_numerator = h_numerator
        super().__init__(message)


class DegenerateSampleError(ResquError):
    """Monte Carlo sample in which a variable never varied."""

    exit_code = 4


class ModelValidationError(ResquError):
    """A flow model failed structural validation."""

    exit_code = 2

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(str(d) for d in self.diagnostics)
        super().__init__(f"invalid flow model: {lines}")


class StateSpaceError(ModelValidationError):
    """Joint state space exceeds the enumeration guard."""

    def __init__(self, cardinality, limit):
        self.cardinality = cardinality
        self.limit = limit
        ResquError.__init__(
            self, f"joint state space has {cardinality} atoms, limit is {limit}"
        )
        self.diagnostics = [str(self)]
