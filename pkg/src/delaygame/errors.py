"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class ScenarioError(ValueError):
    """A scenario file or scenario value failed validation.

    ``line`` is the 1-based line number in the source file, when known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericError(ArithmeticError):
    """A numerical procedure failed to produce a trustworthy answer."""


class IntegrationError(NumericError):
    """The integrator produced a non-finite state at time ``time``."""

    def __init__(self, message, time=None):
        self.time = time
        if time is not None:
            message = f"{message} (t = {time:.6g})"
        super().__init__(message)
