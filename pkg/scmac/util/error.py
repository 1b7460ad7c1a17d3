from typing import Any


class BusinessError(Exception):
    """
    Expected failure of a numerical request. Carries the process exit code
    the command layer terminates with.
    """

    exit_code = 1

    def __init__(self, message: str, code: str = None, details: Any = None):
        super().__init__(message)
        self.message = message
        self.code = code
        self.details = details

    def __str__(self):
        if self.code:
            return f"{self.code}: {self.message or 'None'}"

        return self.message or "None"

    def __repr__(self):
        return f"{type(self).__name__}({self.message!r}, {self.code!r}, {self.details!r})"


class ParameterError(BusinessError):
    """Ensemble, channel or grid parameters violate their invariants."""

    exit_code = 3

    def __init__(self, message: str, details: Any = None):
        super().__init__(message, code="invalid_parameters", details=details)


class UnsupportedProfileError(BusinessError):
    """The operation is only defined for equal degree profiles."""

    exit_code = 3

    def __init__(self, message: str, details: Any = None):
        super().__init__(message, code="unsupported_profile", details=details)


class ConvergenceError(BusinessError):
    """An iteration did not settle within its budget."""

    exit_code = 4

    def __init__(self, message: str, details: Any = None):
        super().__init__(message, code="not_converged", details=details)


class NoSolutionError(BusinessError):
    """Reverse DE cannot reach the target entropy with a channel value in [0, 1]."""

    exit_code = 5

    def __init__(self, message: str, details: Any = None):
        super().__init__(message, code="no_solution", details=details)


class InternalError(Exception):
    exit_code = 1

    def __init__(self, message: str, details: Any = None):
        super().__init__(message)
        self.message = message
        self.details = details

    def __str__(self):
        return self.message

    def __repr__(self):
        return f"InternalError({self.message!r}, {self.details!r})"
