"""Exception hierarchy shared by every sub-package."""

from typing import Iterable, Optional


class PowvarError(Exception):
    """Base class for errors raised by the laboratory."""


class ModelValidationError(PowvarError, ValueError):
    def __init__(self, violations: Iterable[str]):
        self.violations = list(violations)
        super().__init__("invalid model: " + "; ".join(self.violations))


class GridError(PowvarError, ValueError):
    """Observation grid incompatible with a simulation grid."""


class GridResolutionWarning(UserWarning):
    """Too many expected jumps per fine step to isolate them."""


class AdmissibilityError(PowvarError):
    """A theorem does not cover the requested model/function combination.

    ``condition`` quotes the violated inequality or hypothesis. For the CLT
    regions ``exponent`` carries the rate exponent of the degenerate branch.
    """

    def __init__(self, message: str, condition: Optional[str] = None, exponent: Optional[float] = None):
        self.condition = condition
        self.exponent = exponent
        super().__init__(message)


class NoLimitTargetError(AdmissibilityError):
    pass


class NotLevyError(AdmissibilityError):
    pass


class DegenerateVarianceError(PowvarError):
    pass


class QuadratureError(PowvarError, ArithmeticError):
    """A Gaussian expectation did not reach its tolerance by any rule."""


class ReportError(PowvarError):
    pass


class ConfigError(PowvarError):
    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.message = message
        self.path = path
        self.line = line
        super().__init__(message)

    def __str__(self) -> str:
        where = self.path or "<config>"
        if self.line is not None:
            where = f"{where}:{self.line}"
        return f"{where}: {self.message}"
