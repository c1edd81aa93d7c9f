"""Exception and warning types raised by sphwave."""


class SphwaveError(Exception):
    """Base class for all sphwave errors."""


class DomainError(SphwaveError, ValueError):
    """Argument outside the supported envelope of a function."""


class SpecialFunctionOverflow(SphwaveError, OverflowError):
    """Intermediate magnitude would exceed the floating-point range."""


class DegenerateWavenumberError(SphwaveError, ValueError):
    """Two wavenumbers coincide closely enough that a closed form divides by ~0."""


class SingularSystemError(SphwaveError, ArithmeticError):
    """A per-mode 2x2 system (or scalar bracket) is numerically singular.

    Near-singular modes are physical quasi-bound states, so they are reported
    rather than regularized.
    """

    def __init__(self, message, l=None, condition=None):
        super().__init__(message)
        self.l = l
        self.condition = condition


class StepTooLargeError(SphwaveError, ValueError):
    """Numerov step exceeds the accuracy bound."""


class ConfigError(SphwaveError, ValueError):
    """Malformed run configuration."""

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class QuadratureWarning(UserWarning):
    """Adaptive quadrature stopped before reaching its tolerance."""


class UnitarityWarning(UserWarning):
    """|S_l| deviates from 1 by more than the allowed slack."""


class LmaxCapWarning(UserWarning):
    """Partial-wave truncation criterion was not met at the cap."""
