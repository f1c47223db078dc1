"""Exception hierarchy shared by all vpl modules."""


class VplError(Exception):
    """Base class for vpl errors."""


class ValidationError(VplError, ValueError):
    """Invalid physical parameters or configuration."""


class DomainError(VplError, ValueError):
    """Argument outside the admissible normalized-frequency domain."""


class QuadratureError(VplError, RuntimeError):
    """Numerical integration failed to reach the requested tolerance."""


class NumericalError(VplError, RuntimeError):
    """Numerical evolution became unstable or a result is unusable."""
