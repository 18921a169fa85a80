"""Exception types shared across the package."""


class PolyPrimeError(Exception):
    """Base class for all errors raised by polyprime."""


class InvalidArgument(PolyPrimeError, ValueError):
    """An argument violates a documented precondition."""


class CorruptCache(PolyPrimeError):
    """A sieve cache file failed header or length validation."""


class FitError(PolyPrimeError):
    """The exponent regression is degenerate."""


class ResourceError(PolyPrimeError):
    """Allocation or I/O failed while building a large structure."""
