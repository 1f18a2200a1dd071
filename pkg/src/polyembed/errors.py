"""Exception types raised across the package."""


class PolyembedError(Exception):
    """Base class for domain errors (CLI exit status 1)."""


class MalformedMatching(PolyembedError):
    pass


class LengthMismatch(PolyembedError, ValueError):
    pass


class WrongLevel(PolyembedError, ValueError):
    pass


class Unsupported(PolyembedError, ValueError):
    pass


class DegenerateEigenvector(PolyembedError, ArithmeticError):
    pass


class UnknownComponent(PolyembedError, KeyError):
    pass


class NonHorizontalClass(PolyembedError, ValueError):
    pass


class OutOfRange(PolyembedError, ValueError):
    pass


class NotNeeded(PolyembedError):
    """Raised when the volume constraint alone already obstructs the embedding."""
