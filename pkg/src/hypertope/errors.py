"""Exception types shared across the package."""


class HypertopeError(Exception):
    pass


class DegreeMismatch(HypertopeError, ValueError):
    pass


class CapExceeded(HypertopeError):
    """An enumeration would exceed its configured budget."""

    def __init__(self, what: str, cap: int, needed=None):
        self.what = what
        self.cap = cap
        self.needed = needed
        msg = f"{what} exceeds cap {cap}"
        if needed is not None:
            msg += f" (needs {needed})"
        super().__init__(msg)


class NotSubgroup(HypertopeError):
    pass


class NotString(HypertopeError):
    pass


class DiagramMismatch(HypertopeError):
    pass


class OrderMismatch(HypertopeError):
    pass


class RelatorValidationFailed(HypertopeError):
    pass


class FaithfulnessFallbackExceeded(CapExceeded):
    pass


class UnrecognizedSphericalType(HypertopeError):
    pass


class NotAFlag(HypertopeError):
    pass


class SymbolError(HypertopeError, ValueError):
    """A construction symbol could not be parsed."""
