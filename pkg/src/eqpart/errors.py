"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An input violates the documented precondition of an operation."""


class SizeLimitError(RuntimeError):
    """An exhaustive routine was asked to work beyond its configured bound."""


class InvariantError(RuntimeError):
    """An internal invariant failed; this always indicates a bug."""
