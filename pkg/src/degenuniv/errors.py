"""Exception types shared across the package."""


class DegenunivError(Exception):
    """Base class for all package errors."""


class PreconditionError(DegenunivError, ValueError):
    """An input violates an operation's precondition."""


class EdgeListError(DegenunivError, ValueError):
    """Malformed edge-list or label text."""


class SizeOverflowError(DegenunivError):
    """A host graph would exceed the configured vertex cap."""


class InvariantBreach(DegenunivError, AssertionError):
    """An internal invariant that should hold was found broken."""
