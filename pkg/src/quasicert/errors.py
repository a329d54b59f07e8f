"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the operation's domain."""


class CapacityError(ValueError):
    """An input exceeds a size guard of an exact routine."""


class InvariantBreach(AssertionError):
    """A mathematical identity that must always hold was violated."""


class ParseError(ValueError):
    """A graph, pattern or kernel file is malformed."""
