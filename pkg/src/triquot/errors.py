"""Exception types shared across the package."""


class TriquotError(Exception):
    pass


class InvalidSignature(TriquotError, ValueError):
    """A triple that is not a valid (r, s, t) signature for the requested use."""


class PreconditionError(TriquotError, ValueError):
    pass


class InconsistentCongruences(TriquotError, ValueError):
    """No integer satisfies the given congruences.

    ``clash`` holds the pair of (residue, modulus) constraints that collided,
    when a single pair is responsible.
    """

    def __init__(self, message, clash=None):
        super().__init__(message)
        self.clash = clash


class ResourceLimitError(TriquotError):
    """A configured size or search budget would be exceeded."""

    def __init__(self, message, shard=None):
        super().__init__(message)
        self.shard = shard


class NotSmoothOrder(TriquotError, ValueError):
    """The given order cannot be the order of a smooth quotient."""
