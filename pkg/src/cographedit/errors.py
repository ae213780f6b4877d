"""Exception types raised by the solvers.

Every domain error derives from :class:`CographError` so the CLI can map
them to exit status 1 in one place.
"""


class CographError(Exception):
    pass


class DimensionError(CographError, ValueError):
    """Two graphs (or a graph and a weight matrix) disagree on ``n``."""


class DomainError(CographError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class NotCograph(CographError):
    """Raised when a cograph is required but the graph has an induced P4."""

    def __init__(self, witness):
        self.witness = tuple(witness)
        super().__init__(f"graph contains an induced P4: {self.witness}")


class SizeExceeded(CographError):
    def __init__(self, n, cap):
        self.n = n
        self.cap = cap
        super().__init__(f"n={n} exceeds the exact-solver cap of {cap} vertices")


class RetryLimitExceeded(CographError):
    pass


class NoValidFlip(CographError):
    """No remaining vertex pair introduces a new P4; the instance is rejected."""
