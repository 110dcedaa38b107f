"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Matrix shapes do not fit together."""


class IndexSetError(ValueError):
    """An index set is malformed or out of range."""


class ConsistencyError(RuntimeError):
    """Two independent computations disagreed.

    Raised only when an internal cross-check fails. Seeing this means a bug
    in the library, not bad input.
    """


class WitnessLiftError(ConsistencyError):
    """Perturbing a restricted matrix list into the open class failed."""
