"""Exception and warning types raised across the package."""


class KsnError(Exception):
    """Base class for all package errors."""


class DomainError(KsnError, ValueError):
    """An argument lies outside the domain of the function being evaluated."""


class GroupingAmbiguity(KsnError):
    """Two float values are too close to be split and too far to be merged."""

    def __init__(self, block, left, right, gap, threshold):
        self.block = block
        self.left = left
        self.right = right
        self.gap = gap
        self.threshold = threshold
        super().__init__(
            f"ambiguous grouping in block {block}: gap {gap!r} between "
            f"{left!r} and {right!r} lies in ({threshold!r}, {10 * threshold!r})"
        )


class NumericalRankWarning(UserWarning):
    """The float solve is close to rank deficient."""


class SizeError(KsnError, ValueError):
    """Input too large for an exhaustive routine."""


class InvalidWitness(KsnError, ValueError):
    """A coefficient vector does not annihilate every block."""


class Unrepresentable(KsnError):
    """The sample contains a closed path, so some targets cannot be fitted.

    ``indices`` are the sample positions carrying the path and ``mu`` the
    (all nonzero) coefficients on them, in the same order.
    """

    def __init__(self, indices, mu):
        self.indices = list(indices)
        self.mu = list(mu)
        body = ", ".join(str(m) for m in self.mu)
        super().__init__(f"closed path on points {self.indices}: witness ({body})")


class FormatError(KsnError, ValueError):
    """A network or dataset file is malformed."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
