"""Exception types shared across the library."""


class RiemannDiagError(Exception):
    """Base class for library errors."""


class MissingPeriod(RiemannDiagError):
    """An operation requires a declared (and verifiable) period."""


class PeriodNotFound(RiemannDiagError):
    """Automatic period detection failed within the search bound."""


class NotNonNegative(RiemannDiagError):
    """A weight has a negative value where non-negativity is required."""


class NotUnitSums(RiemannDiagError):
    """A weight does not have all row and column sums equal to 1."""


class FoldMismatch(RiemannDiagError):
    """Row/column sums of a weight are not all equal to the stated fold."""


class NegativeWeight(RiemannDiagError):
    """Graph-based Betti analysis requires a non-negative weight."""


class NotAMatching(RiemannDiagError):
    """A weight was expected to be a perfect matching but is not."""


class LengthMismatch(RiemannDiagError):
    """Two matching lists must have equal length."""


class InputError(RiemannDiagError):
    """Malformed JSON input or CLI argument; message names the field."""
