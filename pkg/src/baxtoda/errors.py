"""Exception hierarchy shared by all baxtoda modules."""


class BaxtodaError(Exception):
    """Base class for every error raised by the library."""


class DomainError(BaxtodaError, ValueError):
    """Argument outside the domain of the evaluated object, or non-finite samples."""


class PoleError(DomainError):
    """Evaluation at (or numerically on top of) a pole."""


class NonConvergence(BaxtodaError, ArithmeticError):
    """An iterative or refining procedure exhausted its budget."""


class UnsupportedRank(BaxtodaError, ValueError):
    pass


class DimensionMismatch(BaxtodaError, ValueError):
    pass


class CutoffError(BaxtodaError, ArithmeticError):
    """A truncation tail bound exceeds the requested tolerance."""


class UsageError(BaxtodaError):
    pass


# alias raised by the Schur routines
DimensionError = DimensionMismatch
