"""Exception types raised by the twisted_vw package."""


class UnsupportedOrderError(ValueError):
    """A cyclotomic order outside {1, 2} and the odd primes was requested."""


class IncompatibleSeriesError(ValueError):
    """Two series (or a series and an operation) disagree on ramification,
    cyclotomic order or variable."""


class SeriesPrecisionError(ValueError):
    """A truncation order leaves nothing to compute, or a coefficient beyond
    the valid region was requested."""


class InvalidGerbeDataError(ValueError):
    """Rank or Picard number outside the supported range."""


class InternalInconsistencyError(RuntimeError):
    """Two independent constructions of the same object disagree."""

    def __init__(self, message: str, discrepancy=None):
        super().__init__(message)
        self.discrepancy = discrepancy
