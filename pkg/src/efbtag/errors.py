"""Exception hierarchy shared by all efbtag modules."""


class EfbtagError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(EfbtagError):
    """An argument violates a documented precondition."""


class DataError(EfbtagError):
    """A corpus file, tag map, or model file could not be parsed."""


class NumericalDegeneracyError(EfbtagError):
    """A posterior denominator underflowed to zero at some position."""
