"""Exception hierarchy shared by the library and the command line."""


class BpregError(Exception):
    """Base class for all package errors."""


class ParameterError(BpregError, ValueError):
    """A distribution or configuration parameter is outside its domain."""


class DataError(BpregError, ValueError):
    """Input data is malformed or inconsistent with the requested model."""


class NumericalError(BpregError, ArithmeticError):
    """A linear-algebra step failed even after jitter was applied."""
