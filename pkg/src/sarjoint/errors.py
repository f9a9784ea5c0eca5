"""Exception types. The CLI maps each family onto its exit code."""


class SarError(Exception):
    """Base class for toolkit errors."""


class DataFormatError(SarError, ValueError):
    """Malformed or inconsistent input data (files, headers, shapes)."""


class NumericalError(SarError, ArithmeticError):
    """A quantity is undefined for the given data (e.g. zero correlation)."""
