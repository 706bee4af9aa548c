"""Exception hierarchy shared by every qlin module."""


class QlinError(Exception):
    """Base class for all errors raised by qlin."""


class InputError(QlinError, ValueError):
    """Malformed input: wrong dimensions, bad values, schema violations.

    ``path`` names the offending location (e.g. ``"c"`` or ``"Q[1]"``)
    when one is known.
    """

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class InfeasibleError(QlinError):
    """An instance or relaxation admits no feasible point."""


class EnumerationCapError(QlinError):
    """An exhaustive oracle was asked to enumerate beyond its cap."""


class DecodeError(QlinError):
    """A binary vector does not encode a valid threading."""


class CutsUnavailableError(QlinError):
    """Cuts requested for a problem without a quadratic constraint."""


class NumericalError(QlinError):
    """The LP solver lost accuracy; ``report`` holds diagnostics."""

    def __init__(self, message, report=None):
        self.report = report or {}
        super().__init__(message)
