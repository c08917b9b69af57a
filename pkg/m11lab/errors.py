class M11Error(Exception):
    """Base class for every error raised by m11lab"""


class DomainError(M11Error, ValueError):
    """An operation was called outside its domain"""


class PoleError(DomainError):
    pass


class BoundaryError(DomainError):
    pass


class BadPrimeError(DomainError):
    pass


class NotEllipticError(DomainError):
    pass


class InvariantViolation(M11Error):
    """An internal certification failed"""


class SearchExhausted(M11Error):
    """A bounded search found nothing; the negative is relative to its box"""
