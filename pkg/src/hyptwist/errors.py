"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class HyptwistError(Exception):
    """Base class for every error raised by the package."""


class EffortExceeded(HyptwistError):
    """A computation ran past its configured effort budget."""


class NonCoprimeModuli(HyptwistError):
    pass


class ReciprocityViolation(HyptwistError):
    """Local Hilbert symbols failed the product formula (indicates a bug)."""


class DuplicateRoot(HyptwistError):
    pass


class EvenDegree(HyptwistError):
    pass


class IndexOutOfRange(HyptwistError):
    pass


class FieldMismatch(HyptwistError):
    pass


class BadReductionPrime(HyptwistError):
    pass


class WeierstrassPoint(HyptwistError):
    """The point has y = 0, so [P] - [oo] is 2-torsion."""


class WeierstrassSupport(HyptwistError):
    pass


class EvenPlace(HyptwistError):
    pass


class PreconditionViolated(HyptwistError):
    pass


class NotFound(HyptwistError):
    pass


class UnsatisfiableConstraint(HyptwistError):
    pass


class ConflictingConstraint(HyptwistError):
    pass


class InvalidParameters(HyptwistError):
    pass


class SearchExhausted(HyptwistError):
    pass


class VerificationFailed(HyptwistError):
    """A numerically checked identity that must hold did not."""
