"""
Exception hierarchy for the weighted Erdős–Burgess laboratory.

User-facing errors derive from ``BurgessLabError`` and also from the built-in
type that best describes them, so callers that only know about ``ValueError``
keep working.
"""
from typing import Optional


class BurgessLabError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(BurgessLabError, ValueError):
    """An environment variable holds a value that cannot be used."""


class RingConstructionError(BurgessLabError, ValueError):
    """A factor descriptor or ring request is invalid (non-prime p, reducible poly, order cap)."""


class RingSpecSyntaxError(RingConstructionError):
    """A ring-spec string could not be parsed."""

    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} (at byte offset {offset})")


class RingMismatchError(BurgessLabError, ValueError):
    """Operands belong to different rings."""


class IdealError(BurgessLabError, ValueError):
    """An element set is not an ideal, or an ideal lacks a required property."""


class AutomorphismError(BurgessLabError, ValueError):
    """A permutation is not a ring automorphism, or a weight descriptor is invalid."""


class SearchLimitError(BurgessLabError):
    """The requested exhaustive search exceeds the configured order cap."""

    def __init__(self, message: str, order: Optional[int] = None, cap: Optional[int] = None):
        self.order = order
        self.cap = cap
        super().__init__(message)


class ConstructionContradiction(BurgessLabError, AssertionError):
    """
    A construction step produced something the lower-bound argument rules out.

    Raised for an empty G_P or H set, or a witness that is not
    idempotent-product free. For supported rings this signals a bug.
    """
