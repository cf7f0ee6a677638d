"""Exception hierarchy.

Every exception carries a machine-readable ``kind`` and a ``payload()`` used
by the CLI to build its JSON error report.
"""

from __future__ import annotations


class WildramError(Exception):
    kind = "error"

    def payload(self) -> dict:
        return {"kind": self.kind, "message": str(self)}


class PrecisionExhausted(WildramError, ArithmeticError):
    """A truncated computation could not certify its answer.

    ``window`` is the window in force; ``suggested`` is a window that would
    have sufficed (or the next window to try when that cannot be known).
    """

    kind = "precision_exhausted"

    def __init__(self, message: str, window: int | None = None, suggested: int | None = None):
        super().__init__(message)
        self.window = window
        self.suggested = suggested

    def payload(self) -> dict:
        d = super().payload()
        d["window"] = self.window
        d["suggested_precision"] = self.suggested
        return d


class DivisionByZero(WildramError, ZeroDivisionError):
    kind = "division_by_zero"


class ParseError(WildramError, ValueError):
    kind = "parse_error"


class DomainError(WildramError):
    """Mathematically meaningful failure (exit code 1 in the CLI)."""

    kind = "domain_error"


class InvalidTower(DomainError):
    kind = "invalid_tower"

    def __init__(self, message: str, validation=None):
        super().__init__(message)
        self.validation = validation

    def payload(self) -> dict:
        d = super().payload()
        if self.validation is not None:
            d["validation"] = self.validation.to_json()
        return d


class NotTotallyRamified(DomainError):
    kind = "not_totally_ramified"


class ResidueSplit(DomainError):
    """The uniformizer construction hit a_j = a_j^p (a residue extension)."""

    kind = "residue_split"

    def __init__(self, message: str, j: int, a_j):
        super().__init__(message)
        self.j = j
        self.a_j = a_j

    def payload(self) -> dict:
        d = super().payload()
        d["j"] = self.j
        d["a_j"] = self.a_j
        return d


class PreconditionFailed(DomainError):
    kind = "precondition_failed"


class NotMonogenicCertified(DomainError):
    kind = "not_monogenic_certified"


class NonIntegralGenus(DomainError):
    kind = "non_integral_genus"


class NegativeGenus(DomainError):
    kind = "negative_genus"
