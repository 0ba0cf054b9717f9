"""Exception types shared across the package."""
from __future__ import annotations


class LopactError(Exception):
    """Base class for package-specific errors."""


class OracleIncompleteError(LopactError):
    """The order oracle cannot decide this membership query.

    Raised instead of guessing: an oracle may be incomplete, but it must
    never return a wrong answer.
    """


class NoCandidateError(LopactError, ValueError):
    """A diagonal entry has no monomial that could anchor a decomposition."""


class NotLopsidedError(LopactError, ValueError):
    """The requested side's dominance inequality does not hold."""


class BudgetExceededError(LopactError):
    """A certified accuracy target is unreachable within the configured budget."""

    def __init__(self, message: str, *, reason: str, depth: int,
                 achieved_bound, pruned_mass, support: int):
        super().__init__(message)
        self.reason = reason
        self.depth = depth
        self.achieved_bound = achieved_bound
        self.pruned_mass = pruned_mass
        self.support = support


class SearchBudgetError(LopactError):
    """A combinatorial search ran out of its node budget."""


class InsufficientSupportError(LopactError, ValueError):
    """A torus point is missing a coordinate the computation needs."""


class InsufficientPrecisionError(LopactError):
    """The certified inverse is too coarse for the requested decision."""


class WitnessNotLocalizedError(LopactError):
    """No fractional witness could be localized within the error budget."""


class WindowTooSmallError(LopactError, ValueError):
    """The sampling window does not cover the support the computation needs."""


class InvariantFailureError(LopactError):
    """A certified invariant failed; the CLI maps this to exit code 2."""


class ModelSyntaxError(LopactError, ValueError):
    """A model file failed to parse; carries line/column information."""

    def __init__(self, message: str, line: int, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column
