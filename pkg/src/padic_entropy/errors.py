"""Exception hierarchy shared by the library, the CLI and the service."""

from __future__ import annotations


class PadicEntropyError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1
    kind = "error"


class ParseError(PadicEntropyError):
    """Malformed input: bad rational string, non-prime modulus, bad polynomial, ..."""

    exit_code = 2
    kind = "parse"


class ValidationError(PadicEntropyError):
    """Structurally valid input that violates a mathematical constraint.

    Carries an optional list of violation strings naming the offending
    block/constraint (hom-constraint table, dimension mismatches,
    non-containment of lattices, singular matrices where invertibility
    is required).
    """

    exit_code = 3
    kind = "validation"

    def __init__(self, message: str, violations: list[str] | None = None):
        super().__init__(message)
        self.violations = list(violations or [])


class StabilizationError(PadicEntropyError):
    """A limit oracle did not stabilize within its step cap.

    The oracle refuses to extrapolate; callers may retry with a larger cap.
    ``diagnostics`` holds the increment trace observed so far.
    """

    exit_code = 4
    kind = "non_stabilization"

    def __init__(self, message: str, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics
