"""Exception hierarchy shared by every part of the toolkit."""

from __future__ import annotations


class PontryaginError(Exception):
    """Base class for all errors raised by this package."""


class InvalidOrderError(PontryaginError, ValueError):
    pass


class AxiomViolation(PontryaginError, ValueError):
    """A group table (or similar structure) breaks one of its axioms.

    ``witness`` holds the offending element tuple when one exists.
    """

    def __init__(self, message: str, witness: tuple | None = None):
        super().__init__(message)
        self.witness = witness


class ShapeError(PontryaginError, ValueError):
    """Objects that must share a group, module or degree do not."""


class RangeError(PontryaginError, IndexError):
    pass


class PreconditionError(PontryaginError, ValueError):
    pass


class ConstructionError(PontryaginError, ValueError):
    """A requested standard object does not exist for the given parameters."""


class ScaleError(PontryaginError, RuntimeError):
    """A computation would exceed the configured desk-scale limits."""

    def __init__(self, message: str, estimate: int | None = None):
        super().__init__(message)
        self.estimate = estimate


class InternalError(PontryaginError, AssertionError):
    """A post-condition that must hold mathematically failed."""
