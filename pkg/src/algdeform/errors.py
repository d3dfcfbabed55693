"""Exception types shared across the package."""

from __future__ import annotations

__all__ = ["DocumentError", "AlgebraError", "PreconditionError", "SizeGuardError"]


class DocumentError(ValueError):
    """A JSON input document is malformed or references out-of-range data."""


class AlgebraError(ValueError):
    """A structural requirement failed (non-associative table, bad unit, ...)."""


class PreconditionError(ValueError):
    """An operation's stated precondition does not hold for its inputs."""


class SizeGuardError(PreconditionError):
    """A computation was refused because it exceeds the fixed size budget."""
