"""Exception hierarchy for mseps.

Every error also derives from the closest builtin so callers can catch
``IndexError`` / ``ZeroDivisionError`` / ``ValueError`` as usual.
"""

from __future__ import annotations

from typing import Optional, Tuple


class MsepsError(Exception):
    """Root of all library errors."""


class IndexOutOfRange(MsepsError, IndexError):
    """A referenced term or determinant entry lies outside the sequence prefix."""


class Breakdown(MsepsError, ZeroDivisionError):
    """An (effectively) zero denominator made a value undefined."""

    def __init__(self, message: str, cell: Optional[Tuple[int, int]] = None) -> None:
        super().__init__(message)
        self.cell = cell


class SingularSystem(MsepsError, ArithmeticError):
    """The dense linear system of the kernel realization is singular."""


class InvalidSpec(MsepsError, ValueError):
    pass


class SeedCountMismatch(InvalidSpec):
    pass


class DegenerateRecurrence(MsepsError, ArithmeticError):
    pass


class ParseError(MsepsError, ValueError):
    """Malformed scalar or sequence file; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmptyFile(ParseError):
    pass


class DimensionTooSmall(MsepsError, ValueError):
    pass


class GaugeUnderdetermined(MsepsError, ArithmeticError):
    """The m=1 u-variables cannot be seeded from the lattice."""


class ConfigError(MsepsError, ValueError):
    pass
