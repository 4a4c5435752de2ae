"""Exception types shared across the package.

Every domain error raised by this library is a subclass of AlgebraError, so
callers can catch one type at an API boundary.  Errors that shadow a builtin
meaning (DivisionByZero, ParseError) also subclass the matching builtin.
"""

from __future__ import annotations


class AlgebraError(Exception):
    """Base class for all errors raised by this package."""


class DisallowedOrder(AlgebraError, ValueError):
    """The root-of-unity order d is one of the excluded values {1, 2, 4}
    (or not a positive integer)."""


class ContextMismatch(AlgebraError, ValueError):
    """Two values from different field contexts were combined."""


class DivisionByZero(AlgebraError, ZeroDivisionError):
    """Division by the zero element of the cyclotomic field."""


class ZeroParameter(AlgebraError, ValueError):
    """A spectral parameter that must be invertible was zero."""


class DegreeOverflow(AlgebraError, RuntimeError):
    """A noncommutative expression exceeded the configured word-length cap."""


class TypeDInput(AlgebraError, ValueError):
    """A congruence normalization was requested for a sequence of the generic
    (all-eigenvalues-distinct) type, which has no canonical representative."""


class ShapeMismatch(AlgebraError, ValueError):
    """Matrix dimensions are incompatible with the requested operation."""


class NotScalar(AlgebraError, RuntimeError):
    """A matrix expected to act as a scalar is not a scalar multiple of the
    identity."""


class VanishingFails(AlgebraError, RuntimeError):
    """The characteristic product over a candidate eigenvalue sequence does
    not annihilate the module."""


class NoQRacahMatch(AlgebraError, RuntimeError):
    """No sampled spectral parameter reproduces the observed spectrum."""


class NotIrreducible(AlgebraError, RuntimeError):
    """An analysis that requires an irreducible module received a reducible
    one."""


class NoSolution(AlgebraError, RuntimeError):
    """A polynomial system admits no solution."""


class DegenerateLadder(AlgebraError, ValueError):
    """A spectral ladder repeats a value, so an eigenbasis construction
    cannot distinguish the intended module from others sharing its
    invariants."""


class AmbiguousLabel(AlgebraError, ValueError):
    """Distinct parameter labels with conflicting irreducibility verdicts
    share every matched invariant, so no realization can be attributed to
    one of them."""


class SolverDegreeExceeded(AlgebraError, RuntimeError):
    """Elimination pushed some polynomial past the configured degree bound."""


class ParseError(AlgebraError, ValueError):
    """A textual expression could not be parsed.

    Carries the offset of the offending character in ``position``.
    """

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message if position is None
                         else f"{message} (at position {position})")
        self.position = position
