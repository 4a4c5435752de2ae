"""Exact arithmetic in the cyclotomic field Q(q), q a primitive d-th root of unity.

The field is realized as Q[x]/(Phi_d(x)) with Phi_d the d-th cyclotomic
polynomial, so every element has a unique dense coordinate vector of length
phi(d) over the rationals, and q is the residue class of x.  All arithmetic
is exact (stdlib fractions); equality against zero is therefore decidable,
which the rest of the package relies on.

Orders d in {1, 2, 4} are rejected: there q^2 - q^-2 = 0 and the defining
relations of the algebra downstream cannot be normalized.  For admissible d
the quantity dbar = d (d odd) or d/2 (d even) is the multiplicative order of
q^2; it is stored on the context because the spectral theory is dbar-periodic.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .errors import ContextMismatch, DisallowedOrder, DivisionByZero

__all__ = [
    "FieldContext",
    "CyclotomicNumber",
    "make_field",
    "cyclotomic_polynomial",
    "to_json",
    "from_json",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


# ---------------------------------------------------------------------------
# dense polynomial helpers over Fraction (internal)

def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(p: list[Fraction], r: list[Fraction]) -> list[Fraction]:
    if not p or not r:
        return []
    out = [_ZERO] * (len(p) + len(r) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(r):
                if b:
                    out[i + j] += a * b
    return _poly_trim(out)


def _poly_divmod(p: list[Fraction], r: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    p = list(p)
    q: list[Fraction] = [_ZERO] * max(0, len(p) - len(r) + 1)
    inv_lead = 1 / r[-1]
    while len(p) >= len(r):
        c = p[-1] * inv_lead
        k = len(p) - len(r)
        q[k] = c
        for i, b in enumerate(r):
            p[k + i] -= c * b
        _poly_trim(p)
        if not p:
            break
    return _poly_trim(q), p


def _poly_xgcd(p: list[Fraction], r: list[Fraction]) -> tuple[list[Fraction], list[Fraction], list[Fraction]]:
    """Extended Euclid: returns (g, u, v) with u*p + v*r = g."""
    r0, r1 = list(p), list(r)
    s0, s1 = [_ONE], []
    t0, t1 = [], [_ONE]
    while r1:
        q, rem = _poly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _poly_trim([a - b for a, b in _zip_pad(s0, _poly_mul(q, s1))])
        t0, t1 = t1, _poly_trim([a - b for a, b in _zip_pad(t0, _poly_mul(q, t1))])
    return r0, s0, t0


def _zip_pad(p: list[Fraction], r: list[Fraction]) -> Iterable[tuple[Fraction, Fraction]]:
    n = max(len(p), len(r))
    return zip(p + [_ZERO] * (n - len(p)), r + [_ZERO] * (n - len(r)))


def _divisors(d: int) -> list[int]:
    return [e for e in range(1, d + 1) if d % e == 0]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(d: int) -> tuple[Fraction, ...]:
    """Coefficients (ascending) of Phi_d, computed by dividing x^d - 1 by the
    cyclotomic polynomials of all proper divisors of d."""
    if d < 1:
        raise DisallowedOrder(f"order must be a positive integer, got {d}")
    num: list[Fraction] = [-_ONE] + [_ZERO] * (d - 1) + [_ONE]  # x^d - 1
    for e in _divisors(d)[:-1]:
        num, rem = _poly_divmod(num, list(cyclotomic_polynomial(e)))
        assert not rem, f"x^{d}-1 not divisible by Phi_{e}"
    return tuple(num)


# ---------------------------------------------------------------------------


class FieldContext:
    """Carrier for Q(q) at a fixed admissible order d.

    Holds the modulus Phi_d, a reduction table for powers x^k with
    phi <= k <= 2*phi-2 (so products reduce by table lookup instead of long
    division), and small cached constants used everywhere downstream.
    Instances are immutable in practice; obtain them via make_field, which
    caches one context per order.
    """

    def __init__(self, d: int):
        if not isinstance(d, int) or d < 1 or d in (1, 2, 4):
            raise DisallowedOrder(
                f"order d={d!r} is not supported: need an integer d >= 3, d != 4")
        self.d = d
        self.dbar = d if d % 2 else d // 2
        modulus = cyclotomic_polynomial(d)
        self.modulus = modulus
        self.phi = len(modulus) - 1
        # x^k mod Phi_d for 0 <= k <= 2*phi - 2
        table: list[tuple[Fraction, ...]] = []
        for k in range(2 * self.phi - 1):
            if k < self.phi:
                row = [_ZERO] * self.phi
                row[k] = _ONE
            else:
                # x^k = x * x^(k-1), then fold the overflow coefficient
                prev = list(table[k - 1])
                lead = prev[-1]
                row = [_ZERO] + prev[:-1]
                if lead:
                    for i in range(self.phi):
                        row[i] -= lead * modulus[i]
            table.append(tuple(row))
        self._xpow = tuple(table)
        self.zero = CyclotomicNumber(self, (_ZERO,) * self.phi)
        self.one = self.scalar(1)
        self.q = self.from_coeffs([0, 1]) if self.phi > 1 else self.scalar(1)
        self._qpow_cache: dict[int, CyclotomicNumber] = {}
        # sanity: dbar really is the multiplicative order of q^2
        qsq = self.q * self.q
        acc = self.one
        for k in range(1, self.dbar):
            acc = acc * qsq
            assert acc != self.one, f"q^2 has order {k} < dbar={self.dbar}"
        assert acc * qsq == self.one

    # -- constructors ------------------------------------------------------

    def scalar(self, value: int | Fraction) -> "CyclotomicNumber":
        c = [_ZERO] * self.phi
        c[0] = Fraction(value)
        return CyclotomicNumber(self, tuple(c))

    def from_coeffs(self, coeffs: Iterable[int | Fraction]) -> "CyclotomicNumber":
        """Element with the given coordinates in the basis 1, q, ..., q^(phi-1).
        Longer coefficient lists are reduced modulo Phi_d."""
        cs = [Fraction(c) for c in coeffs]
        if len(cs) <= self.phi:
            cs += [_ZERO] * (self.phi - len(cs))
            return CyclotomicNumber(self, tuple(cs))
        out = [_ZERO] * self.phi
        x = self.q_power(0)
        for k, c in enumerate(cs):
            if c:
                pk = self.q_power(k)
                out = [a + c * b for a, b in zip(out, pk.coeffs)]
        return CyclotomicNumber(self, tuple(out))

    def q_power(self, k: int) -> "CyclotomicNumber":
        """q^k, computed modulo q^d = 1 (so negative k is fine)."""
        k %= self.d
        hit = self._qpow_cache.get(k)
        if hit is not None:
            return hit
        acc = self.one
        for _ in range(k):
            acc = acc * self.q
        self._qpow_cache[k] = acc
        return acc

    def __repr__(self) -> str:  # pragma: no cover
        return f"FieldContext(d={self.d}, dbar={self.dbar}, phi={self.phi})"


@lru_cache(maxsize=None)
def make_field(d: int) -> FieldContext:
    """The field context for order d (one shared instance per order)."""
    return FieldContext(d)


def _coerce(ctx: FieldContext, other) -> "CyclotomicNumber | None":
    if isinstance(other, CyclotomicNumber):
        if other.ctx.d != ctx.d:
            raise ContextMismatch(
                f"cannot mix elements of Q(q) for d={ctx.d} and d={other.ctx.d}")
        return other
    if isinstance(other, (int, Fraction)):
        return ctx.scalar(other)
    return None


class CyclotomicNumber:
    """An element of Q(q), stored as its coordinate tuple of length phi(d)."""

    __slots__ = ("ctx", "coeffs", "_hash")

    def __init__(self, ctx: FieldContext, coeffs: tuple[Fraction, ...]):
        self.ctx = ctx
        self.coeffs = coeffs
        self._hash: int | None = None

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_rational(self) -> Fraction | None:
        """The value as a Fraction when it lies in Q, else None."""
        return self.coeffs[0] if self.is_rational() else None

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        o = _coerce(self.ctx, other)
        if o is None:
            return NotImplemented
        return CyclotomicNumber(self.ctx, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.ctx, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = _coerce(self.ctx, other)
        if o is None:
            return NotImplemented
        return CyclotomicNumber(self.ctx, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = _coerce(self.ctx, other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ctx.zero
            f = Fraction(other)
            return CyclotomicNumber(self.ctx, tuple(a * f for a in self.coeffs))
        o = _coerce(self.ctx, other)
        if o is None:
            return NotImplemented
        ctx = self.ctx
        phi = ctx.phi
        a, b = self.coeffs, o.coeffs
        conv = [_ZERO] * (2 * phi - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        out = list(conv[:phi])
        xpow = ctx._xpow
        for k in range(phi, 2 * phi - 1):
            ck = conv[k]
            if ck:
                row = xpow[k]
                for i in range(phi):
                    if row[i]:
                        out[i] += ck * row[i]
        return CyclotomicNumber(ctx, tuple(out))

    __rmul__ = __mul__

    def inv(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise DivisionByZero("inverse of 0 in Q(q)")
        rat = self.as_rational()
        if rat is not None:
            return self.ctx.scalar(1 / rat)
        g, u, _ = _poly_xgcd(_poly_trim(list(self.coeffs)), list(self.ctx.modulus))
        assert len(g) == 1, "element not invertible modulo an irreducible polynomial?"
        scale = 1 / g[0]
        u = [c * scale for c in u]
        return self.ctx.from_coeffs(u)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise DivisionByZero("division by zero rational")
            return self * (1 / Fraction(other))
        o = _coerce(self.ctx, other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = _coerce(self.ctx, other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n: int) -> "CyclotomicNumber":
        if n < 0:
            return self.inv() ** (-n)
        acc = self.ctx.one
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    # -- comparisons / hashing ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, CyclotomicNumber):
            if other.ctx.d != self.ctx.d:
                raise ContextMismatch(
                    f"cannot compare elements for d={self.ctx.d} and d={other.ctx.d}")
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx.d, self.coeffs))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        from .qexpr import print_qexpr  # cycle-free: qexpr imports nothing from here at import time
        return print_qexpr(self)


# ---------------------------------------------------------------------------
# JSON encoding: {"d": d, "coeffs": ["num/den", ...]}

def to_json(x: CyclotomicNumber) -> dict:
    return {"d": x.ctx.d, "coeffs": [str(c) for c in x.coeffs]}


def from_json(obj: dict) -> CyclotomicNumber:
    ctx = make_field(int(obj["d"]))
    coeffs = [Fraction(s) for s in obj["coeffs"]]
    if len(coeffs) != ctx.phi:
        raise ValueError(
            f"expected {ctx.phi} coefficients for d={ctx.d}, got {len(coeffs)}")
    return CyclotomicNumber(ctx, tuple(coeffs))
