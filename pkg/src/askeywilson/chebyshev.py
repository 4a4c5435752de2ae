"""Normalized Chebyshev polynomials and the root-of-unity factorization.

T_n here is monic of degree n with T_n(z + 1/z) = z^n + z^-n, so T_0 = 2,
T_1 = x, T_2 = x^2 - 2, and T_n(2x)/2 is the classical first-kind Chebyshev
polynomial.  Coefficients come from the closed binomial form

    T_n(x) = sum_i (-1)^i [C(n-i, i) + C(n-i-1, i-1)] x^(n-2i),

with the boundary conventions C(-1, -1) = 1 and C(m, -1) = 0 for m >= 0.

The key exact identity at a primitive d-th root of unity: for any invertible
spectral parameter a, with theta_i = a q^(-2i) + a^-1 q^(2i),

    T_dbar(x) = prod_{i mod dbar} (x - theta_i) + a^dbar + a^-dbar.

factorization_residual computes the difference of the two sides so callers
can assert it is identically zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cyclotomic import CyclotomicNumber, FieldContext
from .errors import ZeroParameter

__all__ = ["cheb_poly", "cheb_eval", "factorization_residual", "IndexedResidual"]


def _binom(m: int, k: int) -> int:
    if k == -1:
        return 1 if m == -1 else 0
    if m < 0 or k < 0 or k > m:
        return 0
    return math.comb(m, k)


def cheb_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of T_n, ascending by degree (length n+1)."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    out = [0] * (n + 1)
    for i in range(n // 2 + 1):
        out[n - 2 * i] = (-1) ** i * (_binom(n - i, i) + _binom(n - i - 1, i - 1))
    return tuple(out)


def cheb_eval(n: int, x: CyclotomicNumber) -> CyclotomicNumber:
    """T_n evaluated at a field element (Horner)."""
    coeffs = cheb_poly(n)
    acc = x.ctx.zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def theta_value(ctx: FieldContext, a: CyclotomicNumber, i: int) -> CyclotomicNumber:
    """The i-th spectral value a*q^(-2i) + a^-1*q^(2i)."""
    if a.is_zero():
        raise ZeroParameter("spectral parameter must be invertible")
    return a * ctx.q_power(-2 * i) + a.inv() * ctx.q_power(2 * i)


@dataclass(frozen=True)
class IndexedResidual:
    """Coefficientwise difference between T_dbar and its product form."""

    d: int
    a: CyclotomicNumber
    coeffs: tuple[CyclotomicNumber, ...]  # ascending, length dbar+1

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)


def factorization_residual(ctx: FieldContext, a: CyclotomicNumber) -> IndexedResidual:
    """prod_{i mod dbar}(x - theta_i) + a^dbar + a^-dbar - T_dbar(x), as a
    coefficient vector.  Zero iff the factorization identity holds for a."""
    if a.is_zero():
        raise ZeroParameter("spectral parameter must be invertible")
    dbar = ctx.dbar
    # expand the product one linear factor at a time
    prod: list[CyclotomicNumber] = [ctx.one]
    for i in range(dbar):
        th = theta_value(ctx, a, i)
        nxt = [ctx.zero] * (len(prod) + 1)
        for k, c in enumerate(prod):
            nxt[k + 1] = nxt[k + 1] + c
            nxt[k] = nxt[k] - c * th
        prod = nxt
    shift = a ** dbar + a ** (-dbar)
    prod[0] = prod[0] + shift
    tbar = cheb_poly(dbar)
    coeffs = tuple(prod[k] - tbar[k] for k in range(dbar + 1))
    return IndexedResidual(d=ctx.d, a=a, coeffs=coeffs)
