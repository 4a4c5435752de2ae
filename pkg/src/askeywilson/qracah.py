"""Cyclic spectral sequences theta_i = a q^(-2i) + a^-1 q^(2i) and their
five-way classification.

A sequence is dbar-periodic, read cyclically, and satisfies the three-term
recurrences

    theta_(i-1) + theta_(i+1) = (q^2 + q^-2) theta_i
    theta_(i-1) * theta_(i+1) = theta_i^2 + (q^2 - q^-2)^2.

Types: D is the generic case a^2 not a power of q^2 (all values distinct);
the special families are, by exact literal match,

    O2  (dbar odd):  theta_i =   q^(2i) + q^(-2i)
    Om2 (dbar odd):  theta_i = -(q^(2i) + q^(-2i))
    E2  (dbar even): theta_i =   q^(2i) + q^(-2i)
    Eq  (dbar even): theta_i =   q^(2i-1) + q^(1-2i)

Any non-D sequence is a cyclic shift of exactly one canonical family;
normalize_congruence finds that shift by exhaustive exact search.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .chebyshev import theta_value
from .cyclotomic import CyclotomicNumber, FieldContext
from .errors import TypeDInput, ZeroParameter

__all__ = [
    "QRacahSequence",
    "generate",
    "recurrence_check",
    "classify",
    "normalize_congruence",
    "multiplicity_profile",
    "local_conditions",
    "sample_parameters",
]

TYPE_D = "D"
TYPE_O2 = "O2"
TYPE_OM2 = "Om2"
TYPE_E2 = "E2"
TYPE_EQ = "Eq"
UNCLASSIFIED = "Unclassified"


@dataclass(frozen=True)
class QRacahSequence:
    ctx: FieldContext
    a: CyclotomicNumber
    thetas: tuple[CyclotomicNumber, ...]  # length dbar, cyclic
    type_tag: str = UNCLASSIFIED

    def theta(self, i: int) -> CyclotomicNumber:
        return self.thetas[i % len(self.thetas)]

    @property
    def dbar(self) -> int:
        return len(self.thetas)

    def shifted(self, j: int) -> "QRacahSequence":
        """The sequence i -> theta_(i+j), with the parameter moved to match."""
        n = self.dbar
        vals = tuple(self.thetas[(i + j) % n] for i in range(n))
        return classify(QRacahSequence(self.ctx, self.a * self.ctx.q_power(-2 * j),
                                       vals, UNCLASSIFIED))


def generate(ctx: FieldContext, a: CyclotomicNumber) -> QRacahSequence:
    if a.is_zero():
        raise ZeroParameter("sequence parameter must be invertible")
    vals = tuple(theta_value(ctx, a, i) for i in range(ctx.dbar))
    return classify(QRacahSequence(ctx, a, vals))


def recurrence_check(s: QRacahSequence) -> list[tuple[int, bool, bool]]:
    """Per-index verdicts (index, sum recurrence ok, product recurrence ok)."""
    ctx = s.ctx
    mid = ctx.q ** 2 + ctx.q ** -2
    gap2 = (ctx.q ** 2 - ctx.q ** -2) ** 2
    out = []
    for i in range(s.dbar):
        lhs_sum = s.theta(i - 1) + s.theta(i + 1)
        lhs_prod = s.theta(i - 1) * s.theta(i + 1)
        out.append((i,
                    lhs_sum == mid * s.theta(i),
                    lhs_prod == s.theta(i) ** 2 + gap2))
    return out


def _canonical_thetas(ctx: FieldContext, tag: str) -> tuple[CyclotomicNumber, ...]:
    if tag in (TYPE_O2, TYPE_E2):
        return tuple(ctx.q_power(2 * i) + ctx.q_power(-2 * i) for i in range(ctx.dbar))
    if tag == TYPE_OM2:
        return tuple(-(ctx.q_power(2 * i) + ctx.q_power(-2 * i)) for i in range(ctx.dbar))
    if tag == TYPE_EQ:
        return tuple(ctx.q_power(2 * i - 1) + ctx.q_power(1 - 2 * i) for i in range(ctx.dbar))
    raise ValueError(tag)


def _canonical_parameter(ctx: FieldContext, tag: str) -> CyclotomicNumber:
    return {TYPE_O2: ctx.one, TYPE_E2: ctx.one,
            TYPE_OM2: -ctx.one, TYPE_EQ: ctx.q}[tag]


def _is_type_d(s: QRacahSequence) -> bool:
    asq = s.a * s.a
    return all(asq != s.ctx.q_power(2 * i) for i in range(s.dbar))


def classify(s: QRacahSequence) -> QRacahSequence:
    """Tag by exact literal match; non-canonical non-D stays Unclassified."""
    if _is_type_d(s):
        return replace(s, type_tag=TYPE_D)
    ctx = s.ctx
    candidates = (TYPE_O2, TYPE_OM2) if ctx.dbar % 2 else (TYPE_E2, TYPE_EQ)
    for tag in candidates:
        if s.thetas == _canonical_thetas(ctx, tag):
            return replace(s, type_tag=tag)
    return replace(s, type_tag=UNCLASSIFIED)


def normalize_congruence(s: QRacahSequence) -> tuple[int, QRacahSequence]:
    """The cyclic shift j and canonical sequence s' with theta_i = theta'_(i+j)."""
    if _is_type_d(s):
        raise TypeDInput("a generic-type sequence has no canonical congruent form")
    ctx = s.ctx
    candidates = (TYPE_O2, TYPE_OM2) if ctx.dbar % 2 else (TYPE_E2, TYPE_EQ)
    for tag in candidates:
        canon = _canonical_thetas(ctx, tag)
        for j in range(ctx.dbar):
            if all(s.thetas[i] == canon[(i + j) % ctx.dbar] for i in range(ctx.dbar)):
                canonical = QRacahSequence(ctx, _canonical_parameter(ctx, tag),
                                           canon, tag)
                return j, canonical
    raise AssertionError("non-D sequence with no canonical congruent form")


def multiplicity_profile(s: QRacahSequence) -> dict[CyclotomicNumber, tuple[int, ...]]:
    """Indices grouped by equal theta value."""
    groups: dict[CyclotomicNumber, list[int]] = {}
    for i, th in enumerate(s.thetas):
        groups.setdefault(th, []).append(i)
    return {v: tuple(ix) for v, ix in groups.items()}


def local_conditions(s: QRacahSequence, i: int) -> tuple[bool, bool, bool, bool]:
    """The four equivalent degeneracy conditions at index i: neighbors equal,
    doubled left neighbor, doubled right neighbor, theta_i in {2, -2}."""
    ctx = s.ctx
    mid = ctx.q ** 2 + ctx.q ** -2
    two = ctx.scalar(2)
    return (
        s.theta(i - 1) == s.theta(i + 1),
        mid * s.theta(i) == 2 * s.theta(i - 1),
        mid * s.theta(i) == 2 * s.theta(i + 1),
        s.theta(i) == two or s.theta(i) == -two,
    )


def sample_parameters(ctx: FieldContext) -> list[CyclotomicNumber]:
    """The deterministic parameter grid used throughout: all q-powers, all
    q-powers times (1+q), and the small rationals 2, 3, 1/2.  Covers every
    special family and generic instances, with no randomness."""
    out = [ctx.q_power(j) for j in range(ctx.d)]
    bump = ctx.q + 1
    out += [ctx.q_power(j) * bump for j in range(ctx.d)]
    out += [ctx.scalar(2), ctx.scalar(3), ctx.scalar(Fraction(1, 2))]
    return out
