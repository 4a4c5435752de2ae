from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from askeywilson.cyclotomic import (
    CyclotomicNumber,
    cyclotomic_polynomial,
    from_json,
    make_field,
    to_json,
)
from askeywilson.errors import ContextMismatch, DisallowedOrder, DivisionByZero

F = Fraction


def coeffs(*ints):
    return tuple(F(i) for i in ints)


# -- cyclotomic polynomials (frozen oracle values) --------------------------

def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == coeffs(-1, 1)
    assert cyclotomic_polynomial(2) == coeffs(1, 1)
    assert cyclotomic_polynomial(3) == coeffs(1, 1, 1)
    assert cyclotomic_polynomial(5) == coeffs(1, 1, 1, 1, 1)
    assert cyclotomic_polynomial(6) == coeffs(1, -1, 1)
    assert cyclotomic_polynomial(8) == coeffs(1, 0, 0, 0, 1)
    assert cyclotomic_polynomial(12) == coeffs(1, 0, -1, 0, 1)


def test_disallowed_orders():
    for d in (1, 2, 4, 0, -3):
        with pytest.raises(DisallowedOrder):
            make_field(d)


@pytest.mark.parametrize("d,dbar,phi", [(3, 3, 2), (5, 5, 4), (6, 3, 2),
                                        (7, 7, 6), (8, 4, 4), (12, 6, 4)])
def test_context_constants(d, dbar, phi):
    ctx = make_field(d)
    assert ctx.dbar == dbar and ctx.phi == phi
    # q^2 has multiplicative order dbar
    q2 = ctx.q ** 2
    assert q2 ** dbar == 1
    for k in range(1, dbar):
        assert q2 ** k != 1


def test_d3_arithmetic_by_hand():
    ctx = make_field(3)
    q = ctx.q
    # q^2 = -1 - q since q^2 + q + 1 = 0
    assert (q * q).coeffs == coeffs(-1, -1)
    assert q ** 3 == 1
    assert q.inv() == q ** 2
    assert q.inv() * q == 1
    assert ctx.q_power(-2) == q


def test_division_and_errors():
    ctx = make_field(5)
    x = ctx.q + 1
    assert x / x == 1
    assert (x * 3) / 3 == x
    with pytest.raises(DivisionByZero):
        ctx.zero.inv()
    with pytest.raises(DivisionByZero):
        x / 0
    with pytest.raises(ContextMismatch):
        make_field(3).q + make_field(5).q
    with pytest.raises(ContextMismatch):
        make_field(3).q == make_field(5).q


def test_rational_detection():
    ctx = make_field(6)
    assert ctx.scalar(F(7, 3)).as_rational() == F(7, 3)
    assert ctx.q.as_rational() is None
    # q - q = 0 is rational
    assert (ctx.q - ctx.q).as_rational() == 0


def test_from_coeffs_reduces_long_inputs():
    ctx = make_field(3)
    # x^2 + x + 1 reduces to 0
    assert ctx.from_coeffs([1, 1, 1]).is_zero()
    assert ctx.from_coeffs([0, 0, 0, 1]) == 1  # q^3


def test_json_round_trip():
    ctx = make_field(8)
    x = ctx.q ** 3 - ctx.scalar(F(1, 2)) * ctx.q + 5
    obj = to_json(x)
    assert obj["d"] == 8 and len(obj["coeffs"]) == 4
    assert from_json(obj) == x
    with pytest.raises(ValueError):
        from_json({"d": 8, "coeffs": ["1"]})


# -- field axioms on random elements ----------------------------------------

def elements(d):
    ctx = make_field(d)
    rat = st.fractions(min_value=-9, max_value=9, max_denominator=4)
    return st.lists(rat, min_size=ctx.phi, max_size=ctx.phi).map(
        lambda cs: CyclotomicNumber(ctx, tuple(F(c) for c in cs)))


@settings(max_examples=60, deadline=None)
@given(elements(5), elements(5), elements(5))
def test_ring_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert x * (y * z) == (x * y) * z
    assert x * y == y * x
    assert x - x == 0


@settings(max_examples=60, deadline=None)
@given(elements(8))
def test_inverse_axiom(x):
    if not x.is_zero():
        assert x * x.inv() == 1
        assert (x ** -3) * (x ** 3) == 1


def test_power_identity_orders():
    for d in (3, 5, 6, 7, 8, 9, 12):
        ctx = make_field(d)
        assert ctx.q ** d == 1
        assert ctx.q_power(d + 2) == ctx.q ** 2
