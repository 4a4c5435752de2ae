from __future__ import annotations

import pytest

from askeywilson.cyclotomic import make_field
from askeywilson.errors import TypeDInput, ZeroParameter
from askeywilson.qracah import (
    classify,
    generate,
    local_conditions,
    multiplicity_profile,
    normalize_congruence,
    recurrence_check,
    sample_parameters,
)

ADMISSIBLE_LE_16 = [3, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16]


def test_generate_values():
    ctx = make_field(3)
    s = generate(ctx, ctx.one)
    assert s.dbar == 3
    assert s.theta(0) == 2
    # for d=3: q^2 + q^-2 = q^2 + q = -1
    assert s.theta(1) == -1 and s.theta(2) == -1
    assert s.theta(5) == s.theta(2)  # cyclic
    with pytest.raises(ZeroParameter):
        generate(ctx, ctx.zero)


@pytest.mark.parametrize("d", ADMISSIBLE_LE_16)
def test_recurrences_full_grid(d):
    ctx = make_field(d)
    for a in sample_parameters(ctx):
        s = generate(ctx, a)
        assert all(ok1 and ok2 for _, ok1, ok2 in recurrence_check(s))


def test_classify_special_families():
    assert classify(generate(make_field(3), make_field(3).one)).type_tag == "O2"
    assert classify(generate(make_field(3), -make_field(3).one)).type_tag == "Om2"
    ctx8 = make_field(8)
    assert classify(generate(ctx8, ctx8.q)).type_tag == "Eq"
    ctx12 = make_field(12)
    assert classify(generate(ctx12, ctx12.one)).type_tag == "E2"


def test_classify_generic_and_unclassified():
    ctx = make_field(3)
    assert classify(generate(ctx, ctx.scalar(2))).type_tag == "D"
    # d=3: 1+q = -q^2 is a root of unity, so the (1+q) family is NOT generic here
    assert classify(generate(ctx, ctx.q + 1)).type_tag == "Unclassified"
    ctx5 = make_field(5)
    assert classify(generate(ctx5, ctx5.q + 1)).type_tag == "D"
    # d=5, a=q: a^2 is a power of q^2 but the sequence is not literally canonical
    assert classify(generate(ctx5, ctx5.q)).type_tag == "Unclassified"


def test_normalize_congruence_spec_example():
    # dbar even, theta_i = -(q^2i + q^-2i): shift dbar/2 onto E2
    ctx = make_field(8)
    s = generate(ctx, -ctx.one)
    shift, canon = normalize_congruence(s)
    assert canon.type_tag == "E2"
    assert shift == ctx.dbar // 2 == 2


def test_normalize_congruence_round_trip_everywhere():
    for d in (3, 5, 6, 7, 8, 9, 10, 12):
        ctx = make_field(d)
        for a in sample_parameters(ctx):
            s = generate(ctx, a)
            if classify(s).type_tag == "D":
                with pytest.raises(TypeDInput):
                    normalize_congruence(s)
                continue
            shift, canon = normalize_congruence(s)
            assert canon.type_tag in {"O2", "Om2"} if ctx.dbar % 2 else {"E2", "Eq"}
            # theta_i = theta'_(i+shift) exactly
            assert canon.shifted(shift).thetas == s.thetas
            # exactly one canonical type matches
            others = [t for t in (("O2", "Om2") if ctx.dbar % 2 else ("E2", "Eq"))
                      if t != canon.type_tag]
            from askeywilson.qracah import _canonical_thetas
            for t in others:
                alt = _canonical_thetas(ctx, t)
                assert not any(
                    all(s.thetas[i] == alt[(i + j) % ctx.dbar] for i in range(ctx.dbar))
                    for j in range(ctx.dbar))


def test_odd_dbar_sign_branches():
    # d odd: q^dbar = 1; d even with dbar odd: q^dbar = -1.  Both occur.
    ctx5 = make_field(5)  # q^5 = 1
    _, canon = normalize_congruence(generate(ctx5, ctx5.q))
    assert canon.type_tag == "O2"
    ctx6 = make_field(6)  # dbar = 3, q^3 = -1
    _, canon = normalize_congruence(generate(ctx6, ctx6.q))
    assert canon.type_tag == "Om2"


def test_multiplicity_profiles():
    # generic: all singletons
    ctx = make_field(7)
    prof = multiplicity_profile(generate(ctx, ctx.scalar(2)))
    assert len(prof) == 7 and all(len(ix) == 1 for ix in prof.values())
    # O2 at dbar=5: i matches -i
    ctx5 = make_field(5)
    prof = multiplicity_profile(generate(ctx5, ctx5.one))
    expected = {frozenset({0}), frozenset({1, 4}), frozenset({2, 3})}
    assert {frozenset(ix) for ix in prof.values()} == expected
    # Eq at dbar=4: i matches 1-i
    ctx8 = make_field(8)
    prof = multiplicity_profile(generate(ctx8, ctx8.q))
    expected = {frozenset({0, 1}), frozenset({2, 3})}
    assert {frozenset(ix) for ix in prof.values()} == expected
    # E2 at dbar=6: i matches -i
    ctx12 = make_field(12)
    prof = multiplicity_profile(generate(ctx12, ctx12.one))
    expected = {frozenset({0}), frozenset({1, 5}), frozenset({2, 4}), frozenset({3})}
    assert {frozenset(ix) for ix in prof.values()} == expected


@pytest.mark.parametrize("d", [3, 5, 6, 8, 12])
def test_four_way_equivalence(d):
    ctx = make_field(d)
    for a in sample_parameters(ctx):
        s = generate(ctx, a)
        for i in range(s.dbar):
            conds = local_conditions(s, i)
            assert all(conds) or not any(conds), (d, a, i, conds)
