"""Module construction: the polynomial-system solver, the irreducibility
criterion, labelled realizations, and the catalog sweep."""

import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from askeywilson.cyclotomic import make_field
from askeywilson.errors import (
    AmbiguousLabel, DegenerateLadder, NoSolution, SolverDegreeExceeded,
    ZeroParameter,
)
from askeywilson.modulegen import (
    Catalog, ModuleSpec, MultiPoly, central_scalars, criterion,
    gauge_matches_free_superdiagonal, ladder_values, one_dim, realize,
    solve_cyclic_tridiagonal, solve_tridiagonal, sweep,
)
from askeywilson.modulegen import _field_sqrt, solve_poly_system
from askeywilson.qracah import generate
from askeywilson.repkit import (
    burnside_irreducible, charpoly, check_module, scalar_action,
    verify_dimension_theorems, decompose,
)


# -- multivariate polynomial scaffolding -------------------------------------------


def test_multipoly_basics():
    ctx = make_field(5)
    x = MultiPoly.var(ctx, 2, 0)
    y = MultiPoly.var(ctx, 2, 1)
    p = x * x + y.scale(ctx.q) + MultiPoly.const(ctx, 2, 3)
    assert p.total_degree() == 2
    assert p.variables() == {0, 1}
    assert not p.is_zero() and not p.is_constant()
    assert (p - p).is_zero()
    # substitute x -> 2 then evaluate y -> 1
    p2 = p.substitute(0, MultiPoly.const(ctx, 2, 2))
    assert p2.variables() == {1}
    val = p2.evaluate({1: ctx.one})
    assert val == ctx.scalar(7) + ctx.q


def test_multipoly_lone_linear_detection():
    ctx = make_field(3)
    x0 = MultiPoly.var(ctx, 3, 0)
    x1 = MultiPoly.var(ctx, 3, 1)
    x2 = MultiPoly.var(ctx, 3, 2)
    # x2 appears only as a bare linear monomial even though the equation is
    # quadratic through the other variables
    p = x0 * x1 + x2.scale(ctx.scalar(2)) + MultiPoly.const(ctx, 3, 1)
    assert [k for k, _ in p.lone_linear_vars()] == [2]
    # but not when it also appears inside a product
    p_bad = p + x2 * x0
    assert all(k != 2 for k, _ in p_bad.lone_linear_vars())


def test_multipoly_normalized_dedupes_scalar_multiples():
    ctx = make_field(5)
    x = MultiPoly.var(ctx, 1, 0)
    p = x * x + x.scale(ctx.scalar(3))
    q = p.scale(ctx.q + ctx.one)
    assert p.normalized().key() == q.normalized().key()


@settings(max_examples=40, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
def test_multipoly_distributes(a, b, c):
    ctx = make_field(5)
    x = MultiPoly.var(ctx, 2, 0)
    y = MultiPoly.var(ctx, 2, 1)
    p = x.scale(ctx.scalar(a)) + y
    q = y.scale(ctx.scalar(b)) + MultiPoly.const(ctx, 2, c)
    r = x * y + MultiPoly.const(ctx, 2, 1)
    assert ((p + q) * r - (p * r + q * r)).is_zero()
    assert ((p * q) * r - p * (q * r)).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3))
def test_multipoly_substitute_evaluate_commute(s, t):
    ctx = make_field(3)
    x = MultiPoly.var(ctx, 2, 0)
    y = MultiPoly.var(ctx, 2, 1)
    p = x * x * y + x.scale(ctx.q) + y + MultiPoly.const(ctx, 2, 2)
    sub = p.substitute(0, MultiPoly.const(ctx, 2, s))
    direct = p.evaluate({0: ctx.scalar(s), 1: ctx.scalar(t)})
    assert sub.evaluate({1: ctx.scalar(t)}) == direct


# -- exact square roots -------------------------------------------------------------


def test_field_sqrt_rational_times_power():
    ctx = make_field(5)
    val = ctx.scalar(F(9, 4)) * ctx.q_power(2)
    s = _field_sqrt(ctx, val)
    assert s is not None and s * s == val


def test_field_sqrt_general_element():
    ctx = make_field(5)
    y = ctx.q + ctx.scalar(3)          # not of the r * q^k shape
    s = _field_sqrt(ctx, y * y)
    assert s is not None and s * s == y * y


def test_field_sqrt_quadratic_subfield():
    # (q - q^-1)^2 = -3 at order 3, so -3 is a square there
    ctx = make_field(3)
    s = _field_sqrt(ctx, ctx.scalar(-3))
    assert s is not None and s * s == ctx.scalar(-3)


def test_field_sqrt_nonsquare_is_none():
    # 7 is not a square in the fifth cyclotomic field (its only quadratic
    # subfield adjoins sqrt(5))
    ctx = make_field(5)
    assert _field_sqrt(ctx, ctx.scalar(7)) is None


def test_field_sqrt_zero():
    ctx = make_field(8)
    assert _field_sqrt(ctx, ctx.zero) == ctx.zero


# -- the polynomial system solver ---------------------------------------------------


def test_solver_unique_linear_solution():
    ctx = make_field(5)
    x = MultiPoly.var(ctx, 2, 0)
    y = MultiPoly.var(ctx, 2, 1)
    # x + y = 3, x - y = 1  ->  x = 2, y = 1
    eqs = [x + y - MultiPoly.const(ctx, 2, 3), x - y - MultiPoly.const(ctx, 2, 1)]
    sols = solve_poly_system(ctx, eqs, 2)
    assert len(sols) == 1
    assert sols[0] == {0: ctx.scalar(2), 1: ctx.one}


def test_solver_monomial_branching_finds_both_branches():
    ctx = make_field(5)
    x = MultiPoly.var(ctx, 2, 0)
    y = MultiPoly.var(ctx, 2, 1)
    # x * (y - 2) = 0 with y + x = 2: either x = 0, y = 2 or y = 2 - x ... the
    # second equation then forces x = 0 unless y = 2; solutions are (0, 2)
    eqs = [x * (y - MultiPoly.const(ctx, 2, 2)), x + y - MultiPoly.const(ctx, 2, 2)]
    sols = solve_poly_system(ctx, eqs, 2)
    assert {tuple(s[k] for k in (0, 1)) for s in sols} == {
        (ctx.zero, ctx.scalar(2))}
    # and a genuinely two-branch system: x^2 = x
    eqs = [x * x - x, y - MultiPoly.const(ctx, 2, 1)]
    sols = solve_poly_system(ctx, eqs, 2)
    assert {s[0] for s in sols} == {ctx.zero, ctx.one}


def test_solver_quadratic_split_with_constant_discriminant():
    ctx = make_field(5)
    x = MultiPoly.var(ctx, 1, 0)
    # x^2 - 5x + 6 = 0 -> {2, 3}
    eqs = [x * x - x.scale(ctx.scalar(5)) + MultiPoly.const(ctx, 1, 6)]
    sols = solve_poly_system(ctx, eqs, 1)
    assert {s[0] for s in sols} == {ctx.scalar(2), ctx.scalar(3)}


def test_solver_inconsistent_system_is_empty():
    ctx = make_field(5)
    x = MultiPoly.var(ctx, 1, 0)
    one = MultiPoly.const(ctx, 1, 1)
    assert solve_poly_system(ctx, [x - one, x + one], 1) == []


def test_solver_honest_failure_on_unsupported_shape():
    ctx = make_field(5)
    x = MultiPoly.var(ctx, 1, 0)
    # an irreducible cubic with no monomial factor and no quadratic to split
    eq = x * x * x + x + MultiPoly.const(ctx, 1, 1)
    with pytest.raises(SolverDegreeExceeded):
        solve_poly_system(ctx, [eq], 1)


def test_solver_free_variables_get_pinned():
    ctx = make_field(5)
    x = MultiPoly.var(ctx, 2, 0)
    # single equation x = 1 leaves y free; it is pinned to the free value
    sols = solve_poly_system(ctx, [x - MultiPoly.const(ctx, 2, 1)], 2,
                             free_value=7)
    assert sols == [{0: ctx.one, 1: ctx.scalar(7)}]


# -- one-dimensional modules and the scalar convention ------------------------------


def test_one_dim_scalar_actions_match_defining_formulas():
    ctx = make_field(5)
    A0, B0, g0 = ctx.scalar(2), ctx.q + ctx.q_power(-1), ctx.scalar(3)
    rep = one_dim(ctx, A0, B0, g0)
    assert check_module(rep).ok
    lam = ctx.q + ctx.q_power(-1)
    C0 = g0 / lam - A0 * B0 / lam
    assert scalar_action(rep, "alpha") == lam * A0 + B0 * C0
    assert scalar_action(rep, "beta") == lam * B0 + C0 * A0
    assert scalar_action(rep, "gamma") == g0


def test_central_scalars_agree_with_one_dim_realization():
    # the convention pairing generators with scalars is forced by n = 0
    ctx = make_field(8)
    spec = ModuleSpec(0, ctx.q, ctx.q_power(3), ctx.scalar(2))
    alpha0, beta0, gamma0 = central_scalars(ctx, spec)
    u = spec.a + spec.a.inv()
    v = spec.b + spec.b.inv()
    rep = one_dim(ctx, u, v, gamma0)
    assert scalar_action(rep, "alpha") == alpha0
    assert scalar_action(rep, "beta") == beta0


def test_ladder_values_frozen_example():
    ctx = make_field(3)
    vals = ladder_values(ctx, ctx.scalar(2), 1)
    assert vals == (ctx.from_coeffs([-2, F(-3, 2)]), ctx.from_coeffs([F(-1, 2), F(3, 2)]))
    with pytest.raises(ZeroParameter):
        ladder_values(ctx, 0, 2)


# -- the irreducibility criterion ---------------------------------------------------


def test_criterion_dimension_range():
    ctx = make_field(5)
    q = ctx.q
    assert criterion(ctx, ModuleSpec(0, q, q, q))           # empty window
    assert not criterion(ctx, ModuleSpec(5, q, q, q))       # past the cap
    assert not criterion(ctx, ModuleSpec(-1, q, q, q))


def test_criterion_window_hit_and_miss():
    ctx = make_field(5)
    q = ctx.q
    # n = 1 forbids the four products from equalling q^0 = 1
    assert not criterion(ctx, ModuleSpec(1, q, q, ctx.q_power(3)))   # abc = 1
    assert criterion(ctx, ModuleSpec(1, q, q, q))                    # all miss
    # same point at n = 2: the window becomes {q, q^-1}
    assert not criterion(ctx, ModuleSpec(2, q, q, ctx.q_power(4)))   # abc = q
    assert criterion(ctx, ModuleSpec(2, q, q, ctx.q_power(3)))


def test_criterion_invariant_under_parameter_inversion():
    ctx = make_field(8)
    vals = [ctx.q_power(k) for k in (1, 2, 3, 5)] + [ctx.scalar(2)]
    for n in (1, 2, 3):
        for a in vals[:3]:
            for b in vals:
                for c in vals:
                    spec = ModuleSpec(n, a, b, c)
                    flipped = [ModuleSpec(n, a.inv(), b, c),
                               ModuleSpec(n, a, b.inv(), c),
                               ModuleSpec(n, a, b, c.inv())]
                    assert all(criterion(ctx, f) == criterion(ctx, spec)
                               for f in flipped)


def test_criterion_rejects_zero_parameter():
    ctx = make_field(5)
    with pytest.raises(ZeroParameter):
        ModuleSpec(1, ctx.zero, ctx.q, ctx.q)


# -- gauged tridiagonal solving -----------------------------------------------------


def test_solve_tridiagonal_frozen_two_dim_instance():
    ctx = make_field(3)
    s = generate(ctx, ctx.scalar(2))
    assert s.type_tag == "D"
    reps = solve_tridiagonal(ctx, 1, s, ctx.one)
    assert len(reps) == 1
    rep = reps[0]
    assert rep.A.rows == ((ctx.from_coeffs([0, -1]), ctx.one),
                          (ctx.from_coeffs([3, 2]), ctx.one))
    assert check_module(rep).ok
    assert rep.B.rows[0][0] == s.theta(0) and rep.B.rows[1][1] == s.theta(1)


def test_solve_tridiagonal_rejects_impossible_spectrum():
    # two equal adjacent eigenvalues admit no module with unit superdiagonal:
    # the [alpha, B] block forces an off-diagonal contradiction
    ctx = make_field(5)
    with pytest.raises(NoSolution):
        solve_tridiagonal(ctx, 1, [ctx.one, ctx.one], ctx.one)


def test_alpha_pinning_restricts_the_family():
    ctx = make_field(5)
    s = generate(ctx, ctx.scalar(2))
    base = solve_tridiagonal(ctx, 2, s, ctx.one)
    assert base
    target = None
    for rep in base:
        try:
            target = scalar_action(rep, "alpha")
            break
        except Exception:
            continue
    assert target is not None
    pinned = solve_tridiagonal(ctx, 2, s, ctx.one, alpha0=target)
    assert pinned
    for rep in pinned:
        assert scalar_action(rep, "alpha") == target


def test_double_pinning_reaches_members_single_pinning_misses():
    # with only alpha pinned a free parameter survives and the returned
    # representative misses the labelled member; pinning beta as well makes
    # the system zero-dimensional and recovers it
    ctx = make_field(5)
    spec = ModuleSpec(1, ctx.q, ctx.q_power(2), ctx.scalar(2))
    alpha0, beta0, gamma0 = central_scalars(ctx, spec)
    seq = generate(ctx, spec.b * ctx.q_power(1))
    single = solve_tridiagonal(ctx, 1, seq, gamma0, alpha0=alpha0)
    assert all(scalar_action(r, "beta") != beta0 for r in single)
    double = solve_tridiagonal(ctx, 1, seq, gamma0, alpha0=alpha0, beta0=beta0)
    assert any(scalar_action(r, "beta") == beta0 for r in double)


def test_gauge_covers_free_superdiagonal_solutions():
    ctx3 = make_field(3)
    ctx5 = make_field(5)
    assert gauge_matches_free_superdiagonal(ctx3, 1, generate(ctx3, ctx3.scalar(2)), ctx3.one)
    assert gauge_matches_free_superdiagonal(ctx3, 2, generate(ctx3, ctx3.scalar(2)), ctx3.one)
    assert gauge_matches_free_superdiagonal(ctx5, 1, generate(ctx5, ctx5.scalar(2)), ctx5.scalar(2))


# -- labelled realizations ----------------------------------------------------------


def test_realize_irreducible_member():
    ctx = make_field(5)
    spec = ModuleSpec(1, ctx.q, ctx.q_power(2), ctx.scalar(2))
    alpha0, beta0, gamma0 = central_scalars(ctx, spec)
    reps = realize(ctx, spec)
    assert len(reps) == 1
    rep = reps[0]
    assert check_module(rep).ok
    assert criterion(ctx, spec) is True
    assert burnside_irreducible(rep)[0] is True
    assert scalar_action(rep, "alpha") == alpha0
    assert scalar_action(rep, "beta") == beta0
    assert rep.gamma_scalar == gamma0
    # A carries the labelled spectrum
    roots = ladder_values(ctx, spec.a, 1)
    cp = charpoly(rep.A)
    assert cp == (ctx.one, -(roots[0] + roots[1]), roots[0] * roots[1])


def test_realize_reducible_member():
    ctx = make_field(5)
    spec = ModuleSpec(1, ctx.q, ctx.q, ctx.q_power(3))   # abc = 1 hits the window
    assert criterion(ctx, spec) is False
    reps = realize(ctx, spec)
    assert len(reps) == 1
    assert burnside_irreducible(reps[0])[0] is False


def test_realize_rejects_degenerate_ladders():
    ctx = make_field(3)
    with pytest.raises(DegenerateLadder):
        realize(ctx, ModuleSpec(2, ctx.scalar(-1), ctx.one, ctx.q))
    with pytest.raises(DegenerateLadder):
        realize(ctx, ModuleSpec(3, ctx.q, ctx.q, ctx.q))  # out of range


def test_realize_rejects_ambiguous_labels():
    # at order 8 with n = 1 the traces of +-q^2 vanish and so does
    # q^(n+1) + q^(-n-1), so the c parameter is invisible to every matched
    # invariant: labels with opposite verdicts collide
    ctx = make_field(8)
    q2 = ctx.q_power(2)
    spec_false = ModuleSpec(1, q2, q2, ctx.scalar(-1))
    spec_true = ModuleSpec(1, q2, q2, ctx.q)
    assert criterion(ctx, spec_false) is False
    assert criterion(ctx, spec_true) is True
    for spec in (spec_false, spec_true):
        with pytest.raises(AmbiguousLabel):
            realize(ctx, spec)


def test_criterion_agrees_with_burnside_on_realized_grid():
    ctx = make_field(3)
    cands = [ctx.q, ctx.q_power(2), ctx.scalar(2), ctx.scalar(1), ctx.scalar(-1)]
    compared = 0
    seen_false = 0
    for n in range(ctx.dbar):
        for a in cands:
            for b in cands:
                for c in cands:
                    spec = ModuleSpec(n, a, b, c)
                    try:
                        reps = realize(ctx, spec)
                    except (DegenerateLadder, AmbiguousLabel, NoSolution,
                            SolverDegreeExceeded):
                        continue
                    verdict = criterion(ctx, spec)
                    for rep in reps:
                        assert burnside_irreducible(rep)[0] == verdict
                        compared += 1
                        seen_false += not verdict
    assert compared > 50
    assert seen_false > 0          # the comparison is not vacuously one-sided


# -- cyclic ansatz and the injectivity dichotomy ------------------------------------


def test_cyclic_solution_realizes_all_injective_branch():
    ctx = make_field(3)
    s = generate(ctx, ctx.scalar(2))
    reps = solve_cyclic_tridiagonal(ctx, s, ctx.one)
    assert len(reps) == 1
    rep = reps[0]
    assert rep.A.rows == ((ctx.from_coeffs([1, 1]), ctx.one, ctx.one),
                          (ctx.from_coeffs([-1, -2]), ctx.from_coeffs([-2, -1]), ctx.one),
                          (ctx.one, ctx.one, ctx.one))
    assert burnside_irreducible(rep)[0]
    report = verify_dimension_theorems(rep, decompose(rep))
    assert report.ok and report.branch == "all_injective"


def test_open_tridiagonal_always_lands_in_noninjective_branch():
    # the corner argument: an open segment kills the edge vector of the
    # first lowering operator, so the dichotomy must resolve the other way
    ctx = make_field(3)
    s = generate(ctx, ctx.scalar(2))
    for rep in solve_tridiagonal(ctx, 2, s, ctx.one):
        if not burnside_irreducible(rep)[0]:
            continue
        report = verify_dimension_theorems(rep, decompose(rep))
        assert report.ok and report.branch == "some_noninjective"


# -- sweeps and catalogs ------------------------------------------------------------


def test_sweep_catalog_invariants(tmp_path):
    cat = sweep(3, gamma_samples=[1])
    assert len(cat.entries) == 99
    assert {e.status for e in cat.entries} == {"ok"}
    assert cat.found_full_dimension()
    assert sorted(cat.irreducible_dimensions()) == [1, 2, 3]
    for e in cat.entries:
        assert e.module_ok
        if e.irreducible:
            assert e.dim <= 3
            assert e.section5_ok and e.section6_ok
            assert e.branch == "some_noninjective"
    out = tmp_path / "catalog.jsonl"
    cat.write_jsonl(out)
    lines = out.read_text().strip().split("\n")
    assert len(lines) == len(cat.entries)
    first = json.loads(lines[0])
    assert first["d"] == 3 and "status" in first and "irreducible" in first


def test_sweep_past_the_period_finds_no_irreducibles():
    # dimension 4 modules exist over order 3 but none is irreducible
    cat = sweep(3, gamma_samples=[0, 1], max_n=3)
    over = [e for e in cat.entries if e.status == "ok" and e.n == 3]
    assert over
    assert all(not e.irreducible for e in over)
