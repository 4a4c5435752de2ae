"""Construction of explicit modules: scalars, the irreducibility-criterion
predicate, and a tridiagonal ansatz solver.

Modules are not transcribed from anywhere: B is a diagonal segment of a
q-Racah sequence, A is tridiagonal with the superdiagonal gauged to ones, and
the commutation constraints that characterize a module structure (alpha and
beta central, gamma a scalar) are imposed as an exact polynomial system in
the unknown entries.  Every solution is validated intrinsically afterwards,
so correctness never depends on the solving path.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import CyclotomicNumber, FieldContext, make_field, to_json as cyc_to_json
from .errors import (AmbiguousLabel, DegenerateLadder, NoSolution, NotScalar,
                     SolverDegreeExceeded, ZeroParameter)
from .qracah import QRacahSequence, generate, sample_parameters
from .repkit import (
    ExactMatrix, Representation, assemble, burnside_irreducible, charpoly,
    check_module, decompose, scalar_action, section5_ops,
    verify_dimension_theorems, verify_operator_props,
)

__all__ = [
    "ModuleSpec", "one_dim", "criterion", "ladder_values", "central_scalars",
    "realize", "solve_tridiagonal",
    "solve_tridiagonal_nogauge", "solve_cyclic_tridiagonal",
    "gauge_matches_free_superdiagonal",
    "sweep", "Catalog", "CatalogEntry", "MultiPoly",
]


# -- sparse multivariate polynomials over Q(q) ------------------------------------


class MultiPoly:
    """Polynomial in finitely many variables with CyclotomicNumber
    coefficients; exponent tuples are the monomial keys."""

    __slots__ = ("ctx", "nvars", "terms")

    def __init__(self, ctx: FieldContext, nvars: int,
                 terms: dict[tuple[int, ...], CyclotomicNumber]):
        self.ctx = ctx
        self.nvars = nvars
        self.terms = {m: c for m, c in terms.items() if not c.is_zero()}

    @classmethod
    def const(cls, ctx: FieldContext, nvars: int, value) -> "MultiPoly":
        c = value if isinstance(value, CyclotomicNumber) else ctx.scalar(value)
        return cls(ctx, nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, ctx: FieldContext, nvars: int, k: int) -> "MultiPoly":
        mono = tuple(1 if i == k else 0 for i in range(nvars))
        return cls(ctx, nvars, {mono: ctx.one})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_value(self) -> CyclotomicNumber:
        return self.terms.get((0,) * self.nvars, self.ctx.zero)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def variables(self) -> set[int]:
        out = set()
        for m in self.terms:
            out.update(i for i, e in enumerate(m) if e)
        return out

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return MultiPoly(self.ctx, self.nvars, out)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] - c if m in out else -c
        return MultiPoly(self.ctx, self.nvars, out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.ctx, self.nvars, {m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "MultiPoly":
        c = c if isinstance(c, CyclotomicNumber) else self.ctx.scalar(c)
        return MultiPoly(self.ctx, self.nvars, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        out: dict[tuple[int, ...], CyclotomicNumber] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = c1 * c2
                out[m] = out[m] + v if m in out else v
        return MultiPoly(self.ctx, self.nvars, out)

    def substitute(self, k: int, value: "MultiPoly") -> "MultiPoly":
        """Replace variable k by a polynomial (which must not contain k)."""
        assert k not in value.variables()
        out = MultiPoly(self.ctx, self.nvars, {})
        for m, c in self.terms.items():
            e = m[k]
            rest = m[:k] + (0,) + m[k + 1:]
            term = MultiPoly(self.ctx, self.nvars, {rest: c})
            for _ in range(e):
                term = term * value
            out = out + term
        return out

    def evaluate(self, assignment: dict[int, CyclotomicNumber]) -> CyclotomicNumber:
        total = self.ctx.zero
        for m, c in self.terms.items():
            acc = c
            for i, e in enumerate(m):
                if e:
                    acc = acc * assignment[i] ** e
            total = total + acc
        return total

    def as_linear(self):
        """(coeffs: dict var -> CyclotomicNumber, const) if degree <= 1 and
        every coefficient is constant, else None."""
        coeffs: dict[int, CyclotomicNumber] = {}
        const = self.ctx.zero
        for m, c in self.terms.items():
            deg = sum(m)
            if deg == 0:
                const = c
            elif deg == 1:
                coeffs[m.index(1)] = c
            else:
                return None
        return coeffs, const

    def lone_linear_vars(self) -> list[tuple[int, CyclotomicNumber]]:
        """Variables occurring only as a bare degree-one monomial (constant
        coefficient, in no other term), i.e. directly solvable."""
        out = []
        for k in sorted(self.variables()):
            mono = tuple(1 if i == k else 0 for i in range(self.nvars))
            if mono in self.terms and all(m == mono or m[k] == 0 for m in self.terms):
                out.append((k, self.terms[mono]))
        return out

    def normalized(self) -> "MultiPoly":
        """Scaled so the largest monomial has coefficient one (for dedup)."""
        if not self.terms:
            return self
        lead = self.terms[max(self.terms)]
        return self if lead == 1 else self.scale(lead.inv())

    def monomial_gcd_var(self):
        """A variable occurring with positive exponent in every term, or None."""
        if not self.terms:
            return None
        common = None
        for m in self.terms:
            vs = {i for i, e in enumerate(m) if e}
            common = vs if common is None else common & vs
            if not common:
                return None
        return min(common)

    def factor_out(self, k: int) -> "MultiPoly":
        """Divide by the largest power of variable k dividing every term."""
        e0 = min(m[k] for m in self.terms)
        assert e0 > 0
        out = {m[:k] + (m[k] - e0,) + m[k + 1:]: c for m, c in self.terms.items()}
        return MultiPoly(self.ctx, self.nvars, out)

    def key(self):
        return frozenset(self.terms.items())

    def __repr__(self):  # pragma: no cover
        bits = []
        for m, c in sorted(self.terms.items()):
            vs = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}"
                          for i, e in enumerate(m) if e)
            bits.append(f"({c!r})" + ("*" + vs if vs else ""))
        return " + ".join(bits) or "0"


# -- square roots and quadratic splitting ---------------------------------------------


def _rational_sqrt(r: Fraction) -> Fraction | None:
    if r < 0:
        return None
    rn, rd = math.isqrt(r.numerator), math.isqrt(r.denominator)
    out = Fraction(rn, rd)
    return out if out * out == r else None


def _cyc_sqrt(ctx: FieldContext, c: CyclotomicNumber) -> CyclotomicNumber | None:
    """Best-effort square root in Q(q): covers rational squares scaled by a
    power of q (enough for the discriminants the module systems produce)."""
    if c.is_zero():
        return ctx.zero
    for k in range(ctx.d):
        r = (c * ctx.q_power(-k)).as_rational()
        if r is None or r <= 0:
            continue
        if ctx.d % 2 == 0 and k % 2:
            continue  # odd exponent has no half inside an even-order group
        s = _rational_sqrt(r)
        if s is None:
            continue
        m = k // 2 if k % 2 == 0 else (k * (ctx.d + 1) // 2) % ctx.d
        return ctx.scalar(s) * ctx.q_power(m)
    return None


def _solve_complex(M: list[list[complex]], w: list[complex]) -> list[complex]:
    """Gaussian elimination with partial pivoting; M is square and, for the
    embedding matrices used here, always invertible."""
    n = len(M)
    aug = [row[:] + [w[i]] for i, row in enumerate(M)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(aug[r][col]))
        aug[col], aug[piv] = aug[piv], aug[col]
        scale = aug[col][col]
        aug[col] = [v / scale for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v - f * p for v, p in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def _field_sqrt(ctx: FieldContext, c: CyclotomicNumber) -> CyclotomicNumber | None:
    """Exact square root of a field element, or None when no candidate
    verifies.

    The fast path handles rational squares times a power of q.  The general
    path proposes candidates numerically — square roots of the complex
    embeddings of c, one sign choice per conjugate pair, pulled back through
    the embedding matrix and rationalized — and then checks y*y == c in
    exact arithmetic.  The numerics only ever nominate; acceptance is the
    exact verification, so a returned value is always correct (a miss can
    only cause a None, never a wrong root).
    """
    fast = _cyc_sqrt(ctx, c)
    if fast is not None:
        return fast
    d, phi = ctx.d, ctx.phi
    units = [j for j in range(1, d) if math.gcd(j, d) == 1]
    roots = {j: cmath.exp(2j * cmath.pi * j / d) for j in units}
    emb = {j: sum(complex(x) * roots[j] ** i for i, x in enumerate(c.coeffs))
           for j in units}
    V = [[roots[j] ** i for i in range(phi)] for j in units]
    pairs = [(j, d - j) for j in units if j < d - j]
    for mask in range(1 << len(pairs)):
        w = {}
        for b, (j1, j2) in enumerate(pairs):
            s = cmath.sqrt(emb[j1])
            if mask >> b & 1:
                s = -s
            w[j1] = s
            w[j2] = s.conjugate()
        coords = _solve_complex(V, [w[j] for j in units])
        if any(abs(z.imag) > 1e-6 for z in coords):
            continue
        for denom_cap in (10**6, 10**12):
            cand = ctx.from_coeffs(
                [Fraction(z.real).limit_denominator(denom_cap) for z in coords])
            if cand * cand == c:
                return cand
    return None


def _sqrt_linear(ctx: FieldContext, D: MultiPoly) -> MultiPoly | None:
    """A polynomial l with l*l == D, when D is a perfect square of an at most
    linear polynomial; None otherwise."""
    if D.is_zero():
        return MultiPoly(ctx, D.nvars, {})
    if D.total_degree() > 2:
        return None
    if D.is_constant():
        a0 = _field_sqrt(ctx, D.constant_value())
        return MultiPoly.const(ctx, D.nvars, a0) if a0 is not None else None
    vs = sorted(D.variables())
    coeffs: dict[int, CyclotomicNumber] = {}
    for k in vs:
        sq = tuple(2 if i == k else 0 for i in range(D.nvars))
        ak = _field_sqrt(ctx, D.terms.get(sq, ctx.zero))
        if ak is None:
            return None
        coeffs[k] = ak
    lead = next((k for k in vs if not coeffs[k].is_zero()), None)
    if lead is None:
        return None
    # sign conventions: the leading coefficient is fixed, the rest can flip
    free = [k for k in vs if k != lead and not coeffs[k].is_zero()]
    for mask in range(1 << len(free)):
        cand = dict(coeffs)
        for b, k in enumerate(free):
            if mask >> b & 1:
                cand[k] = -cand[k]
        # constant term from the x_lead cross term
        lin = tuple(1 if i == lead else 0 for i in range(D.nvars))
        two_a = cand[lead] + cand[lead]
        a0 = D.terms.get(lin, ctx.zero) / two_a
        l = MultiPoly.const(ctx, D.nvars, a0)
        for k in vs:
            l = l + MultiPoly.var(ctx, D.nvars, k).scale(cand[k])
        if ((l * l) - D).is_zero():
            return l
    return None


def _quadratic_split(ctx: FieldContext, e: MultiPoly):
    """(k, root1, root2) for an equation quadratic in x_k with constant
    leading coefficient and perfect-square discriminant, else None."""
    for k in sorted(e.variables()):
        deg_k = max(m[k] for m in e.terms)
        if deg_k != 2:
            continue
        A = MultiPoly(ctx, e.nvars, {})
        B = MultiPoly(ctx, e.nvars, {})
        C = MultiPoly(ctx, e.nvars, {})
        ok = True
        for m, c in e.terms.items():
            rest = m[:k] + (0,) + m[k + 1:]
            if m[k] == 2:
                A = A + MultiPoly(ctx, e.nvars, {rest: c})
            elif m[k] == 1:
                B = B + MultiPoly(ctx, e.nvars, {rest: c})
            else:
                C = C + MultiPoly(ctx, e.nvars, {rest: c})
        if not A.is_constant():
            continue
        a = A.constant_value()
        D = B * B - (A * C).scale(4)
        l = _sqrt_linear(ctx, D)
        if l is None:
            continue
        inv2a = (a + a).inv()
        return k, (l - B).scale(inv2a), (-l - B).scale(inv2a)
    return None


def _quadratic_factor_branches(ctx: FieldContext, e: MultiPoly):
    """Equation-level branches for an equation quadratic in x_k whose leading
    coefficient is a polynomial, when the discriminant is a perfect square:
    from 4A*eq = (2A x + B)^2 - l^2, eq = 0 splits into the two linear-in-x
    factors (valid wherever A != 0) plus the A = 0 remainder branch, where
    the equation degenerates to B x + C = 0.  Every branch strictly lowers
    the x_k-degree of the split equation, so the recursion terminates."""
    for k in sorted(e.variables()):
        deg_k = max(m[k] for m in e.terms)
        if deg_k != 2:
            continue
        A = MultiPoly(ctx, e.nvars, {})
        B = MultiPoly(ctx, e.nvars, {})
        C = MultiPoly(ctx, e.nvars, {})
        for m, c in e.terms.items():
            rest = m[:k] + (0,) + m[k + 1:]
            part = MultiPoly(ctx, e.nvars, {rest: c})
            if m[k] == 2:
                A = A + part
            elif m[k] == 1:
                B = B + part
            else:
                C = C + part
        if A.is_constant():
            continue  # the direct root substitution handles this case
        D = B * B - (A * C).scale(4)
        l = _sqrt_linear(ctx, D)
        if l is None:
            continue
        x = MultiPoly.var(ctx, e.nvars, k)
        two_ax = (A * x).scale(2)
        return [[two_ax + B - l], [two_ax + B + l], [A, B * x + C]]
    return None


# -- exact solver for small polynomial systems ----------------------------------------


def solve_poly_system(ctx: FieldContext, eqs: list[MultiPoly], nvars: int,
                      free_value=1, degree_cap: int = 6,
                      branch_cap: int = 64) -> list[dict[int, CyclotomicNumber]]:
    """All solutions of eqs = 0 found by linear elimination plus branching on
    monomial factors.  Free variables are pinned to free_value.  Raises
    SolverDegreeExceeded when the strategy cannot finish within the caps."""
    free_value = free_value if isinstance(free_value, CyclotomicNumber) else ctx.scalar(free_value)
    solutions: dict[tuple, dict[int, CyclotomicNumber]] = {}
    branches = 0

    def recurse(eqs: list[MultiPoly], solved: list[tuple[int, MultiPoly]]):
        nonlocal branches
        branches += 1
        if branches > branch_cap:
            raise SolverDegreeExceeded(f"more than {branch_cap} solver branches")
        while True:
            live: list[MultiPoly] = []
            seen = set()
            for e in eqs:
                if e.is_zero():
                    continue
                if e.is_constant():
                    return  # inconsistent branch
                if e.total_degree() > degree_cap:
                    raise SolverDegreeExceeded(
                        f"equation of degree {e.total_degree()} exceeds cap {degree_cap}")
                e = e.normalized()
                k = e.key()
                if k not in seen:
                    seen.add(k)
                    live.append(e)
            eqs = live
            if not eqs:
                break

            # substitution step: prefer the lowest-degree, shortest equation
            # containing a variable that occurs only as a bare linear monomial
            best = None
            best_rank = None
            for e in eqs:
                lone = e.lone_linear_vars()
                if lone:
                    rank = (e.total_degree(), len(e.terms))
                    if best_rank is None or rank < best_rank:
                        best_rank = rank
                        best = (e, *lone[0])
            if best is not None:
                e, k, ck = best
                rhs = (e - MultiPoly.var(ctx, e.nvars, k).scale(ck)).scale(-ck.inv())
                solved.append((k, rhs))
                eqs = [p.substitute(k, rhs) if k in p.variables() else p
                       for p in eqs if p is not e]
                continue

            # no linear equation: branch on a variable dividing some equation
            target = next((e for e in eqs if e.monomial_gcd_var() is not None), None)
            if target is not None:
                k = target.monomial_gcd_var()
                zero = MultiPoly.const(ctx, target.nvars, 0)
                recurse([p.substitute(k, zero) for p in eqs],
                        solved + [(k, zero)])
                reduced = target.factor_out(k)
                recurse([reduced] + [p for p in eqs if p is not target], list(solved))
                return

            # last resort: split a quadratic with perfect-square discriminant
            for e in sorted(eqs, key=lambda p: (p.total_degree(), len(p.terms))):
                split = _quadratic_split(ctx, e)
                if split is not None:
                    k, r1, r2 = split
                    for root in (r1, r2):
                        recurse([p.substitute(k, root) if k in p.variables() else p
                                 for p in eqs if p is not e],
                                solved + [(k, root)])
                    return
            # same idea with a polynomial leading coefficient: factor instead
            # of substituting roots, with the leading-coefficient-vanishes
            # remainder as a third branch
            for e in sorted(eqs, key=lambda p: (p.total_degree(), len(p.terms))):
                factor_branches = _quadratic_factor_branches(ctx, e)
                if factor_branches is not None:
                    rest = [p for p in eqs if p is not e]
                    for extra in factor_branches:
                        recurse(extra + rest, list(solved))
                    return
            raise SolverDegreeExceeded(
                "no linear equation, monomial factor, or square-discriminant "
                "quadratic to branch on")

        # leaf: assign free variables, then back-substitute
        assignment: dict[int, CyclotomicNumber] = {}
        pinned = {k for k, _ in solved}
        for i in range(nvars):
            if i not in pinned:
                assignment[i] = free_value
        for k, expr in reversed(solved):
            assignment[k] = expr.evaluate(assignment)
        key = tuple(assignment[i].coeffs for i in range(nvars))
        solutions[key] = assignment

    recurse(list(eqs), [])
    return [solutions[k] for k in sorted(solutions)]


# -- symbolic matrices (entries are MultiPoly) ------------------------------------------


def _sym_mul(X, Y, ctx, nvars):
    n = len(X)
    Z = [[MultiPoly(ctx, nvars, {}) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for k in range(n):
            if X[i][k].is_zero():
                continue
            for j in range(n):
                if not Y[k][j].is_zero():
                    Z[i][j] = Z[i][j] + X[i][k] * Y[k][j]
    return Z


def _sym_addmul(X, Y, c):
    return [[x + y.scale(c) for x, y in zip(rx, ry)] for rx, ry in zip(X, Y)]


def _commutator_entries(X, Y, ctx, nvars):
    XY = _sym_mul(X, Y, ctx, nvars)
    YX = _sym_mul(Y, X, ctx, nvars)
    return [XY[i][j] - YX[i][j] for i in range(len(X)) for j in range(len(X))]


def _module_equations(ctx: FieldContext, thetas, gamma0, A_sym, nvars,
                      alpha0=None, beta0=None):
    """Entries of [alpha, A], [alpha, B], [beta, A], [beta, B] for symbolic A
    and B = diag(thetas), via the second-order displays.  With alpha0 (resp.
    beta0) given, the equations alpha = alpha0 * id (resp. beta = beta0 * id)
    are appended: pinning a scalar selects members of an otherwise free
    family, and pinning both is what makes the system zero-dimensional."""
    n1 = len(thetas)
    q = ctx.q
    zero = MultiPoly(ctx, nvars, {})
    B_sym = [[MultiPoly.const(ctx, nvars, thetas[i]) if i == j else zero
              for j in range(n1)] for i in range(n1)]
    qq = q * q + (q * q).inv()
    mu = q * q - (q * q).inv()
    nu = q - q.inv()
    inv_delta = (nu * mu).inv()

    def second_order(X, Y, g):
        # (Y^2 X - (q^2+q^-2) Y X Y + X Y^2 + (q^2-q^-2)^2 X + (q-q^-1)^2 g Y) / delta
        YX = _sym_mul(Y, X, ctx, nvars)
        XY = _sym_mul(X, Y, ctx, nvars)
        out = _sym_mul(Y, YX, ctx, nvars)
        out = _sym_addmul(out, _sym_mul(Y, XY, ctx, nvars), -qq)
        # note: Y X Y = Y*(X*Y); (Y^2)X = Y*(Y*X); X(Y^2) = (X*Y)*Y
        out = [[a + b for a, b in zip(ra, rb)]
               for ra, rb in zip(out, _sym_mul(XY, Y, ctx, nvars))]
        out = _sym_addmul(out, X, mu * mu)
        out = _sym_addmul(out, Y, nu * nu * g)
        return [[e.scale(inv_delta) for e in row] for row in out]

    alpha = second_order(A_sym, B_sym, gamma0)
    beta = second_order(B_sym, A_sym, gamma0)
    eqs = []
    eqs += _commutator_entries(alpha, A_sym, ctx, nvars)
    eqs += _commutator_entries(alpha, B_sym, ctx, nvars)
    eqs += _commutator_entries(beta, A_sym, ctx, nvars)
    eqs += _commutator_entries(beta, B_sym, ctx, nvars)
    for M, pin in ((alpha, alpha0), (beta, beta0)):
        if pin is None:
            continue
        for i in range(n1):
            for j in range(n1):
                e = M[i][j]
                if i == j:
                    e = e - MultiPoly.const(ctx, nvars, pin)
                eqs.append(e)
    return eqs


# -- the public constructors ----------------------------------------------------------


@dataclass(frozen=True)
class ModuleSpec:
    """Dimension-(n+1) parameter point for the irreducibility criterion."""
    n: int
    a: CyclotomicNumber
    b: CyclotomicNumber
    c: CyclotomicNumber

    def __post_init__(self):
        if self.a.is_zero() or self.b.is_zero() or self.c.is_zero():
            raise ZeroParameter("module parameters must be nonzero")


def one_dim(ctx: FieldContext, A0, B0, gamma0) -> Representation:
    return assemble(ExactMatrix(ctx, [[A0]]), ExactMatrix(ctx, [[B0]]), gamma0)


def criterion(ctx: FieldContext, spec: ModuleSpec) -> bool:
    """Irreducibility test: dimension within range and the four parameter
    products avoid the forbidden q-power window."""
    if not 0 <= spec.n <= ctx.dbar - 1:
        return False
    a, b, c = spec.a, spec.b, spec.c
    products = (a * b * c, a.inv() * b * c, a * b.inv() * c, a * b * c.inv())
    forbidden = {(2 * i - spec.n - 1) % ctx.d for i in range(1, spec.n + 1)}
    for p in products:
        for e in forbidden:
            if p == ctx.q_power(e):
                return False
    return True


def ladder_values(ctx: FieldContext, p, n: int) -> tuple:
    """The n+1 values p*q^(2i-n) + p^(-1)*q^(n-2i) for i = 0..n — the
    eigenvalue ladder attached to a spectral parameter p."""
    p = p if isinstance(p, CyclotomicNumber) else ctx.scalar(p)
    if p.is_zero():
        raise ZeroParameter("ladder parameter must be invertible")
    pinv = p.inv()
    return tuple(p * ctx.q_power(2 * i - n) + pinv * ctx.q_power(n - 2 * i)
                 for i in range(n + 1))


def central_scalars(ctx: FieldContext, spec: ModuleSpec) -> tuple:
    """Scalars through which the three defining central elements act on the
    family member labelled by spec, in definition order.

    With u = a + 1/a, v = b + 1/b, w = c + 1/c and kappa = q^(n+1) + q^(-n-1)
    the triple is (v*w + u*kappa, w*u + v*kappa, u*v + w*kappa).  The pairing
    of generators to scalars is pinned down by the one-dimensional case: there
    the first central element must act as (q + 1/q)*A0 + B0*C0, which is
    u*kappa + v*w when n = 0."""
    u = spec.a + spec.a.inv()
    v = spec.b + spec.b.inv()
    w = spec.c + spec.c.inv()
    kappa = ctx.q_power(spec.n + 1) + ctx.q_power(-spec.n - 1)
    return (v * w + u * kappa, w * u + v * kappa, u * v + w * kappa)


def _poly_from_roots(ctx: FieldContext, roots) -> tuple:
    coeffs = [ctx.one]
    for t in roots:
        new = [ctx.zero] * (len(coeffs) + 1)
        for j, cc in enumerate(coeffs):
            new[j] = new[j] + cc
            new[j + 1] = new[j + 1] - cc * t
        coeffs = new
    return tuple(coeffs)


def _ladder_key(ctx: FieldContext, p, n: int):
    return tuple(sorted(v.coeffs for v in ladder_values(ctx, p, n)))


def _criterion_from_traces(ctx: FieldContext, n: int, u, v, w) -> bool:
    """The irreducibility verdict as a function of the trace coordinates
    u = a + 1/a, v = b + 1/b, w = c + 1/c, on which it only depends (the
    forbidden window is inversion-closed, and inverting one parameter maps
    the four products into the inversion-closure of the original four).

    When a trace has no root in the field, the corresponding parameter lives
    in a quadratic extension; every forbidden product then involves that
    parameter once, so it cannot equal an in-field power of q and the window
    condition holds vacuously."""
    if not 0 <= n <= ctx.dbar - 1:
        return False
    params = []
    for t in (u, v, w):
        disc = t * t - ctx.scalar(4)
        s = _field_sqrt(ctx, disc)
        if s is None:
            return True  # parameter outside the field: no product can hit the window
        params.append((t + s) / ctx.scalar(2))  # nonzero: the two roots multiply to 1
    return criterion(ctx, ModuleSpec(n, *params))


def _label_fiber_verdict(ctx: FieldContext, spec: ModuleSpec) -> bool:
    """The criterion verdict, provided every label sharing the matched
    invariants (central scalars plus both ladder multisets) yields the same
    one; AmbiguousLabel otherwise.

    Labels sharing an eigenvalue-ladder multiset are exactly p -> p*q^(2j)
    and p -> q^(2j)/p with the multiset preserved (matching the first ladder
    value forces x + 1/x = y + 1/y, i.e. x in {y, 1/y}), so the fiber is
    finite and enumerable.  The c parameter of a fiber label is recovered
    from the linear relations between the central scalars; when u' = v' = 0
    and kappa = 0 it drops out of every invariant, infinitely many labels
    collide, and the point is ambiguous outright unless a single verdict
    covers all of them (it never does: c can always be steered into or out
    of the window)."""
    n = spec.n
    alpha0, beta0, gamma0 = central_scalars(ctx, spec)
    kappa = ctx.q_power(n + 1) + ctx.q_power(-n - 1)
    a_key = _ladder_key(ctx, spec.a, n)
    b_key = _ladder_key(ctx, spec.b, n)

    def rotations(p):
        seen = {}
        for j in range(ctx.dbar):
            for cand in (p * ctx.q_power(2 * j), p.inv() * ctx.q_power(2 * j)):
                seen[cand.coeffs] = cand
        return list(seen.values())

    a_fiber = [p for p in rotations(spec.a) if _ladder_key(ctx, p, n) == a_key]
    b_fiber = [p for p in rotations(spec.b) if _ladder_key(ctx, p, n) == b_key]
    verdicts = set()
    for ap in a_fiber:
        up = ap + ap.inv()
        for bp in b_fiber:
            vp = bp + bp.inv()
            if not vp.is_zero():
                wp = (alpha0 - up * kappa) / vp
            elif not up.is_zero():
                wp = (beta0 - vp * kappa) / up
            elif not kappa.is_zero():
                wp = (gamma0 - up * vp) / kappa
            else:
                raise AmbiguousLabel(
                    "the c parameter drops out of every matched invariant")
            if (alpha0 != vp * wp + up * kappa
                    or beta0 != wp * up + vp * kappa
                    or gamma0 != up * vp + wp * kappa):
                continue
            verdicts.add(_criterion_from_traces(ctx, n, up, vp, wp))
    if len(verdicts) != 1:
        raise AmbiguousLabel(
            "labels sharing the matched invariants disagree on irreducibility")
    return verdicts.pop()


def realize(ctx: FieldContext, spec: ModuleSpec, free_value=1,
            degree_cap: int = 6, branch_cap: int = 64) -> list[Representation]:
    """Concrete modules carrying all the labelled invariants of the family
    member named by spec.

    B is put in diagonal form on the eigenvalue ladder of the b parameter,
    the first and second central scalars are pinned into the constraint
    system (pinning only one can leave a free family whose returned
    representative misses the labelled member), and the solutions are then
    filtered down to those where A has the labelled ladder as its spectrum
    (via the characteristic polynomial).  Anything returned is a genuine
    module sharing every invariant the label prescribes.

    Both ladders must be repetition-free (DegenerateLadder otherwise): at a
    repeated eigenvalue the intended member can act through a nontrivial
    Jordan block, which no module with diagonalizable B (resp. A) realizes,
    so invariant matching there would silently pick up a different module.
    The label must also be well-posed (AmbiguousLabel otherwise): every
    label sharing the matched invariants has to carry the same
    irreducibility verdict, else nothing ties a returned module to this
    label rather than a conflicting one.

    Raises NoSolution when the pinned constraint system has no solutions at
    all; returns [] when solutions exist but none carries the full invariant
    set.
    """
    n = spec.n
    if not 0 <= n <= ctx.dbar - 1:
        raise DegenerateLadder(f"no member of dimension {n + 1} at order {ctx.d}")
    a_vals = ladder_values(ctx, spec.a, n)
    b_vals = ladder_values(ctx, spec.b, n)
    for vals, side in ((a_vals, "A"), (b_vals, "B")):
        if any(x == y for i, x in enumerate(vals) for y in vals[i + 1:]):
            raise DegenerateLadder(f"{side}-ladder repeats a value")
    fiber_verdict = _label_fiber_verdict(ctx, spec)
    assert fiber_verdict == criterion(ctx, spec)
    alpha0, beta0, gamma0 = central_scalars(ctx, spec)
    seq = generate(ctx, spec.b * ctx.q_power(n))
    sols = solve_tridiagonal(ctx, n, seq, gamma0, alpha0=alpha0, beta0=beta0,
                             free_value=free_value, degree_cap=degree_cap,
                             branch_cap=branch_cap)
    target = _poly_from_roots(ctx, a_vals)
    matched = []
    for rep in sols:
        assert scalar_action(rep, "beta") == beta0
        if charpoly(rep.A) == target:
            matched.append(rep)
    return matched


def _build_representation(ctx, thetas, gamma0, diag, sub, sup=None) -> Representation:
    n1 = len(thetas)
    rows = [[ctx.zero] * n1 for _ in range(n1)]
    for i in range(n1):
        rows[i][i] = diag[i]
        if i + 1 < n1:
            rows[i][i + 1] = ctx.one if sup is None else sup[i]
            rows[i + 1][i] = sub[i]
    A = ExactMatrix(ctx, rows)
    B = ExactMatrix.diagonal(ctx, thetas)
    return assemble(A, B, gamma0)


def solve_tridiagonal(ctx: FieldContext, n: int, thetas, gamma0,
                      alpha0=None, beta0=None, free_value=1,
                      degree_cap: int = 6,
                      branch_cap: int = 64) -> list[Representation]:
    """All modules with B = diag(thetas) and A tridiagonal with unit
    superdiagonal, for the given gamma scalar.

    thetas may be a QRacahSequence (its first n+1 values are taken) or n+1
    eigenvalue candidates (a consecutive sequence segment); unknowns are the
    n+1 diagonal and n subdiagonal entries of A.  Passing alpha0 (resp.
    beta0) additionally pins the scalar through which the first (resp.
    second) defining central element acts; pinning only one of them can
    leave a free family, from which one representative per solver leaf is
    returned.  Raises NoSolution when the constraint system is
    inconsistent."""
    if isinstance(thetas, QRacahSequence):
        thetas = [thetas.theta(i) for i in range(n + 1)]
    thetas = [t if isinstance(t, CyclotomicNumber) else ctx.scalar(t) for t in thetas]
    if len(thetas) != n + 1:
        raise ValueError(f"expected {n + 1} eigenvalues, got {len(thetas)}")
    gamma0 = gamma0 if isinstance(gamma0, CyclotomicNumber) else ctx.scalar(gamma0)
    if alpha0 is not None and not isinstance(alpha0, CyclotomicNumber):
        alpha0 = ctx.scalar(alpha0)
    if beta0 is not None and not isinstance(beta0, CyclotomicNumber):
        beta0 = ctx.scalar(beta0)
    nvars = 2 * n + 1  # d_0..d_n, e_1..e_n
    zero = MultiPoly(ctx, nvars, {})
    one = MultiPoly.const(ctx, nvars, 1)
    A_sym = [[zero for _ in range(n + 1)] for _ in range(n + 1)]
    for i in range(n + 1):
        A_sym[i][i] = MultiPoly.var(ctx, nvars, i)
        if i + 1 <= n:
            A_sym[i][i + 1] = one
            A_sym[i + 1][i] = MultiPoly.var(ctx, nvars, n + 1 + i)
    eqs = _module_equations(ctx, thetas, gamma0, A_sym, nvars, alpha0=alpha0,
                            beta0=beta0)
    sols = solve_poly_system(ctx, eqs, nvars, free_value=free_value,
                             degree_cap=degree_cap, branch_cap=branch_cap)
    if not sols:
        raise NoSolution(
            f"no tridiagonal module on this spectrum with gamma={gamma0!r}")
    out = []
    for sol in sols:
        diag = [sol[i] for i in range(n + 1)]
        sub = [sol[n + 1 + i] for i in range(n)]
        rep = _build_representation(ctx, thetas, gamma0, diag, sub)
        report = check_module(rep)
        assert report.ok, f"solver produced a non-module: {report.failures}"
        out.append(rep)
    return out


def solve_tridiagonal_nogauge(ctx: FieldContext, n: int, thetas, gamma0,
                              superdiag=None, free_value=1,
                              degree_cap: int = 8,
                              branch_cap: int = 256) -> list[Representation]:
    """Variant with the superdiagonal pinned to arbitrary prescribed nonzero
    constants instead of the all-ones gauge; intended for the small-n
    completeness cross-check of that gauge.

    Leaving the superdiagonal entries as unknowns is not an option for this
    elimination strategy: conjugation by diagonal matrices moves through the
    solution set, so the ungauged variety contains whole gauge orbits (the
    hyperbolas e_i * f_i = const), which are positive-dimensional and not
    aligned with any coordinate — an honest SolverDegreeExceeded, not a
    solvable system.  Pinning the superdiagonal to any fixed nowhere-zero
    tuple slices each orbit exactly once and keeps the system
    zero-dimensional."""
    if isinstance(thetas, QRacahSequence):
        thetas = [thetas.theta(i) for i in range(n + 1)]
    thetas = [t if isinstance(t, CyclotomicNumber) else ctx.scalar(t) for t in thetas]
    if len(thetas) != n + 1:
        raise ValueError(f"expected {n + 1} eigenvalues, got {len(thetas)}")
    gamma0 = gamma0 if isinstance(gamma0, CyclotomicNumber) else ctx.scalar(gamma0)
    if superdiag is None:
        superdiag = [2 + (i % 2) for i in range(n)]
    superdiag = [f if isinstance(f, CyclotomicNumber) else ctx.scalar(f)
                 for f in superdiag]
    if len(superdiag) != n:
        raise ValueError(f"expected {n} superdiagonal values, got {len(superdiag)}")
    if any(f.is_zero() for f in superdiag):
        raise ZeroParameter("superdiagonal values must be nonzero")
    nvars = 2 * n + 1  # d_0..d_n, e_1..e_n
    zero = MultiPoly(ctx, nvars, {})
    A_sym = [[zero for _ in range(n + 1)] for _ in range(n + 1)]
    for i in range(n + 1):
        A_sym[i][i] = MultiPoly.var(ctx, nvars, i)
        if i + 1 <= n:
            A_sym[i][i + 1] = MultiPoly.const(ctx, nvars, superdiag[i])
            A_sym[i + 1][i] = MultiPoly.var(ctx, nvars, n + 1 + i)
    eqs = _module_equations(ctx, thetas, gamma0, A_sym, nvars)
    sols = solve_poly_system(ctx, eqs, nvars, free_value=free_value,
                             degree_cap=degree_cap, branch_cap=branch_cap)
    out = []
    for sol in sols:
        diag = [sol[i] for i in range(n + 1)]
        sub = [sol[n + 1 + i] for i in range(n)]
        rep = _build_representation(ctx, thetas, gamma0, diag, sub, superdiag)
        assert check_module(rep).ok
        out.append(rep)
    return out


def solve_cyclic_tridiagonal(ctx: FieldContext, s: QRacahSequence, gamma0,
                             free_value=1, degree_cap: int = 8,
                             branch_cap: int = 512) -> list[Representation]:
    """Modules with B = the full eigenvalue cycle and A tridiagonal with
    wrap-around corners (band indices mod dbar).

    The open tridiagonal shape forces one lowering operator to kill the first
    basis vector, so those modules always exhibit a non-injective index; the
    wrap-around corners remove that boundary and realize the complementary
    all-injective behaviour.  Gauge: superdiagonal ones except the corner,
    which stays an unknown (the conjugation-invariant holonomy)."""
    m = ctx.dbar
    thetas = [s.theta(i) for i in range(m)]
    gamma0 = gamma0 if isinstance(gamma0, CyclotomicNumber) else ctx.scalar(gamma0)
    nvars = 2 * m + 1  # d_0..d_{m-1}, e_0..e_{m-1} (e_i at [i][i-1 mod m]), corner
    zero = MultiPoly(ctx, nvars, {})
    one = MultiPoly.const(ctx, nvars, 1)
    A_sym = [[zero for _ in range(m)] for _ in range(m)]
    for i in range(m):
        A_sym[i][i] = MultiPoly.var(ctx, nvars, i)
        A_sym[i][(i - 1) % m] = MultiPoly.var(ctx, nvars, m + i)
    for i in range(m - 1):
        A_sym[i][i + 1] = one
    A_sym[m - 1][0] = MultiPoly.var(ctx, nvars, 2 * m)
    eqs = _module_equations(ctx, thetas, gamma0, A_sym, nvars)
    sols = solve_poly_system(ctx, eqs, nvars, free_value=free_value,
                             degree_cap=degree_cap, branch_cap=branch_cap)
    if not sols:
        raise NoSolution(
            f"no cyclic tridiagonal module on this cycle with gamma={gamma0!r}")
    out = []
    for sol in sols:
        rows = [[ctx.zero] * m for _ in range(m)]
        for i in range(m):
            rows[i][i] = sol[i]
            rows[i][(i - 1) % m] = sol[m + i]
        for i in range(m - 1):
            rows[i][i + 1] = ctx.one
        rows[m - 1][0] = sol[2 * m]
        rep = assemble(ExactMatrix(ctx, rows), ExactMatrix.diagonal(ctx, thetas), gamma0)
        report = check_module(rep)
        assert report.ok, f"solver produced a non-module: {report.failures}"
        out.append(rep)
    return out


def gauge_matches_free_superdiagonal(ctx: FieldContext, n: int, thetas, gamma0) -> bool:
    """Check that the all-ones-superdiagonal solutions, up to the diagonal
    conjugation they were gauged by, cover every solution of the gauge-free
    system whose superdiagonal never vanishes (n <= 2 by design)."""
    if n > 2:
        raise ValueError("the completeness cross-check is defined for n <= 2")

    def gauge_invariant(rep: Representation):
        # d_i and the products e_i * f_i are conjugation invariants
        A = rep.A
        diag = tuple(A.rows[i][i] for i in range(rep.n))
        prods = tuple(A.rows[i + 1][i] * A.rows[i][i + 1] for i in range(rep.n - 1))
        return diag, prods

    try:
        gauged = solve_tridiagonal(ctx, n, thetas, gamma0)
    except NoSolution:
        gauged = []
    free = solve_tridiagonal_nogauge(ctx, n, thetas, gamma0)
    gauged_invs = {gauge_invariant(r) for r in gauged}
    for rep in free:
        if any(rep.A.rows[i][i + 1].is_zero() for i in range(rep.n - 1)):
            continue  # outside the gauge by construction
        if gauge_invariant(rep) not in gauged_invs:
            return False
    return True


# -- the sweep -----------------------------------------------------------------------


@dataclass
class CatalogEntry:
    d: int
    a_param: CyclotomicNumber
    start: int
    n: int
    gamma: CyclotomicNumber
    status: str                      # "ok", "no_solution", "solver_limit"
    dim: int = 0
    module_ok: bool = False
    irreducible: bool = False
    span_dim: int = 0
    qracah_type: str = ""
    branch: str = ""
    section5_ok: bool | None = None
    section6_ok: bool | None = None
    A_rows: list | None = None
    B_diag: list | None = None

    def to_json(self) -> str:
        def c(x):
            return cyc_to_json(x) if isinstance(x, CyclotomicNumber) else x
        payload = {
            "d": self.d, "a": c(self.a_param), "start": self.start, "n": self.n,
            "gamma": c(self.gamma), "status": self.status, "dim": self.dim,
            "module_ok": self.module_ok, "irreducible": self.irreducible,
            "span_dim": self.span_dim, "qracah_type": self.qracah_type,
            "branch": self.branch, "section5_ok": self.section5_ok,
            "section6_ok": self.section6_ok,
            "A": [[c(e) for e in row] for row in self.A_rows] if self.A_rows else None,
            "B": [c(e) for e in self.B_diag] if self.B_diag else None,
        }
        return json.dumps(payload, sort_keys=True)


@dataclass
class Catalog:
    d: int
    entries: list[CatalogEntry]
    note: str = ("search space: tridiagonal A with nowhere-zero superdiagonal; "
                 "modules requiring a zero superdiagonal entry are not enumerated")

    def found_full_dimension(self) -> bool:
        dbar = make_field(self.d).dbar
        return any(e.irreducible and e.dim == dbar for e in self.entries)

    def irreducible_dimensions(self) -> set[int]:
        return {e.dim for e in self.entries if e.irreducible}

    def write_jsonl(self, path: str):
        with open(path, "w") as fh:
            fh.write(json.dumps({"d": self.d, "note": self.note,
                                 "entries": len(self.entries)}) + "\n")
            for e in self.entries:
                fh.write(e.to_json() + "\n")


def _analyze(ctx, rep: Representation, s: QRacahSequence, entry: CatalogEntry):
    entry.dim = rep.n
    entry.module_ok = check_module(rep).ok
    irr, span = burnside_irreducible(rep)
    entry.irreducible, entry.span_dim = irr, span
    dec = decompose(rep, s)
    entry.qracah_type = dec.seq.type_tag
    if irr:
        ops = section5_ops(rep, dec)
        entry.section5_ok = verify_operator_props(rep, dec, ops).ok
        report = verify_dimension_theorems(rep, dec, ops)
        entry.section6_ok = report.ok
        entry.branch = report.branch
    entry.A_rows = [list(r) for r in rep.A.rows]
    entry.B_diag = [rep.B.rows[i][i] for i in range(rep.n)]


def sweep(d: int, gamma_samples=None, spectrum_samples=None,
          max_n: int | None = None) -> Catalog:
    """Run the tridiagonal solver over a deterministic grid of sequence
    parameters, segment positions, sizes, and gamma scalars."""
    ctx = make_field(d)
    dbar = ctx.dbar
    gammas = ([ctx.scalar(g) for g in (0, 1, 2)]
              if gamma_samples is None else
              [g if isinstance(g, CyclotomicNumber) else ctx.scalar(g)
               for g in gamma_samples])
    params = (sample_parameters(ctx) if spectrum_samples is None
              else [p if isinstance(p, CyclotomicNumber) else ctx.scalar(p)
                    for p in spectrum_samples])
    # default stops at segment length dbar; larger max_n deliberately probes
    # past the period (wrapped, repeated eigenvalues) to test tightness
    top_n = dbar - 1 if max_n is None else max_n
    entries: list[CatalogEntry] = []
    seen_params = set()
    for a in params:
        if a.is_zero():
            continue
        s = generate(ctx, a)
        key = s.thetas
        if key in seen_params:
            continue
        seen_params.add(key)
        for n in range(top_n + 1):
            for start in range(dbar):
                thetas = [s.theta(start + i) for i in range(n + 1)]
                for gamma0 in gammas:
                    entry = CatalogEntry(d=d, a_param=a, start=start, n=n,
                                         gamma=gamma0, status="ok")
                    try:
                        reps = solve_tridiagonal(ctx, n, thetas, gamma0)
                    except NoSolution:
                        entry.status = "no_solution"
                        entries.append(entry)
                        continue
                    except SolverDegreeExceeded:
                        entry.status = "solver_limit"
                        entries.append(entry)
                        continue
                    for rep in reps:
                        e = CatalogEntry(d=d, a_param=a, start=start, n=n,
                                         gamma=gamma0, status="ok")
                        _analyze(ctx, rep, s, e)
                        entries.append(e)
    return Catalog(d=d, entries=entries)
