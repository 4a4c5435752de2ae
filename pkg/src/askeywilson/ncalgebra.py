"""Noncommutative normal forms for the universal Askey-Wilson algebra.

The algebra is generated by A, B, C; the three combinations

    alpha = (q+q^-1) A + (q BC - q^-1 CB) / (q - q^-1)
    beta  = (q+q^-1) B + (q CA - q^-1 AC) / (q - q^-1)
    gamma = (q+q^-1) C + (q AB - q^-1 BA) / (q - q^-1)

are central, as is the Casimir element

    W = q ABC + q^2 A^2 + q^-2 B^2 + q^2 C^2 - q A alpha - q^-1 B beta - q C gamma.

Internally a word is a string of generator letters together with commuting
exponents for (W, alpha, beta, gamma); the normal (PBW) words are
A^i B^j C^k W^l alpha^r beta^s gamma^t with i*j*k = 0.

The rewriting system is not hand-typed: the four core rules are obtained by
solving the displayed relations for the reversed products BA, CA, CB and for
ABC, and the system is then closed under Bergman-style overlap completion,
staged by overlap length and ordered by deglex (word length, then letter
order A < B < C).  Every completed rule observed has the shape
A B^j C -> lower terms; the census and an independent linear-algebra quotient
of the free algebra double-check that the normal words are exactly the PBW
monomials.
"""

from __future__ import annotations

import heapq
import threading
from functools import lru_cache
from typing import Iterable, Iterator

from .chebyshev import cheb_poly
from .cyclotomic import CyclotomicNumber, FieldContext, make_field
from .errors import ContextMismatch, DegreeOverflow
from .qexpr import parse_terms, print_qexpr

__all__ = ["NCAlgebra", "NCPoly", "make_algebra", "Word"]

GENERATORS = "ABC"
CENTRALS = "Wabg"  # Casimir, alpha, beta, gamma
_ZCENT = (0, 0, 0, 0)

#: a word: generator letters in order, plus central exponents (W, a, b, g)
Word = tuple[tuple[str, ...], tuple[int, int, int, int]]


def _word_key(letters: tuple[str, ...]) -> tuple[int, tuple[str, ...]]:
    """Deglex: length first, then letter order.  Stable under concatenation,
    and agrees with the inversion-count order on every rule in the system."""
    return (len(letters), letters)


def _term_key(w: Word):
    return (len(w[0]), w[0], w[1])


def _cent_add(u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, int, int, int]:
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2], u[3] + v[3])


class NCPoly:
    """A finite linear combination of words with Q(q) coefficients.

    Treat instances as immutable.  Multiplication is free concatenation of
    letter strings (central exponents add); no rewriting happens until
    normal_form is called.
    """

    __slots__ = ("alg", "terms")

    def __init__(self, alg: "NCAlgebra", terms: dict[Word, CyclotomicNumber]):
        self.alg = alg
        self.terms = {w: c for w, c in terms.items() if not c.is_zero()}

    # -- constructors --------------------------------------------------------

    def _check(self, other: "NCPoly") -> "NCPoly":
        if isinstance(other, NCPoly):
            if other.alg.ctx.d != self.alg.ctx.d:
                raise ContextMismatch(
                    f"cannot mix algebras for d={self.alg.ctx.d} and d={other.alg.ctx.d}")
            return other
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        out = dict(self.terms)
        for w, c in o.terms.items():
            out[w] = out[w] + c if w in out else c
        return NCPoly(self.alg, out)

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        out = dict(self.terms)
        for w, c in o.terms.items():
            out[w] = out[w] - c if w in out else -c
        return NCPoly(self.alg, out)

    def __neg__(self):
        return NCPoly(self.alg, {w: -c for w, c in self.terms.items()})

    def scale(self, c) -> "NCPoly":
        if isinstance(c, CyclotomicNumber):
            if c.is_zero():
                return NCPoly(self.alg, {})
        elif not c:
            return NCPoly(self.alg, {})
        return NCPoly(self.alg, {w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, CyclotomicNumber)):
            return self.scale(other)
        o = self._check(other)
        if o is NotImplemented:
            return o
        out: dict[Word, CyclotomicNumber] = {}
        for (l1, c1), v1 in self.terms.items():
            for (l2, c2), v2 in o.terms.items():
                w = (l1 + l2, _cent_add(c1, c2))
                v = v1 * v2
                out[w] = out[w] + v if w in out else v
        return NCPoly(self.alg, out)

    def __rmul__(self, other):
        if isinstance(other, (int, CyclotomicNumber)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "NCPoly":
        if n < 0:
            raise ValueError("negative powers are not defined in the algebra")
        acc = self.alg.one
        for _ in range(n):
            acc = acc * self
        return acc

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return self.alg.ctx.d == other.alg.ctx.d and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.alg.ctx.d, frozenset(self.terms.items())))

    def max_letter_length(self) -> int:
        return max((len(w[0]) for w in self.terms), default=0)

    def __repr__(self):
        return self.alg.print(self)


class NCAlgebra:
    """The algebra at a fixed field context, carrying the rewriting system.

    The completed rule set, the word-level normal-form memo, and the list of
    rules added by completion are owned here; all mutation happens under a
    lock, after which lookups are read-only.
    """

    def __init__(self, ctx: FieldContext, degree_cap: int = 24):
        self.ctx = ctx
        self.degree_cap = degree_cap
        self._lock = threading.RLock()
        self._memo: dict[tuple[str, ...], dict[Word, CyclotomicNumber]] = {}
        self._rules: dict[tuple[str, ...], NCPoly] = {}
        self._rule_lengths: tuple[int, ...] = ()
        self._pending: list[tuple[int, tuple[str, ...], tuple[str, ...], tuple[str, ...], int]] = []
        self._seen_overlaps: set = set()
        self._completed_to = 0
        self.completion_added: list[tuple[str, ...]] = []

        q = ctx.q
        self.one = self.word(())
        self.A = self.word(("A",))
        self.B = self.word(("B",))
        self.C = self.word(("C",))
        self.omega = self.word((), (1, 0, 0, 0))
        self.alpha = self.word((), (0, 1, 0, 0))
        self.beta = self.word((), (0, 0, 1, 0))
        self.gamma = self.word((), (0, 0, 0, 1))

        # core rules, solved from the defining relations (never hand-typed)
        for relation, target in (
            (self.defining_element("gamma") - self.gamma, ("B", "A")),
            (self.defining_element("beta") - self.beta, ("C", "A")),
            (self.defining_element("alpha") - self.alpha, ("C", "B")),
            (self.casimir() - self.omega, ("A", "B", "C")),
        ):
            self._install_rule(target, self._solve_for_word(relation, target))
        self._seed_overlaps()

    # -- element constructors -------------------------------------------------

    def word(self, letters: Iterable[str], cent: tuple[int, int, int, int] = _ZCENT,
             coeff: CyclotomicNumber | int = 1) -> NCPoly:
        c = coeff if isinstance(coeff, CyclotomicNumber) else self.ctx.scalar(coeff)
        return NCPoly(self, {(tuple(letters), cent): c})

    def scalar(self, c) -> NCPoly:
        c = c if isinstance(c, CyclotomicNumber) else self.ctx.scalar(c)
        return NCPoly(self, {((), _ZCENT): c})

    def generator(self, name: str) -> NCPoly:
        return {"A": self.A, "B": self.B, "C": self.C}[name]

    def defining_element(self, name: str) -> NCPoly:
        """The central combination alpha/beta/gamma written in pure generator
        letters (the left-hand sides of the defining relations)."""
        q = self.ctx.q
        lam = q + q.inv()
        mu = (q - q.inv()).inv()
        X, Y, Z = {"alpha": (self.A, self.B, self.C),
                   "beta": (self.B, self.C, self.A),
                   "gamma": (self.C, self.A, self.B)}[name]
        return X * lam + (Y * Z * q - Z * Y * q.inv()) * mu

    def casimir(self, pure_letters: bool = False) -> NCPoly:
        """The Casimir combination.  With pure_letters the central symbols are
        replaced by their generator-letter expressions, giving an element of
        the free algebra on A, B, C alone."""
        q = self.ctx.q
        al = self.defining_element("alpha") if pure_letters else self.alpha
        be = self.defining_element("beta") if pure_letters else self.beta
        ga = self.defining_element("gamma") if pure_letters else self.gamma
        return (self.A * self.B * self.C * q
                + self.A * self.A * q ** 2 + self.B * self.B * q ** -2
                + self.C * self.C * q ** 2
                - self.A * al * q - self.B * be * q.inv() - self.C * ga * q)

    # -- rule construction ------------------------------------------------------

    def _solve_for_word(self, relation: NCPoly, letters: tuple[str, ...]) -> NCPoly:
        """Rewrite `relation = 0` as `letters -> rhs`."""
        target: Word = (letters, _ZCENT)
        coeff = relation.terms[target]
        rest = NCPoly(self, {w: c for w, c in relation.terms.items() if w != target})
        return rest.scale(-coeff.inv())

    def _install_rule(self, letters: tuple[str, ...], rhs: NCPoly):
        lhs_key = _word_key(letters)
        for (wl, _wc) in rhs.terms:
            assert _word_key(wl) < lhs_key, (letters, wl)
        self._rules[letters] = rhs
        self._rule_lengths = tuple(sorted({len(k) for k in self._rules}))
        # memoized normal forms of words long enough to contain the new
        # pattern may be stale
        stale = [w for w in self._memo if len(w) >= len(letters)]
        for w in stale:
            del self._memo[w]

    # -- rewriting -------------------------------------------------------------

    def _find_redex(self, letters: tuple[str, ...]):
        rules = self._rules
        n = len(letters)
        for pos in range(n - 1):
            for L in self._rule_lengths:
                if pos + L <= n and letters[pos:pos + L] in rules:
                    return pos, letters[pos:pos + L]
        return None

    def _one_step(self, letters: tuple[str, ...], pos: int, lhs: tuple[str, ...]
                  ) -> list[tuple[tuple[str, ...], tuple[int, int, int, int], CyclotomicNumber]]:
        prefix, suffix = letters[:pos], letters[pos + len(lhs):]
        out = []
        for (wl, wc), c in self._rules[lhs].terms.items():
            out.append((prefix + wl + suffix, wc, c))
        return out

    def _nf_letters(self, letters: tuple[str, ...]) -> dict[Word, CyclotomicNumber]:
        """Normal form of a bare letter word, memoized.  Iterative DFS so deep
        reduction chains cannot overflow the interpreter stack."""
        memo = self._memo
        hit = memo.get(letters)
        if hit is not None:
            return hit
        stack = [letters]
        while stack:
            cur = stack[-1]
            if cur in memo:
                stack.pop()
                continue
            redex = self._find_redex(cur)
            if redex is None:
                memo[cur] = {(cur, _ZCENT): self.ctx.one}
                stack.pop()
                continue
            parts = self._one_step(cur, *redex)
            missing = [w for w, _c, _v in parts if w not in memo]
            if missing:
                stack.extend(missing)
                continue
            total: dict[Word, CyclotomicNumber] = {}
            for w, cshift, v in parts:
                for (rl, rc), rv in memo[w].items():
                    key = (rl, _cent_add(rc, cshift))
                    acc = rv * v
                    total[key] = total[key] + acc if key in total else acc
            memo[cur] = {k: c for k, c in total.items() if not c.is_zero()}
            stack.pop()
        return memo[letters]

    def normal_form(self, p: NCPoly, cap: int | None = None) -> NCPoly:
        """Reduce to the PBW basis.  Word lengths never grow during reduction,
        so the cap is checked once against the input."""
        cap = self.degree_cap if cap is None else cap
        top = p.max_letter_length()
        if top > cap:
            raise DegreeOverflow(
                f"word of length {top} exceeds the configured cap {cap}")
        with self._lock:
            self.ensure_completed(top)
            out: dict[Word, CyclotomicNumber] = {}
            for (letters, cent), coeff in p.terms.items():
                for (rl, rc), rv in self._nf_letters(letters).items():
                    key = (rl, _cent_add(rc, cent))
                    acc = rv * coeff
                    out[key] = out[key] + acc if key in out else acc
            return NCPoly(self, out)

    def commutator(self, p: NCPoly, r: NCPoly, cap: int | None = None) -> NCPoly:
        return self.normal_form(p * r - r * p, cap=cap)

    def is_normal(self, letters: tuple[str, ...]) -> bool:
        return self._find_redex(letters) is None

    # -- completion --------------------------------------------------------------

    def _enqueue_overlaps(self, x: tuple[str, ...], y: tuple[str, ...]):
        # proper overlaps: a suffix of x equals a prefix of y
        for k in range(1, min(len(x), len(y))):
            if x[-k:] == y[:k]:
                w = x + y[k:]
                item = (w, x, y, len(x) - k)
                if item not in self._seen_overlaps:
                    self._seen_overlaps.add(item)
                    heapq.heappush(self._pending, (len(w), w, x, y, len(x) - k))
        # inclusion: y a proper substring of x
        if len(y) < len(x):
            for p in range(len(x) - len(y) + 1):
                if x[p:p + len(y)] == y:
                    item = (x, x, y, p)
                    if item not in self._seen_overlaps:
                        self._seen_overlaps.add(item)
                        heapq.heappush(self._pending, (len(x), x, x, y, p))

    def _seed_overlaps(self):
        keys = list(self._rules)
        for x in keys:
            for y in keys:
                self._enqueue_overlaps(x, y)

    def ensure_completed(self, length: int):
        """Resolve all overlap ambiguities of total length <= length."""
        length = min(length, self.degree_cap)
        with self._lock:
            if length <= self._completed_to:
                return
            while self._pending and self._pending[0][0] <= length:
                _, w, x, y, p = heapq.heappop(self._pending)
                if x not in self._rules or y not in self._rules:
                    continue
                # reduction via x at position 0 vs via y at position p
                e1_terms: dict[Word, CyclotomicNumber] = {}
                for (rl, rc), c in self._rules[x].terms.items():
                    key = (rl + w[len(x):], rc)
                    e1_terms[key] = e1_terms[key] + c if key in e1_terms else c
                e2_terms: dict[Word, CyclotomicNumber] = {}
                for (rl, rc), c in self._rules[y].terms.items():
                    key = (w[:p] + rl + w[p + len(y):], rc)
                    e2_terms[key] = e2_terms[key] + c if key in e2_terms else c
                s = NCPoly(self, e1_terms) - NCPoly(self, e2_terms)
                nf: dict[Word, CyclotomicNumber] = {}
                for (letters, cent), coeff in s.terms.items():
                    for (rl, rc), rv in self._nf_letters(letters).items():
                        key = (rl, _cent_add(rc, cent))
                        acc = rv * coeff
                        nf[key] = nf[key] + acc if key in nf else acc
                nf = {k: c for k, c in nf.items() if not c.is_zero()}
                if not nf:
                    continue
                self._add_completion_rule(nf)
            self._completed_to = length

    def _add_completion_rule(self, nf: dict[Word, CyclotomicNumber]):
        top = max(nf, key=_term_key)
        top_letters, top_cent = top
        same_letters = [w for w in nf if w[0] == top_letters]
        assert len(same_letters) == 1, \
            f"ambiguous leading word {top_letters} in completion"
        assert top_cent == _ZCENT, \
            f"completion rule with central leading term {top}"
        coeff = nf[top]
        rhs = NCPoly(self, {w: c for w, c in nf.items() if w != top}).scale(-coeff.inv())
        self._install_rule(top_letters, rhs)
        self.completion_added.append(top_letters)
        for other in list(self._rules):
            self._enqueue_overlaps(top_letters, other)
            if other != top_letters:
                self._enqueue_overlaps(other, top_letters)

    # -- derived elements -----------------------------------------------------------

    def cheb_image(self, name: str, n: int) -> NCPoly:
        """T_n applied to a generator, as a plain polynomial in that letter."""
        g = self.generator(name)
        out = self.scalar(0)
        acc = self.one
        for c in cheb_poly(n):
            if c:
                out = out + acc.scale(self.ctx.scalar(c))
            acc = acc * g
        return out

    # -- census and the independent quotient oracle ------------------------------------

    def basis_census(self, max_degree: int) -> "CensusReport":
        """Count normal words by direct pattern-matching against the completed
        rules: the capped PBW count (exponents below dbar, no central part)
        and, for diagnostics, all normal letter words of length <= max_degree."""
        dbar = self.ctx.dbar
        self.ensure_completed(max(dbar + 2, max_degree + 1))
        capped = 0
        for i in range(dbar):
            for j in range(dbar):
                for k in range(dbar):
                    w = ("A",) * i + ("B",) * j + ("C",) * k
                    if self.is_normal(w):
                        capped += 1
                        assert i * j * k == 0, w
                    else:
                        assert i * j * k != 0, w
        le_n = 0
        for i in range(max_degree + 1):
            for j in range(max_degree + 1 - i):
                for k in range(max_degree + 1 - i - j):
                    w = ("A",) * i + ("B",) * j + ("C",) * k
                    if self.is_normal(w):
                        le_n += 1
        return CensusReport(self.ctx.d, capped, le_n, tuple(self.completion_added))

    def relation_ideal_generators(self) -> list[NCPoly]:
        """The nine commutators [central combination, generator] in the free
        algebra on A, B, C alone."""
        out = []
        for name in ("alpha", "beta", "gamma"):
            e = self.defining_element(name)
            for g in (self.A, self.B, self.C):
                out.append(e * g - g * e)
        return out

    def graded_quotient_dimension(self, max_degree: int) -> int:
        """Dimension of the span of words of length <= max_degree in the
        quotient of the free algebra on A, B, C by the relation ideal, computed
        by exact Gaussian elimination.  Independent of the rewriting engine."""
        words: list[tuple[str, ...]] = []

        def extend(prefix: tuple[str, ...]):
            words.append(prefix)
            if len(prefix) < max_degree:
                for g in GENERATORS:
                    extend(prefix + (g,))

        extend(())
        index = {w: i for i, w in enumerate(words)}
        rows: list[dict[int, CyclotomicNumber]] = []
        rels = self.relation_ideal_generators()
        for rel in rels:
            deg_r = rel.max_letter_length()
            pad = max_degree - deg_r
            for u in words:
                if len(u) > pad:
                    continue
                for v in words:
                    if len(u) + len(v) > pad:
                        continue
                    row: dict[int, CyclotomicNumber] = {}
                    for (rl, rc), c in rel.terms.items():
                        assert rc == _ZCENT
                        col = index[u + rl + v]
                        row[col] = row[col] + c if col in row else c
                    rows.append({k: c for k, c in row.items() if not c.is_zero()})
        rank = _sparse_rank(rows)
        return len(words) - rank

    def pbw_filtered_count(self, max_degree: int) -> int:
        """Number of PBW monomials of filtration degree <= max_degree, where
        generators weigh 1, the central combinations weigh 2 and the Casimir
        weighs 3."""
        count = 0
        for l in range(max_degree // 3 + 1):
            for rst in range((max_degree - 3 * l) // 2 + 1):
                # rst = r+s+t; number of (r,s,t) compositions
                comps = (rst + 1) * (rst + 2) // 2
                rem = max_degree - 3 * l - 2 * rst
                letters = 0
                for i in range(rem + 1):
                    for j in range(rem + 1 - i):
                        for k in range(rem + 1 - i - j):
                            if i * j * k == 0:
                                letters += 1
                count += comps * letters
        return count

    # -- parsing / printing --------------------------------------------------------

    def parse(self, text: str) -> NCPoly:
        out: dict[Word, CyclotomicNumber] = {}
        for coeff, seq in parse_terms(text, self.ctx):
            letters = tuple(ch for ch in seq if ch in GENERATORS)
            cent = tuple(sum(1 for ch in seq if ch == c) for c in CENTRALS)
            w = (letters, cent)  # type: ignore[assignment]
            out[w] = out[w] + coeff if w in out else coeff
        return NCPoly(self, out)

    def print(self, p: NCPoly) -> str:
        if not p.terms:
            return "0"
        parts: list[str] = []
        for (letters, cent) in sorted(p.terms, key=_term_key):
            coeff = p.terms[(letters, cent)]
            factors: list[str] = []
            run_start = 0
            k = 0
            while k < len(letters):
                j = k
                while j < len(letters) and letters[j] == letters[k]:
                    j += 1
                n = j - k
                factors.append(letters[k] if n == 1 else f"{letters[k]}^{n}")
                k = j
            for sym, e in zip(CENTRALS, cent):
                if e:
                    factors.append(sym if e == 1 else f"{sym}^{e}")
            body = "*".join(factors)
            if coeff == 1 and factors:
                text = body
            elif coeff == -1 and factors:
                text = "-" + body
            else:
                cs = print_qexpr(coeff)
                if not factors:
                    text = cs if not parts else "(" + cs + ")"
                elif sum(1 for c0 in coeff.coeffs if c0) == 1:
                    text = cs + "*" + body
                else:
                    text = "(" + cs + ")*" + body
            if parts and not text.startswith("-"):
                parts.append("+" + text)
            else:
                parts.append(text)
        return "".join(parts)


class CensusReport:
    """Normal-word counts plus the rules completion had to add."""

    def __init__(self, d: int, capped: int, normal_words: int,
                 added: tuple[tuple[str, ...], ...]):
        self.d = d
        self.capped_pbw_count = capped
        self.normal_words = normal_words
        self.completion_rules_added = added

    def __repr__(self):  # pragma: no cover
        return (f"CensusReport(d={self.d}, capped={self.capped_pbw_count}, "
                f"normal<=N={self.normal_words}, added={len(self.completion_rules_added)})")


def _sparse_rank(rows: list[dict[int, CyclotomicNumber]]) -> int:
    """Rank over Q(q) by elimination with first-nonzero pivoting."""
    pivots: dict[int, dict[int, CyclotomicNumber]] = {}
    for row in rows:
        row = dict(row)
        while row:
            col = min(row)
            if col in pivots:
                factor = row[col]
                for c2, v2 in pivots[col].items():
                    if c2 in row:
                        row[c2] = row[c2] - factor * v2
                        if row[c2].is_zero():
                            del row[c2]
                    else:
                        row[c2] = -factor * v2
            else:
                inv = row[col].inv()
                pivots[col] = {c: v * inv for c, v in row.items()}
                break
    return len(pivots)


@lru_cache(maxsize=None)
def make_algebra(d: int, degree_cap: int = 24) -> NCAlgebra:
    return NCAlgebra(make_field(d), degree_cap=degree_cap)
