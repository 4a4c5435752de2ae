"""Textual grammar for field scalars and algebra words.

Scalars are polynomials in q with rational coefficients, e.g.::

    q^2-q^-2        1/2*q+3       -(q+1)*q^-1

Words use the seven letters A B C W a b g: the three generators, the Casimir
element, and the three central defining elements.  A full term looks like
``(q^2-q^-2)*A*B*g``.  Parentheses may only enclose scalar subexpressions;
``/`` only forms rational literals like ``1/2``.  Printing is canonical and
compact (no whitespace), and parse/print round-trips are lossless.

This module knows nothing about normal forms: parsing a word like ``B*A``
yields the free word BA untouched.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .cyclotomic import CyclotomicNumber, FieldContext
from .errors import ParseError

__all__ = ["parse_qexpr", "print_qexpr", "parse_terms", "WORD_LETTERS"]

#: letters admitted in words, in canonical print order
WORD_LETTERS = "ABCWabg"


class _Tok(NamedTuple):
    kind: str  # NUMBER NAME OP END
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Tok("NUMBER", text[i:j], i))
            i = j
            continue
        if c == "q" or c in WORD_LETTERS:
            toks.append(_Tok("NAME", c, i))
            i += 1
            continue
        if c in "+-*^()/":
            toks.append(_Tok("OP", c, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    toks.append(_Tok("END", "", n))
    return toks


class _Parser:
    """Recursive descent over the grammar above.

    expr   := term (('+'|'-') term)*
    term   := ('-'|'+')* factor ('*' factor)*
    factor := rational | 'q' power? | letter power? | '(' expr ')'
    power  := '^' '-'? digits     (letter exponents must be nonnegative)
    """

    def __init__(self, text: str, ctx: FieldContext, scalar_only: bool):
        self.toks = _tokenize(text)
        self.k = 0
        self.ctx = ctx
        self.scalar_only = scalar_only

    def peek(self) -> _Tok:
        return self.toks[self.k]

    def take(self) -> _Tok:
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.take()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.pos)
        return t

    # each term is (coefficient, word letters in written order)
    def expr(self) -> list[tuple[CyclotomicNumber, tuple[str, ...]]]:
        terms = [self.term()]
        while self.peek().text in "+-" and self.peek().kind == "OP":
            op = self.take().text
            coeff, word = self.term()
            terms.append((-coeff if op == "-" else coeff, word))
        return terms

    def term(self) -> tuple[CyclotomicNumber, tuple[str, ...]]:
        sign = 1
        while self.peek().text in "+-":
            if self.take().text == "-":
                sign = -sign
        coeff, word = self.factor()
        while self.peek().text == "*":
            self.take()
            c2, w2 = self.factor()
            coeff = coeff * c2
            word = word + w2
        return (coeff * sign, word)

    def factor(self) -> tuple[CyclotomicNumber, tuple[str, ...]]:
        t = self.take()
        if t.kind == "NUMBER":
            num = int(t.text)
            if self.peek().text == "/":
                self.take()
                den_tok = self.take()
                if den_tok.kind != "NUMBER":
                    raise ParseError("expected a denominator after '/'", den_tok.pos)
                den = int(den_tok.text)
                if den == 0:
                    raise ParseError("zero denominator", den_tok.pos)
                return (self.ctx.scalar(Fraction(num, den)), ())
            return (self.ctx.scalar(num), ())
        if t.kind == "NAME" and t.text == "q":
            exp = self._power(allow_negative=True, default=1)
            return (self.ctx.q_power(exp), ())
        if t.kind == "NAME":
            if self.scalar_only:
                raise ParseError(f"letter {t.text!r} not allowed in a scalar expression", t.pos)
            exp = self._power(allow_negative=False, default=1)
            return (self.ctx.one, (t.text,) * exp)
        if t.text == "(":
            # parenthesized groups are scalar-valued
            inner = _Parser.__new__(_Parser)
            inner.toks, inner.k, inner.ctx, inner.scalar_only = self.toks, self.k, self.ctx, True
            terms = inner.expr()
            self.k = inner.k
            self.expect(")")
            total = self.ctx.zero
            for c, w in terms:
                assert not w
                total = total + c
            exp = self._power(allow_negative=True, default=1)
            return (total ** exp if exp != 1 else total, ())
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)

    def _power(self, allow_negative: bool, default: int) -> int:
        if self.peek().text != "^":
            return default
        self.take()
        sign = 1
        if self.peek().text == "-":
            if not allow_negative:
                raise ParseError("negative exponent not allowed on a word letter",
                                 self.peek().pos)
            self.take()
            sign = -1
        t = self.take()
        if t.kind != "NUMBER":
            raise ParseError("expected an integer exponent after '^'", t.pos)
        return sign * int(t.text)

    def finish(self):
        t = self.peek()
        if t.kind != "END":
            raise ParseError(f"trailing input {t.text!r}", t.pos)


def parse_qexpr(text: str, ctx: FieldContext) -> CyclotomicNumber:
    """Parse a scalar expression into Q(q)."""
    p = _Parser(text, ctx, scalar_only=True)
    terms = p.expr()
    p.finish()
    total = ctx.zero
    for c, _ in terms:
        total = total + c
    return total


def parse_terms(text: str, ctx: FieldContext) -> list[tuple[CyclotomicNumber, tuple[str, ...]]]:
    """Parse a word expression into raw (coefficient, letters) terms, keeping
    the written letter order.  Consumed by the algebra layer."""
    p = _Parser(text, ctx, scalar_only=False)
    terms = p.expr()
    p.finish()
    return terms


# ---------------------------------------------------------------------------
# printing

def _print_rational(f: Fraction) -> str:
    return str(f)


def _print_monomial(coeff: Fraction, k: int) -> str:
    """coeff * q^k with the usual cosmetic collapses (k=0, coeff +-1)."""
    if k == 0:
        return _print_rational(coeff)
    qpart = "q" if k == 1 else f"q^{k}"
    if coeff == 1:
        return qpart
    if coeff == -1:
        return "-" + qpart
    return f"{_print_rational(coeff)}*{qpart}"


def print_qexpr(x: CyclotomicNumber) -> str:
    """Canonical compact form: monomials by ascending power of q."""
    parts: list[str] = []
    for k, c in enumerate(x.coeffs):
        if not c:
            continue
        mono = _print_monomial(c, k)
        if parts and not mono.startswith("-"):
            parts.append("+" + mono)
        else:
            parts.append(mono)
    return "".join(parts) if parts else "0"


def print_qexpr_factor(x: CyclotomicNumber) -> str:
    """Like print_qexpr but parenthesized whenever needed as a product factor."""
    s = print_qexpr(x)
    nterms = sum(1 for c in x.coeffs if c)
    if nterms > 1 or s.startswith("-"):
        return f"({s})"
    return s
