"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := [rational ['*']] factor ('*'? factor)*  |  rational
    factor := atom ('^' nat)*
    atom   := 'x' int | 'y' | 's' int | '[' expr ',' expr ']' | '(' expr ')'

Square brackets are Lie brackets, ``s<k>`` is the standard polynomial and
juxtaposition is associative multiplication.  Signs fold into the term
coefficient.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .errors import ParseError
from .freelie import (Y, AssocPolynomial, LiePolynomial, bracket_of, standard_polynomial,
                      var_name)


@dataclass(frozen=True)
class Var:
    index: int

    def __str__(self):
        return var_name(self.index)


@dataclass(frozen=True)
class Std:
    k: int

    def __str__(self):
        return f"s{self.k}"


@dataclass(frozen=True)
class LieBracket:
    left: "Sum"
    right: "Sum"

    def __str__(self):
        return f"[{self.left},{self.right}]"


@dataclass(frozen=True)
class Group:
    inner: "Sum"

    def __str__(self):
        return f"({self.inner})"


@dataclass(frozen=True)
class Power:
    base: object
    exponent: int

    def __str__(self):
        return f"{self.base}^{self.exponent}"


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    factors: tuple = ()

    def body(self) -> str:
        a = abs(self.coeff)
        if not self.factors:
            return str(a)
        prod = "*".join(map(str, self.factors))
        return prod if a == 1 else f"{a}*{prod}"


@dataclass(frozen=True)
class Sum:
    terms: tuple

    def __str__(self):
        out = []
        for i, t in enumerate(self.terms):
            neg = t.coeff < 0
            if i == 0:
                out.append(("-" if neg else "") + t.body())
            else:
                out.append((" - " if neg else " + ") + t.body())
        return "".join(out)

    @property
    def is_pure(self) -> bool:
        return is_pure(self)

    def to_assoc(self) -> AssocPolynomial:
        return to_assoc(self)

    def to_lie(self) -> LiePolynomial:
        return to_lie(self)


Expression = Sum


# --------------------------------------------------------------------------
# Semantics


def is_pure(node) -> bool:
    """Only variables, Lie brackets and scalar combinations."""
    if isinstance(node, Sum):
        return all(is_pure(t) for t in node.terms)
    if isinstance(node, Term):
        return len(node.factors) == 1 and is_pure(node.factors[0])
    if isinstance(node, Var):
        return True
    if isinstance(node, LieBracket):
        return is_pure(node.left) and is_pure(node.right)
    if isinstance(node, Group):
        return is_pure(node.inner)
    return False


def to_assoc(node) -> AssocPolynomial:
    if isinstance(node, Sum):
        return reduce(lambda a, b: a + b, (to_assoc(t) for t in node.terms), AssocPolynomial())
    if isinstance(node, Term):
        prod = AssocPolynomial.one()
        for f in node.factors:
            prod = prod * to_assoc(f)
        return prod.scale(node.coeff)
    if isinstance(node, Var):
        return AssocPolynomial.word(node.index)
    if isinstance(node, Std):
        return standard_polynomial(node.k)
    if isinstance(node, LieBracket):
        return to_assoc(node.left).commutator(to_assoc(node.right))
    if isinstance(node, Group):
        return to_assoc(node.inner)
    if isinstance(node, Power):
        return to_assoc(node.base) ** node.exponent
    raise TypeError(node)


def to_lie(node) -> LiePolynomial:
    if not is_pure(node):
        raise ValueError(f"{node} is not a syntactic Lie expression")
    if isinstance(node, Sum):
        return reduce(lambda a, b: a + b, (to_lie(t) for t in node.terms), LiePolynomial())
    if isinstance(node, Term):
        return to_lie(node.factors[0]).scale(node.coeff)
    if isinstance(node, Var):
        return LiePolynomial.var(node.index)
    if isinstance(node, LieBracket):
        return bracket_of(to_lie(node.left), to_lie(node.right))
    return to_lie(node.inner)


def to_polynomial(node) -> LiePolynomial | AssocPolynomial:
    """Lie polynomial for pure expressions, associative polynomial otherwise."""
    return to_lie(node) if is_pure(node) else to_assoc(node)


# --------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, text: str):
        self.s = text
        self.i = 0

    def _ws(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self._ws()
        return self.s[self.i] if self.i < len(self.s) else ""

    def eat(self, ch: str):
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}, found {self.peek() or 'end of input'!r}", self.i)
        self.i += 1

    def integer(self) -> int:
        self._ws()
        start = self.i
        while self.i < len(self.s) and self.s[self.i].isdigit():
            self.i += 1
        if start == self.i:
            raise ParseError("expected integer", start)
        return int(self.s[start:self.i])

    def expr(self) -> Sum:
        terms = []
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.i += 1
        terms.append(self.term(sign))
        while self.peek() in ("+", "-") and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.i += 1
            terms.append(self.term(sign))
        return Sum(tuple(terms))

    def _starts_factor(self) -> bool:
        c = self.peek()
        return c != "" and c in "xys[("

    def term(self, sign: int) -> Term:
        coeff = Fraction(sign)
        if self.peek().isdigit():
            num = self.integer()
            den = 1
            if self.peek() == "/":
                self.i += 1
                den = self.integer()
                if den == 0:
                    raise ParseError("zero denominator", self.i)
            coeff *= Fraction(num, den)
            if self.peek() == "*":
                self.i += 1
                if not self._starts_factor():
                    raise ParseError("expected factor after '*'", self.i)
            if not self._starts_factor():
                return Term(coeff, ())
        factors = [self.factor()]
        while True:
            if self.peek() == "*":
                self.i += 1
                factors.append(self.factor())
            elif self._starts_factor():
                factors.append(self.factor())
            else:
                break
        return Term(coeff, tuple(factors))

    def factor(self):
        node = self.atom()
        while self.peek() == "^":
            self.i += 1
            node = Power(node, self.integer())
        return node

    def atom(self):
        c = self.peek()
        pos = self.i
        if c == "x":
            self.i += 1
            if not self.s[self.i:self.i + 1].isdigit():
                raise ParseError("expected variable index after 'x'", self.i)
            k = self.integer()
            if k < 1:
                raise ParseError("variable indices start at 1", pos)
            return Var(k)
        if c == "y":
            self.i += 1
            return Var(Y)
        if c == "s":
            self.i += 1
            if not self.s[self.i:self.i + 1].isdigit():
                raise ParseError("expected degree after 's'", self.i)
            k = self.integer()
            if k < 1:
                raise ParseError("standard polynomial degree must be >= 1", pos)
            return Std(k)
        if c == "[":
            self.i += 1
            left = self.expr()
            self.eat(",")
            right = self.expr()
            self.eat("]")
            return LieBracket(left, right)
        if c == "(":
            self.i += 1
            inner = self.expr()
            self.eat(")")
            return Group(inner)
        raise ParseError(f"unexpected {c or 'end of input'!r}", pos)


def parse_expression(text: str) -> Sum:
    p = _Parser(text)
    e = p.expr()
    if p.peek():
        raise ParseError(f"unexpected {p.peek()!r}", p.i)
    return e


def parse_polynomial(text: str) -> LiePolynomial | AssocPolynomial:
    return to_polynomial(parse_expression(text))
