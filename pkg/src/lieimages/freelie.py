"""Free Lie and free associative algebras over Q.

Lie monomials are kept as raw bracket trees; two Lie polynomials are equal
exactly when their expansions into the free associative algebra agree.
Variables are positive integers ``i`` (for ``x_i``); ``Y`` (= 0) is the
distinguished variable used by the ad-form conversions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator, Mapping

from . import linalg
from .errors import BadDegreeInY, NotMultilinear

Y = 0


def var_name(v: int) -> str:
    return "y" if v == Y else f"x{v}"


# --------------------------------------------------------------------------
# Lie terms


class LieTerm:
    __slots__ = ()

    degree: int

    def leaves(self) -> Iterator[int]:
        raise NotImplementedError

    def count(self, v: int) -> int:
        return sum(1 for leaf in self.leaves() if leaf == v)

    def is_multilinear_in(self, variables: Iterable[int]) -> bool:
        return sorted(self.leaves()) == sorted(variables)


class Leaf(LieTerm):
    __slots__ = ("var", "degree", "_hash")

    def __init__(self, var: int):
        if var < 0:
            raise ValueError(f"variable index must be >= 0, got {var}")
        self.var = var
        self.degree = 1
        self._hash = hash(("leaf", var))

    def leaves(self):
        yield self.var

    def __eq__(self, other):
        return isinstance(other, Leaf) and other.var == self.var

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return var_name(self.var)


class Bracket(LieTerm):
    __slots__ = ("left", "right", "degree", "_hash")

    def __init__(self, left: LieTerm, right: LieTerm):
        self.left = left
        self.right = right
        self.degree = left.degree + right.degree
        self._hash = hash((left._hash, right._hash))

    def leaves(self):
        yield from self.left.leaves()
        yield from self.right.leaves()

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, Bracket) and other._hash == self._hash
                and other.left == self.left and other.right == self.right)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"[{self.left!r},{self.right!r}]"


def right_normed(*terms: LieTerm) -> LieTerm:
    """[t1,[t2,...[t_{k-1},t_k]]]."""
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Bracket(t, out)
    return out


# --------------------------------------------------------------------------
# Polynomials


def _clean(terms: Mapping) -> dict:
    return {k: v for k, v in terms.items() if v}


def _fmt_sum(items) -> str:
    if not items:
        return "0"
    parts = []
    for i, (body, c) in enumerate(items):
        a = abs(c)
        s = body if a == 1 else f"{a}*{body}"
        if i == 0:
            parts.append(f"-{s}" if c < 0 else s)
        else:
            parts.append(f" {'-' if c < 0 else '+'} {s}")
    return "".join(parts)


class _LinearCombination:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = _clean({k: Fraction(v) for k, v in (terms or {}).items()})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return type(self)(out)

    def __neg__(self):
        return type(self)({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "_LinearCombination":
        c = Fraction(c)
        return type(self)({k: c * v for k, v in self.terms.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())


class LiePolynomial(_LinearCombination):
    """Finite Q-combination of Lie terms (no zero coefficients stored)."""

    @classmethod
    def var(cls, i: int) -> "LiePolynomial":
        return cls({Leaf(i): 1})

    @classmethod
    def of(cls, term: LieTerm, coeff=1) -> "LiePolynomial":
        return cls({term: coeff})

    def __eq__(self, other):
        # decided through the faithful associative expansion
        if not isinstance(other, LiePolynomial):
            return NotImplemented
        return expand(self) == expand(other)

    __hash__ = None

    def variables(self) -> set[int]:
        return {v for t in self.terms for v in t.leaves()}

    def degrees(self) -> set[int]:
        return {t.degree for t in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def __repr__(self):
        return _fmt_sum([(repr(t), c) for t, c in self.terms.items()])


class AssocPolynomial(_LinearCombination):
    """Finite Q-combination of words (tuples of variable indices)."""

    @classmethod
    def word(cls, *letters: int, coeff=1) -> "AssocPolynomial":
        return cls({tuple(letters): coeff})

    @classmethod
    def one(cls) -> "AssocPolynomial":
        return cls({(): 1})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return AssocPolynomial(out)

    def __pow__(self, e: int):
        out = AssocPolynomial.one()
        for _ in range(e):
            out = out * self
        return out

    def commutator(self, other: "AssocPolynomial") -> "AssocPolynomial":
        return self * other - other * self

    def __eq__(self, other):
        if not isinstance(other, AssocPolynomial):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def variables(self) -> set[int]:
        return {v for w in self.terms for v in w}

    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    def is_multilinear(self, k: int) -> bool:
        target = tuple(range(1, k + 1))
        return all(tuple(sorted(w)) == target for w in self.terms)

    def substitute_equal(self, i: int, j: int) -> "AssocPolynomial":
        """Specialize x_j := x_i."""
        out: dict = {}
        for w, c in self.terms.items():
            w2 = tuple(i if v == j else v for v in w)
            out[w2] = out.get(w2, 0) + c
        return AssocPolynomial(out)

    def __repr__(self):
        return _fmt_sum([("*".join(var_name(v) for v in w) if w else "1", c)
                         for w, c in sorted(self.terms.items())])


# --------------------------------------------------------------------------
# Operations


def bracket_of(f: LiePolynomial, g: LiePolynomial) -> LiePolynomial:
    out: dict = {}
    for t1, c1 in f.terms.items():
        for t2, c2 in g.terms.items():
            t = Bracket(t1, t2)
            out[t] = out.get(t, 0) + c1 * c2
    return LiePolynomial(out)


@lru_cache(maxsize=65536)
def _expand_term(t: LieTerm) -> AssocPolynomial:
    if isinstance(t, Leaf):
        return AssocPolynomial.word(t.var)
    a = _expand_term(t.left)
    b = _expand_term(t.right)
    return a * b - b * a


def expand(f: LiePolynomial | LieTerm) -> AssocPolynomial:
    if isinstance(f, LieTerm):
        return _expand_term(f)
    out: dict = {}
    for t, c in f.terms.items():
        for w, d in _expand_term(t).terms.items():
            out[w] = out.get(w, 0) + c * d
    return AssocPolynomial(out)


def standard_polynomial(k: int) -> AssocPolynomial:
    if k < 1:
        raise ValueError("k must be >= 1")
    out = {}
    for perm in itertools.permutations(range(1, k + 1)):
        out[perm] = _sign(perm)
    return AssocPolynomial(out)


def _sign(perm) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def multilinear_lie_basis(k: int) -> list[LieTerm]:
    """ad_{x_s(1)}...ad_{x_s(k-1)}(x_k) over permutations s of 1..k-1, in lex order."""
    if k < 1:
        raise ValueError("k must be >= 1")
    last = Leaf(k)
    return [right_normed(*(Leaf(i) for i in perm), last)
            for perm in itertools.permutations(range(1, k))]


def multilinear_rank(k: int) -> int:
    """Rank of the expansions of ``multilinear_lie_basis(k)`` over Q."""
    index = {w: i for i, w in enumerate(itertools.permutations(range(1, k + 1)))}
    return linalg.rank({index[w]: c for w, c in expand(t).terms.items()}
                       for t in multilinear_lie_basis(k))


def is_lie(p: AssocPolynomial, k: int) -> LiePolynomial | None:
    """Express a multilinear ``p`` in x_1..x_k as a Lie polynomial, if possible."""
    if not p.is_multilinear(k):
        raise NotMultilinear(f"polynomial is not multilinear in x1..x{k}")
    basis = multilinear_lie_basis(k)
    words = list(itertools.permutations(range(1, k + 1)))
    windex = {w: i for i, w in enumerate(words)}
    rows: list[dict] = [{} for _ in words]
    for j, t in enumerate(basis):
        for w, c in expand(t).terms.items():
            rows[windex[w]][j] = c
    rhs = [p.terms.get(w, 0) for w in words]
    sol = linalg.solve(rows, rhs, len(basis))
    if sol is None:
        return None
    witness = LiePolynomial({t: c for t, c in zip(basis, sol) if c})
    assert expand(witness) == p
    return witness


# --------------------------------------------------------------------------
# ad-forms


@dataclass(frozen=True)
class AdChain:
    """coefficient * ad_{chain[0]} ... ad_{chain[-1]} (target)."""

    chain: tuple[LieTerm, ...]
    target: LieTerm
    coefficient: Fraction = Fraction(1)

    def __repr__(self):
        ads = "".join(f"ad_{a!r} " for a in self.chain)
        return f"{self.coefficient}*{ads}({self.target!r})"


AdPolynomial = list


def _ad_term(h: LieTerm, y: int) -> list[tuple[int, tuple[LieTerm, ...]]]:
    if isinstance(h, Leaf):
        return [(1, ())]
    l_has = h.left.count(y)
    if l_has:
        return [(-s, (h.right,) + ch) for s, ch in _ad_term(h.left, y)]
    return [(s, (h.left,) + ch) for s, ch in _ad_term(h.right, y)]


def lie_to_ad(f: LiePolynomial, y: int = Y) -> AdPolynomial:
    """Rewrite ``f`` as ad-chains applied to ``y``; each monomial must have y-degree 1."""
    out = []
    for t, c in f.terms.items():
        if t.count(y) != 1:
            raise BadDegreeInY(f"{var_name(y)} occurs {t.count(y)} times in {t!r}")
        for s, ch in _ad_term(t, y):
            out.append(AdChain(ch, Leaf(y), Fraction(c * s)))
    return out


def expand_ad_arguments(chains: AdPolynomial) -> AdPolynomial:
    """Rewrite bracket arguments via ad_[u,v] = ad_u ad_v - ad_v ad_u until all are letters."""
    out = []
    todo = list(chains)
    while todo:
        c = todo.pop(0)
        for pos, a in enumerate(c.chain):
            if isinstance(a, Bracket):
                pre, post = c.chain[:pos], c.chain[pos + 1:]
                todo.insert(0, AdChain(pre + (a.right, a.left) + post, c.target, -c.coefficient))
                todo.insert(0, AdChain(pre + (a.left, a.right) + post, c.target, c.coefficient))
                break
        else:
            out.append(c)
    return out


def ad_to_lie(c: AdChain) -> LieTerm:
    return right_normed(*c.chain, c.target)


def ad_polynomial_to_lie(chains: AdPolynomial) -> LiePolynomial:
    out = LiePolynomial()
    for c in chains:
        out = out + LiePolynomial.of(ad_to_lie(c), c.coefficient)
    return out


def ad_of_assoc(p: AssocPolynomial, target: int) -> LiePolynomial:
    """p(ad_{x_1},...,ad_{x_k})(x_target) as a Lie polynomial."""
    out: dict = {}
    leaf = Leaf(target)
    for w, c in p.terms.items():
        t = right_normed(*(Leaf(v) for v in w), leaf)
        out[t] = out.get(t, 0) + c
    return LiePolynomial(out)


def lie_dimension_table(max_k: int) -> dict[int, tuple[int, int]]:
    """k -> (computed rank, (k-1)!)."""
    return {k: (multilinear_rank(k), factorial(k - 1)) for k in range(1, max_k + 1)}
