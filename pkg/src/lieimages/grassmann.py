"""Grassmann (exterior) algebra on N generators over Q.

Basis monomials e_S are indexed by bitmasks: bit i-1 set means e_i is a
factor, written in increasing order.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import GeneratorCountMismatch, InvariantViolation, NotMultilinear, UnassignedVariable
from .freelie import AssocPolynomial


def monomial_sign(s: int, t: int) -> int:
    """Sign of e_S e_T = +-e_{S|T}; 0 if the supports overlap."""
    if s & t:
        return 0
    inversions = 0
    while t:
        low = t & -t
        # generators of S above this generator of T must be moved past it
        inversions += bin(s & ~((low << 1) - 1)).count("1")
        t ^= low
    return -1 if inversions & 1 else 1


def mask_to_indices(mask: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


class GrassmannElement:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[int, Fraction | int] | None = None):
        self.n = n
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}
        if any(m >> n for m in self.terms):
            raise GeneratorCountMismatch(f"monomial outside G_{n}")

    @classmethod
    def generator(cls, i: int, n: int) -> "GrassmannElement":
        if not 1 <= i <= n:
            raise GeneratorCountMismatch(f"e{i} is not a generator of G_{n}")
        return cls(n, {1 << (i - 1): 1})

    @classmethod
    def monomial(cls, mask: int, n: int, coeff=1) -> "GrassmannElement":
        return cls(n, {mask: coeff})

    @classmethod
    def scalar(cls, c, n: int) -> "GrassmannElement":
        return cls(n, {0: c})

    def _check(self, other):
        if self.n != other.n:
            raise GeneratorCountMismatch(f"G_{self.n} vs G_{other.n}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return GrassmannElement(self.n, out)

    def __neg__(self):
        return GrassmannElement(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GrassmannElement(self.n, {m: c * other for m, c in self.terms.items()})
        return g_multiply(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, GrassmannElement) and self.n == other.n
                and self.terms == other.terms)

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def is_odd(self) -> bool:
        return all(bin(m).count("1") % 2 for m in self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            name = "e_{" + ",".join(map(str, mask_to_indices(m))) + "}" if m else "1"
            parts.append(f"{c}*{name}")
        return " + ".join(parts)


def g_multiply(u: GrassmannElement, v: GrassmannElement) -> GrassmannElement:
    u._check(v)
    out: dict = {}
    for s, a in u.terms.items():
        for t, b in v.terms.items():
            sign = monomial_sign(s, t)
            if sign:
                out[s | t] = out.get(s | t, 0) + sign * a * b
    return GrassmannElement(u.n, out)


def evaluate_on_grassmann(p: AssocPolynomial,
                          assignment: Mapping[int, GrassmannElement]) -> GrassmannElement:
    missing = p.variables() - set(assignment)
    if missing:
        raise UnassignedVariable(f"no value for x{min(missing)}")
    if not assignment:
        raise UnassignedVariable("empty assignment")
    n = next(iter(assignment.values())).n
    one = GrassmannElement.scalar(1, n)
    total = GrassmannElement(n)
    for w, c in p.terms.items():
        val = one
        for v in w:
            val = g_multiply(val, assignment[v])
            if not val:
                break
        total = total + val * c
    return total


def _parity_value(p: AssocPolynomial, odd: tuple[bool, ...]) -> int:
    """Coefficient of p on disjoint monomials whose degree parities are ``odd``.

    Disjoint monomials e_S, e_T satisfy e_S e_T = (-1)^{|S||T|} e_T e_S, so each
    word contributes its coefficient times the sign of sorting its odd letters.
    """
    total = 0
    for w, c in p.terms.items():
        inv = sum(1 for i, j in itertools.combinations(range(len(w)), 2)
                  if w[i] > w[j] and odd[w[i] - 1] and odd[w[j] - 1])
        total += -c if inv % 2 else c
    return total


def _first_witness(k: int, n: int, bad: list[tuple[bool, ...]]):
    """Lexicographically first tuple of disjoint masks whose parity pattern is in ``bad``."""
    full = (1 << n) - 1

    def feasible(prefix, free):
        i = len(prefix)
        return any(all(bool(bin(m).count("1") % 2) == pat[j] for j, m in enumerate(prefix))
                   and bin(free).count("1") >= sum(pat[i:])
                   for pat in bad)

    def rec(prefix, used):
        if len(prefix) == k:
            return tuple(prefix)
        free = full & ~used
        for m in range(full + 1):
            if m & used:
                continue
            prefix.append(m)
            if feasible(prefix, free & ~m):
                return rec(prefix, used | m)
            prefix.pop()
        return None

    return rec([], 0)


def _eval_masks(p: AssocPolynomial, masks: tuple[int, ...]) -> tuple[int, int]:
    """Value of p on the monomials ``masks`` (all disjoint): (coefficient, result mask)."""
    total = 0
    union = 0
    for m in masks:
        union |= m
    for w, c in p.terms.items():
        acc, sign = 0, 1
        for v in w:
            m = masks[v - 1]
            sign *= monomial_sign(acc, m)
            acc |= m
        total += sign * c
    return total, union


@dataclass
class VanishingResult:
    vanishes: bool
    witness: tuple[int, ...] | None = None   # masks assigned to x_1..x_k
    value: GrassmannElement | None = None

    def __bool__(self):
        return self.vanishes


def vanishes_on_grassmann(p: AssocPolynomial, n: int, k: int | None = None) -> VanishingResult:
    """Check a multilinear ``p`` on every tuple of basis monomials of G_n.

    Multilinearity makes monomial tuples sufficient, and tuples with
    overlapping supports give 0 in every word.  On disjoint monomials the value
    depends only on which arguments have odd degree, so the 2^k parity
    patterns are checked instead of every tuple.  The witness returned is the
    lexicographically first nonvanishing tuple.
    """
    if k is None:
        k = max(p.variables(), default=0)
    if not p.is_multilinear(k):
        raise NotMultilinear(f"polynomial is not multilinear in x1..x{k}")
    if n < k:
        raise GeneratorCountMismatch(f"need N >= {k}, got {n}")
    bad = [odd for odd in itertools.product((False, True), repeat=k) if _parity_value(p, odd)]
    if not bad:
        return VanishingResult(True)
    masks = _first_witness(k, n, bad)
    c, union = _eval_masks(p, masks)
    if not c:
        raise InvariantViolation(f"parity reduction predicted a nonzero value at {masks}")
    return VanishingResult(False, masks, GrassmannElement.monomial(union, n, c))


class Verdict(enum.Enum):
    NOT_LIE = "NotLie"
    INCONCLUSIVE = "Inconclusive"


def grassmann_lie_obstruction(p: AssocPolynomial, k: int, n: int | None = None) -> Verdict:
    """Homogeneous Lie polynomials of degree >= 3 are identities of G."""
    if k < 3:
        raise ValueError("the obstruction applies to degree >= 3")
    res = vanishes_on_grassmann(p, k if n is None else n, k)
    return Verdict.INCONCLUSIVE if res.vanishes else Verdict.NOT_LIE


def cohn_value(k: int) -> GrassmannElement:
    """s_k(e_1, ..., e_k) in G_k."""
    from .freelie import standard_polynomial

    gens = {i: GrassmannElement.generator(i, k) for i in range(1, k + 1)}
    return evaluate_on_grassmann(standard_polynomial(k), gens)


def random_element(rng, n: int, terms: int = 4, odd: bool = False) -> GrassmannElement:
    """Random element with small integer coefficients (odd-degree support if ``odd``)."""
    masks = [m for m in range(1 << n) if not odd or bin(m).count("1") % 2]
    return GrassmannElement(n, {rng.choice(masks): rng.randint(-5, 5) for _ in range(terms)})

