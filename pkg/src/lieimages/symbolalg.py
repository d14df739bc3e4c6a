"""The generic symbol algebra of degree n and the search for Lie identities.

The algebra has basis a^i b^j (0 <= i, j < n) over Q(rho)[alpha, beta] with
a^n = alpha, b^n = beta and b a = rho a b, so that

    a^i b^j * a^k b^l = rho^(j k) a^(i+k) b^(j+l)

and [a^i b^j, a^k b^l] = (rho^(j k) - rho^(i l)) a^(i+k) b^(j+l).  Since rho^-1
is also a primitive n-th root of unity this is the same algebra as the one
presented by a b = rho b a.  alpha and beta stay formal.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from . import linalg
from .errors import CapacityError, DegreeMismatch, InvariantViolation, NotMultilinear
from .freelie import Bracket, Leaf, LiePolynomial, LieTerm, multilinear_lie_basis
from .matrices import int_bracket, is_zero_matrix, random_trace_zero_rational

DEFAULT_TUPLE_BUDGET = 100_000


# --------------------------------------------------------------------------
# Q(rho)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]          # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _exact_div(num, cyclotomic_polynomial(d))
    return tuple(num)


def _exact_div(num: list[int], den: Sequence[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    q = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] // den[-1]
        q[i - dd] = c
        for j, d in enumerate(den):
            num[i - dd + j] -= c * d
    assert not any(num), "non-exact cyclotomic division"
    return q


class Cyclotomic:
    """Element of Q(rho), rho a primitive n-th root of unity, in the power basis."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Iterable = ()):
        phi = cyclotomic_polynomial(n)
        deg = len(phi) - 1
        c = [Fraction(x) for x in coeffs]
        for i in range(len(c) - 1, deg - 1, -1):
            lead = c[i]
            if lead:
                for j, d in enumerate(phi):
                    c[i - deg + j] -= lead * d
        c = c[:deg] + [Fraction(0)] * (deg - len(c))
        self.n = n
        self.coeffs = tuple(c)

    @classmethod
    def rho_power(cls, n: int, e: int) -> "Cyclotomic":
        v = [0] * n
        v[e % n] = 1
        return cls(n, v)

    @classmethod
    def from_group_ring(cls, n: int, v: Sequence[int]) -> "Cyclotomic":
        """Image of sum v[e] x^e in Z[x]/(x^n - 1) under x -> rho."""
        return cls(n, v)

    def __add__(self, other):
        return Cyclotomic(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return Cyclotomic(self.n, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.n, [a * other for a in self.coeffs])
        prod = [Fraction(0)] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        return Cyclotomic(self.n, prod)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic(self.n, [other])
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        terms = [f"{c}*rho^{i}" if i else f"{c}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"


# --------------------------------------------------------------------------
# Symbol algebra elements

# key: (i, j, p, q) for rho-coefficient * alpha^p beta^q a^i b^j


class SymbolElement:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def basis(cls, n: int, i: int, j: int) -> "SymbolElement":
        return cls(n, {(i % n, j % n, i // n, j // n): Cyclotomic(n, [1])})

    @classmethod
    def a(cls, n):
        return cls.basis(n, 1, 0)

    @classmethod
    def b(cls, n):
        return cls.basis(n, 0, 1)

    @classmethod
    def scalar(cls, n: int, c=1, p: int = 0, q: int = 0) -> "SymbolElement":
        if not isinstance(c, Cyclotomic):
            c = Cyclotomic(n, [c])
        return cls(n, {(0, 0, p, q): c})

    def _check(self, other):
        if self.n != other.n:
            raise DegreeMismatch(f"degree {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return SymbolElement(self.n, out)

    def __neg__(self):
        return SymbolElement(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return SymbolElement(self.n, {k: v * other for k, v in self.terms.items()})
        return sym_multiply(self, other)

    def __eq__(self, other):
        return isinstance(other, SymbolElement) and self.n == other.n and self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, i: int, j: int) -> dict[tuple[int, int], Cyclotomic]:
        """(alpha, beta) exponent pair -> Q(rho) coefficient at a^i b^j."""
        return {(p, q): v for (a, b, p, q), v in self.terms.items() if (a, b) == (i, j)}

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j, p, q), v in sorted(self.terms.items()):
            parts.append(f"({v})*alpha^{p}*beta^{q}*a^{i}*b^{j}")
        return " + ".join(parts)


def sym_multiply(u: SymbolElement, v: SymbolElement) -> SymbolElement:
    u._check(v)
    n = u.n
    out: dict = {}
    for (i, j, p, q), c in u.terms.items():
        for (k, l, r, s), d in v.terms.items():
            coeff = c * d * Cyclotomic.rho_power(n, j * k)
            key = ((i + k) % n, (j + l) % n, p + r + (i + k) // n, q + s + (j + l) // n)
            out[key] = out[key] + coeff if key in out else coeff
    return SymbolElement(n, out)


def sym_bracket(u: SymbolElement, v: SymbolElement) -> SymbolElement:
    return sym_multiply(u, v) - sym_multiply(v, u)


def ad_chain_eval(n: int, chain: Sequence[tuple[int, int]], target: tuple[int, int]) -> SymbolElement:
    """ad_{chain[-1]} ... ad_{chain[0]} (a^k b^l), by iterating the basis bracket rule.

    chain[0] is applied first (innermost).
    """
    k, l = target
    state = _GroupRingMonomial.basis(n, k, l)
    for i, j in chain:
        state = state.ad(i, j)
    return state.to_element()


@dataclass
class _GroupRingMonomial:
    """coefficient(rho) * alpha^p beta^q a^k b^l with coefficient kept in Z[x]/(x^n - 1)."""

    n: int
    k: int
    l: int
    p: int
    q: int
    vec: tuple[int, ...]

    @classmethod
    def basis(cls, n, k, l):
        v = [0] * n
        v[0] = 1
        return cls(n, k % n, l % n, k // n, l // n, tuple(v))

    def ad(self, i: int, j: int) -> "_GroupRingMonomial":
        n = self.n
        e1 = (j * self.k) % n
        e2 = (i * self.l) % n
        v = [0] * n
        if e1 != e2:
            for e, c in enumerate(self.vec):
                if c:
                    v[(e + e1) % n] += c
                    v[(e + e2) % n] -= c
        k, l = self.k + i, self.l + j
        return _GroupRingMonomial(n, k % n, l % n, self.p + k // n, self.q + l // n, tuple(v))

    def to_element(self) -> SymbolElement:
        c = Cyclotomic.from_group_ring(self.n, self.vec)
        return SymbolElement(self.n, {(self.k, self.l, self.p, self.q): c})


# --------------------------------------------------------------------------
# Closed-form readings of the iterated ad formula


def _closed_form(n, chain, target, reading: str) -> SymbolElement:
    k, l = target
    I = J = 0
    exps_sum = 0
    exps_prod = 1
    vec = [0] * n
    vec[0] = 1
    for i, j in chain:
        if reading == "product_of_differences":
            e1, e2 = j * (I + k), i * (J + l)
            new = [0] * n
            for e, c in enumerate(vec):
                new[(e + e1) % n] += c
                new[(e + e2) % n] -= c
            vec = new
        elif reading == "single_power_sum":
            exps_sum += j * (I + k) - i * (J + l)
        elif reading == "literal_sum":
            exps_sum += j * (J + k) - i * (I + l)
        elif reading == "literal_product":
            exps_prod *= j * (J + k) - i * (I + l)
        else:
            raise ValueError(reading)
        I += i
        J += j
    if reading in ("single_power_sum", "literal_sum"):
        vec = [0] * n
        vec[exps_sum % n] = 1
    elif reading == "literal_product":
        vec = [0] * n
        vec[exps_prod % n] = 1
    K, L = k + I, l + J
    c = Cyclotomic.from_group_ring(n, vec)
    return SymbolElement(n, {(K % n, L % n, K // n, L // n): c})


CLOSED_FORM_READINGS = ("product_of_differences", "single_power_sum", "literal_sum",
                        "literal_product")


def compare_closed_form_readings(n: int, max_len: int = 3) -> dict[str, bool]:
    """For each reading, whether it agrees with iterated brackets on all short chains."""
    idx = [(i, j) for i in range(n) for j in range(n)]
    result = {}
    for reading in CLOSED_FORM_READINGS:
        ok = True
        for length in range(1, max_len + 1):
            for chain in itertools.product(idx, repeat=length):
                for target in idx:
                    if _closed_form(n, chain, target, reading) != ad_chain_eval(n, chain, target):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        result[reading] = ok
    return result


# --------------------------------------------------------------------------
# Lie evaluation on symbol elements


def evaluate_lie(f: LiePolynomial, assignment: dict[int, SymbolElement], n: int) -> SymbolElement:
    cache: dict = {}

    def ev(t: LieTerm) -> SymbolElement:
        hit = cache.get(t)
        if hit is not None:
            return hit
        if isinstance(t, Leaf):
            val = assignment[t.var]
        else:
            val = sym_bracket(ev(t.left), ev(t.right))
        cache[t] = val
        return val

    total = SymbolElement(n)
    for t, c in f.terms.items():
        total = total + ev(t) * c
    return total


# --------------------------------------------------------------------------
# Identity search


@dataclass
class IdentitySearchReport:
    n: int
    degree: int
    tuples: int
    equations_raw: int
    equations_distinct: int
    columns: int
    rank: int
    kernel_dimension: int
    kernel: list[LiePolynomial] = field(default_factory=list)
    kernel_vectors: list[list[Fraction]] = field(default_factory=list)
    minimal_degree_found: int | None = None
    sweep: list[dict] = field(default_factory=list)

    def to_record(self) -> dict:
        return {
            "n": self.n,
            "degree": self.degree,
            "substitution_tuples": self.tuples,
            "equations_raw": self.equations_raw,
            "equations_distinct": self.equations_distinct,
            "columns": self.columns,
            "rank": self.rank,
            "kernel_dimension": self.kernel_dimension,
            "kernel": [repr(f) for f in self.kernel],
            "kernel_vectors": [[str(x) for x in v] for v in self.kernel_vectors],
            "minimal_degree_found": self.minimal_degree_found,
            "sweep": self.sweep,
        }


def _column_chains(m: int) -> list[tuple[int, ...]]:
    # basis element ad_{x_s1} ... ad_{x_s(m-1)} (x_m): innermost ad is x_s(m-1)
    return [tuple(reversed(perm)) for perm in itertools.permutations(range(1, m))]


def _equation_rows(n: int, m: int) -> tuple[list[dict], int]:
    idx = [(i, j) for i in range(n) for j in range(n)]
    chains = _column_chains(m)
    rows: dict[tuple, dict] = {}
    raw = 0
    for tup in itertools.product(range(len(idx)), repeat=m):
        per_key: dict[tuple, dict[int, int]] = {}
        target = idx[tup[m - 1]]
        for col, chain in enumerate(chains):
            st = _GroupRingMonomial.basis(n, *target)
            for v in chain:
                st = st.ad(*idx[tup[v - 1]])
                if not any(st.vec):
                    break
            if not any(st.vec):
                continue
            c = Cyclotomic.from_group_ring(n, st.vec)
            for coord, x in enumerate(c.coeffs):
                if x:
                    per_key.setdefault((st.k, st.l, st.p, st.q, coord), {})[col] = x
        raw += n * n * len(Cyclotomic(n).coeffs)
        for row in per_key.values():
            key = tuple(sorted(row.items()))
            rows.setdefault(key, row)
    ordered = [rows[k] for k in sorted(rows)]
    return ordered, raw


def find_multilinear_lie_identities(n: int, m: int,
                                    tuple_budget: int = DEFAULT_TUPLE_BUDGET) -> IdentitySearchReport:
    """Kernel of the substitution system for multilinear Lie polynomials of degree m.

    Columns are ``multilinear_lie_basis(m)``; each substitution of basis
    elements a^k b^l into x_1..x_m contributes one equation per output
    basis element, alpha/beta monomial and Q(rho) coordinate.
    """
    if n < 2 or m < 2:
        raise ValueError("need n >= 2 and m >= 2")
    tuples = (n * n) ** m
    if tuples > tuple_budget:
        raise CapacityError(f"(n^2)^m = {tuples} substitution tuples exceeds budget {tuple_budget}")
    basis = multilinear_lie_basis(m)
    rows, raw = _equation_rows(n, m)
    kernel = linalg.nullspace(rows, len(basis))
    polys = [LiePolynomial({t: c for t, c in zip(basis, v) if c}) for v in kernel]
    report = IdentitySearchReport(
        n=n, degree=m, tuples=tuples, equations_raw=raw, equations_distinct=len(rows),
        columns=len(basis), rank=len(basis) - len(kernel), kernel_dimension=len(kernel),
        kernel=polys, kernel_vectors=kernel)
    return report


def sweep_minimal_degree(n: int, max_degree: int,
                         tuple_budget: int = DEFAULT_TUPLE_BUDGET) -> IdentitySearchReport:
    """Run degrees 2, 3, ... and stop at the first nontrivial kernel."""
    summary = []
    report = None
    for m in range(2, max_degree + 1):
        report = find_multilinear_lie_identities(n, m, tuple_budget)
        summary.append({"degree": m, "kernel_dimension": report.kernel_dimension,
                        "rank": report.rank, "columns": report.columns})
        if report.kernel_dimension:
            report.minimal_degree_found = m
            break
    report.sweep = summary
    return report


def coordinates_in_basis(f: LiePolynomial, m: int) -> list[Fraction] | None:
    """Coordinates of a multilinear Lie polynomial in ``multilinear_lie_basis(m)``."""
    from .freelie import expand, is_lie

    w = is_lie(expand(f), m)
    if w is None:
        return None
    basis = multilinear_lie_basis(m)
    return [w.terms.get(t, Fraction(0)) for t in basis]


def in_kernel_span(f: LiePolynomial, report: IdentitySearchReport) -> bool:
    coords = coordinates_in_basis(f, report.degree)
    if coords is None:
        return False
    rows = [dict(enumerate(v)) for v in report.kernel_vectors]
    before = linalg.rank(rows)
    return linalg.rank(rows + [dict(enumerate(coords))]) == before


def verify_identity_candidate(f: LiePolynomial, n: int, samples: int = 1000,
                              seed: int = 0) -> bool:
    """Decide whether the multilinear ``f`` is an identity of M_n, by two routes.

    Route one substitutes every tuple of basis elements of the generic symbol
    algebra.  Route two substitutes ``samples`` random tuples from sl_n(Q);
    each sampled matrix is rescaled to have integer entries, which does not
    change whether a multilinear value is zero.  The routes must agree.
    """
    variables = sorted(f.variables())
    m = len(variables)
    for t in f.terms:
        if not t.is_multilinear_in(variables):
            raise NotMultilinear(f"{t!r} is not multilinear in {variables}")
    basis = [SymbolElement.basis(n, i, j) for i in range(n) for j in range(n)]
    symbolic = True
    for tup in itertools.product(basis, repeat=m):
        if evaluate_lie(f, dict(zip(variables, tup)), n):
            symbolic = False
            break

    rng = random.Random(seed)
    numeric = True
    for _ in range(samples):
        mats = {v: random_trace_zero_rational(rng, n, integral=True) for v in variables}
        if not is_zero_matrix(_eval_int(f, mats)):
            numeric = False
            break
    if symbolic != numeric:
        raise InvariantViolation(
            f"symbol-algebra verdict {symbolic} disagrees with sl_{n}(Q) sampling verdict {numeric}")
    return symbolic


def _eval_int(f: LiePolynomial, mats):
    cache: dict = {}

    def ev(t):
        hit = cache.get(t)
        if hit is not None:
            return hit
        val = mats[t.var] if isinstance(t, Leaf) else int_bracket(ev(t.left), ev(t.right))
        cache[t] = val
        return val

    n = len(next(iter(mats.values())))
    total = [[0] * n for _ in range(n)]
    for t, c in f.terms.items():
        v = ev(t)
        for r in range(n):
            for s in range(n):
                total[r][s] += c * v[r][s]
    return total
