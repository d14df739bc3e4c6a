"""Shared strategies and independent oracles.

The oracles here are deliberately naive re-implementations (plain dicts of
words, explicit permutation signs, concrete 2x2 matrices) so that the
library is checked against code that shares none of its machinery.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from lieimages.freelie import Bracket, Leaf, LiePolynomial, LieTerm

settings.register_profile("ci", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow], derandomize=True)
settings.load_profile("ci")


# --------------------------------------------------------------------------
# Strategies


def lie_terms(max_var: int = 4, max_depth: int = 3):
    leaf = st.integers(1, max_var).map(Leaf)
    return st.recursive(leaf, lambda inner: st.builds(Bracket, inner, inner),
                        max_leaves=2 ** max_depth)


def lie_polys(max_var: int = 4, max_terms: int = 3):
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool)
    return st.dictionaries(lie_terms(max_var), coeff, min_size=1, max_size=max_terms).map(
        LiePolynomial)


def random_lie_term(rng: random.Random, variables) -> LieTerm:
    """Random bracketing of the given leaves, in the given order."""
    if len(variables) == 1:
        return Leaf(variables[0])
    cut = rng.randint(1, len(variables) - 1)
    return Bracket(random_lie_term(rng, variables[:cut]), random_lie_term(rng, variables[cut:]))


def random_multilinear_lie(rng: random.Random, k: int, terms: int = 3) -> LiePolynomial:
    out = LiePolynomial()
    for _ in range(terms):
        order = list(range(1, k + 1))
        rng.shuffle(order)
        out = out + LiePolynomial.of(random_lie_term(rng, order), rng.randint(-3, 3) or 1)
    return out


# --------------------------------------------------------------------------
# Oracles


def oracle_expand(t: LieTerm) -> dict[tuple, int]:
    """Words of a Lie term, by the commutator rule on plain dicts."""
    if isinstance(t, Leaf):
        return {(t.var,): 1}
    a, b = oracle_expand(t.left), oracle_expand(t.right)
    out: dict[tuple, int] = {}
    for (u, c), (v, d) in itertools.product(a.items(), b.items()):
        out[u + v] = out.get(u + v, 0) + c * d
        out[v + u] = out.get(v + u, 0) - c * d
    return {w: c for w, c in out.items() if c}


def perm_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (distinct entries), by counting inversions."""
    inv = sum(1 for i, j in itertools.combinations(range(len(seq)), 2) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


def mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_bracket(a, b):
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def oracle_eval_lie(t: LieTerm, mats):
    if isinstance(t, Leaf):
        return mats[t.var]
    return mat_bracket(oracle_eval_lie(t.left, mats), oracle_eval_lie(t.right, mats))


def random_sl2(rng: random.Random, height: int = 10):
    a, b, c = (Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(3))
    return [[a, b], [c, -a]]


@pytest.fixture
def rng():
    return random.Random(20240601)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, line
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(line(number, *RESULTS[number]))
