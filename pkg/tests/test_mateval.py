import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import mat_mul, random_sl2
from lieimages.errors import BudgetExceeded, ShapeMismatch, UnassignedVariable, WrongDimension
from lieimages.expr import parse_polynomial
from lieimages.fields import FieldSpec
from lieimages.freelie import AssocPolynomial, LiePolynomial, expand, standard_polynomial
from lieimages.mateval import (CLASSES, MatrixValue, _classify_batch, ValueClass, classify, classify2, classify3,
                               domain_elements, evaluate_poly, nilpotent_value_search, parse_domain,
                               run_census, sl_projection)

Q = FieldSpec.rational()
GF2, GF3, GF5, GF7 = (FieldSpec.prime(p) for p in (2, 3, 5, 7))
E12 = [[0, 1], [0, 0]]
E21 = [[0, 0], [1, 0]]
COMM = parse_polynomial("[x1,x2]")
NO_NIL = parse_polynomial("[[[x1,x2],x1],[[x1,x2],x2]]")
ANTICOMM_BRACKET = parse_polynomial("[(x1*x2+x2*x1),x3]")
COMM_PRODUCT = parse_polynomial("[[x1,x2],[x3,x4]]")


def values(v: MatrixValue):
    return [[Fraction(str(x)) for x in r] for r in v.rows]


# ---------------------------------------------------------------- evaluation


def test_commutator_of_e12_e21():
    v = evaluate_poly(COMM, {1: E12, 2: E21})
    assert values(v) == [[1, 0], [0, -1]]


def test_h_e12():
    h = [[Fraction(1, 2), 0], [0, Fraction(-1, 2)]]
    assert values(evaluate_poly(COMM, {1: h, 2: E12})) == E12


def test_s4_vanishes_on_random_sl2_rational():
    rng = random.Random(4)
    s4 = standard_polynomial(4)
    for _ in range(50):
        assert evaluate_poly(s4, {i: random_sl2(rng) for i in range(1, 5)}).is_zero()


def test_lie_and_expanded_evaluation_agree():
    rng = random.Random(5)
    for f in (COMM, NO_NIL, COMM_PRODUCT):
        for _ in range(20):
            mats = {v: [[Fraction(rng.randint(-5, 5)) for _ in range(3)] for _ in range(3)]
                    for v in f.variables()}
            assert evaluate_poly(f, mats) == evaluate_poly(expand(f), mats)


def test_evaluation_errors():
    with pytest.raises(UnassignedVariable):
        evaluate_poly(COMM, {1: E12})
    with pytest.raises(ShapeMismatch):
        evaluate_poly(COMM, {1: E12, 2: [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})


def test_evaluation_over_finite_field():
    v = evaluate_poly(AssocPolynomial.word(1, 1), {1: [[2, 1], [0, 3]]}, GF5)
    assert [[int(x.v) for x in r] for r in v.rows] == [[4, 0], [0, 4]]


# ---------------------------------------------------------------- classification


def test_classify2_examples():
    assert classify2(MatrixValue.of(Q, [[0, 0], [0, 0]])) is ValueClass.ZERO
    assert classify2(MatrixValue.of(Q, E12)) is ValueClass.NILPOTENT_NONZERO
    assert classify2(MatrixValue.of(GF2, [[1, 0], [0, 1]])) is ValueClass.SCALAR_NONZERO
    assert classify2(MatrixValue.of(Q, [[1, 0], [0, 1]])) is ValueClass.NONZERO_TRACE
    assert classify2(MatrixValue.of(Q, [[1, 0], [0, -1]])) is ValueClass.TRACE_ZERO_NON_NILPOTENT


def test_classify3_examples():
    assert classify3(MatrixValue.of(GF7, [[1, 0, 0], [0, 2, 0], [0, 0, 4]])) \
        is ValueClass.THREE_SCALAR_NONZERO
    assert classify3(MatrixValue.of(Q, [[1, 0, 0], [0, 1, 0], [0, 0, -2]])) \
        is ValueClass.TRACE_ZERO_NON_NILPOTENT
    assert classify3(MatrixValue.of(Q, [[0] * 3] * 3)) is ValueClass.ZERO


def test_classify3_without_cube_root_reports_other():
    # companion matrix of t^3 - 1 over GF(5): trace 0, e2 = 0, det 1
    m = MatrixValue.of(GF5, [[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    assert classify3(m) is ValueClass.OTHER
    assert classify3(MatrixValue.of(GF7, [[0, 0, 1], [1, 0, 0], [0, 1, 0]])) \
        is ValueClass.THREE_SCALAR_NONZERO


def test_wrong_dimension():
    with pytest.raises(WrongDimension):
        classify2(MatrixValue.of(Q, [[0] * 3] * 3))
    with pytest.raises(WrongDimension):
        classify3(MatrixValue.of(Q, E12))


def _predicates(rows, n):
    """Class from first principles: zero, trace, scalar, M^n = 0, char poly."""
    zero = all(x == 0 for r in rows for x in r)
    tr = sum(rows[i][i] for i in range(n))
    scalar = all(rows[i][j] == (rows[0][0] if i == j else 0) for i in range(n) for j in range(n))
    power = rows
    for _ in range(n - 1):
        power = mat_mul(power, rows)
    nil = all(x == 0 for r in power for x in r)
    return zero, tr, scalar, nil


@pytest.mark.parametrize("n", [2, 3])
def test_classification_is_consistent_partition(n):
    rng = random.Random(n)
    for _ in range(5000):
        rows = [[Fraction(rng.choice([0, 0, 1, -1, 2, rng.randint(-9, 9)])) for _ in range(n)]
                for _ in range(n)]
        if rng.random() < 0.5:
            rows[n - 1][n - 1] = -sum(rows[i][i] for i in range(n - 1))
        if rng.random() < 0.2:       # strictly upper triangular: nilpotent
            rows = [[x if j > i else 0 for j, x in enumerate(r)] for i, r in enumerate(rows)]
        c = classify(MatrixValue.of(Q, rows))
        zero, tr, scalar, nil = _predicates(rows, n)
        assert (c is ValueClass.ZERO) == zero
        assert (c is ValueClass.NONZERO_TRACE) == (not zero and tr != 0)
        assert (c is ValueClass.NILPOTENT_NONZERO) == (not zero and nil)
        assert c is not ValueClass.SCALAR_NONZERO          # characteristic 0
        assert c is not ValueClass.THREE_SCALAR_NONZERO     # no cube roots in Q


def test_batch_classification_matches_scalar():
    for field, n in ((GF2, 2), (GF3, 2), (GF7, 3), (GF5, 3)):
        rng = random.Random(field.p * n)
        mats = [[[field.random(rng) for _ in range(n)] for _ in range(n)] for _ in range(300)]
        mats += [[[field(0)] * n for _ in range(n)], [[field(int(i == j)) for j in range(n)]
                                                     for i in range(n)]]
        arr = np.array([[[int(x.v) for x in r] for r in m] for m in mats], dtype=np.int64)
        codes = _classify_batch(arr, field.p, field.primitive_cube_root() is not None)
        for m, code in zip(mats, codes):
            assert CLASSES[code] is classify(MatrixValue.of(field, m))


# ---------------------------------------------------------------- censuses


def test_commutator_census_sl2_gf3():
    c = run_census(COMM, "sl", 2, GF3)
    assert c.trials == 27 ** 2
    assert c.classes_hit == {ValueClass.ZERO, ValueClass.NILPOTENT_NONZERO,
                             ValueClass.TRACE_ZERO_NON_NILPOTENT}


def test_char2_census_scalar_values():
    c = run_census(COMM_PRODUCT, "gl", 2, GF2)
    assert c.trials == 16 ** 4
    assert c.classes_hit == {ValueClass.ZERO, ValueClass.SCALAR_NONZERO}


def test_anticommutator_bracket_census():
    assert run_census(ANTICOMM_BRACKET, "sl", 2, GF5).classes_hit == {ValueClass.ZERO}
    assert run_census(ANTICOMM_BRACKET, "sl", 2, Q, "sampled", 500, seed=1).classes_hit == {ValueClass.ZERO}


def test_no_nilpotent_census():
    c = run_census(NO_NIL, "sl", 2, GF5)
    assert c.classes_hit == {ValueClass.ZERO, ValueClass.TRACE_ZERO_NON_NILPOTENT}


def test_census_counts_sum_and_witnesses_reevaluate():
    for field, mode, trials in ((GF3, "exhaustive", None), (Q, "sampled", 300)):
        c = run_census(COMM, "sl", 2, field, mode, trials, seed=3)
        assert sum(c.counts.values()) == c.trials
        for cls, tup in c.witnesses.items():
            mats = {i + 1: [[Fraction(x) for x in r] for r in m] for i, m in enumerate(tup)}
            v = evaluate_poly(COMM, mats, field)
            assert classify(v).value == cls
            assert v.to_record() == c.values[cls]


def test_census_determinism():
    a = run_census(NO_NIL, "sl", 2, Q, "sampled", 200, seed=11).to_record()
    b = run_census(NO_NIL, "sl", 2, Q, "sampled", 200, seed=11).to_record()
    assert a == b
    a = run_census(COMM, "gl", 2, GF3, "sampled", 500, seed=2).to_record()
    assert a == run_census(COMM, "gl", 2, GF3, "sampled", 500, seed=2).to_record()


def test_census_budget():
    with pytest.raises(BudgetExceeded):
        run_census(COMM_PRODUCT, "gl", 2, GF3, budget=1000)
    with pytest.raises(ValueError):
        run_census(COMM, "sl", 2, Q, "exhaustive")


def test_census_gl3_over_gf2_classes_exact():
    c = run_census(COMM, "sl", 3, GF2, "sampled", 2000, seed=0)
    assert ValueClass.NONZERO_TRACE not in c.classes_hit


def test_exhaustive_enumeration_order_and_size():
    els = domain_elements("sl", 2, GF3)
    assert len(els) == 27
    assert all(x[0][0] + x[1][1] == 0 for x in els)
    assert len(domain_elements("gl", 2, GF2)) == 16


def test_parse_domain():
    assert parse_domain("sl2") == ("sl", 2)
    assert parse_domain("GL_3") == ("gl", 3)
    with pytest.raises(ValueError):
        parse_domain("so3")


# ---------------------------------------------------------------- nilpotent search


def test_nilpotent_witness_for_commutator():
    w = nilpotent_value_search(COMM, "sl", 2, GF3)
    assert w is not None
    mats = {i + 1: m for i, m in enumerate(w.arguments)}
    v = evaluate_poly(COMM, {k: [[int(x) for x in r] for r in m] for k, m in mats.items()}, GF3)
    assert classify(v) is ValueClass.NILPOTENT_NONZERO


def test_no_nilpotent_witness():
    assert nilpotent_value_search(NO_NIL, "sl", 2, GF3) is None


def test_zero_polynomial_has_no_nilpotent_values():
    assert nilpotent_value_search(LiePolynomial(), "sl", 2, GF3) is None


# ---------------------------------------------------------------- sl projection


LIE_CORPUS = [COMM, NO_NIL, COMM_PRODUCT, parse_polynomial("[x1,[x2,[x1,x3]]] - 3*[[x1,x2],x3]"),
              parse_polynomial("[[x1,x2],[x1,[x1,x2]]]")]


@pytest.mark.parametrize("idx", range(len(LIE_CORPUS)))
def test_values_unchanged_by_sl_projection(idx):
    f = LIE_CORPUS[idx]
    rng = random.Random(idx)
    for _ in range(50):
        mats = {v: [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(2)]
                    for _ in range(2)] for v in f.variables()}
        proj = {v: sl_projection(m) for v, m in mats.items()}
        assert all(p[0][0] + p[1][1] == 0 for p in proj.values())
        assert evaluate_poly(f, mats) == evaluate_poly(f, proj)


def test_projection_over_gf5():
    out = sl_projection([[3, 0], [0, 1]], GF5)
    assert [[int(x.v) for x in r] for r in out] == [[1, 0], [0, 4]]
    with pytest.raises(ZeroDivisionError):
        sl_projection([[1, 0], [0, 0]], GF2)


def test_alternating_on_repeated_arguments():
    # any gl_2 matrices: s_4 alternates, so a repeated argument gives 0
    s4 = standard_polynomial(4)
    rng = random.Random(8)
    for _ in range(30):
        a, b, c = ([[Fraction(rng.randint(-5, 5)) for _ in range(2)] for _ in range(2)]
                   for _ in range(3))
        for args in set(itertools.permutations((0, 0, 1, 2))):
            mats = [(a, b, c)[i] for i in args]
            assert evaluate_poly(s4, dict(enumerate(mats, 1))).is_zero()
