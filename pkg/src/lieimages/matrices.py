"""Small dense matrices as lists of lists over any exact ring.

Entries only need ``+``, ``-`` and ``*``, so the same helpers serve Fraction,
int, finite-field elements and polynomial entries.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import lcm


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [[_dot(a[i], b, j, k) for j in range(m)] for i in range(n)]


def _dot(row, b, j, k):
    s = row[0] * b[0][j]
    for t in range(1, k):
        s = s + row[t] * b[t][j]
    return s


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, a):
    return [[c * x for x in row] for row in a]


def bracket(a, b):
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


int_bracket = bracket


def identity(n, one=1, zero=0):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def zeros_like(a):
    return [[x - x for x in row] for row in a]


def is_zero_matrix(a) -> bool:
    return all(not x for row in a for x in row)


def is_scalar_matrix(a) -> bool:
    n = len(a)
    return all(not a[i][j] for i in range(n) for j in range(n) if i != j) and \
        all(a[i][i] == a[0][0] for i in range(n))


def trace(a):
    s = a[0][0]
    for i in range(1, len(a)):
        s = s + a[i][i]
    return s


def det(a):
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        term = a[0][j] * det(minor)
        if total is None:
            total = term
        elif j % 2:
            total = total - term
        else:
            total = total + term
    return total


def elementary_symmetric(a) -> list:
    """[e_1, ..., e_n] of the eigenvalues: sums of principal minors."""
    n = len(a)
    out = []
    for k in range(1, n + 1):
        s = None
        for rows in itertools.combinations(range(n), k):
            minor = [[a[i][j] for j in rows] for i in rows]
            d = det(minor)
            s = d if s is None else s + d
        out.append(s)
    return out


def mat_pow(a, e: int):
    n = len(a)
    one = a[0][0] - a[0][0] + 1
    out = identity(n, one, one - one)
    for _ in range(e):
        out = mat_mul(out, a)
    return out


def is_nilpotent(a) -> bool:
    return is_zero_matrix(mat_pow(a, len(a)))


def random_rational_matrix(rng: random.Random, n: int, height: int = 10):
    return [[Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(n)]
            for _ in range(n)]


def random_trace_zero_rational(rng: random.Random, n: int, height: int = 10,
                               integral: bool = False):
    """Random element of sl_n(Q); with ``integral`` it is rescaled to integer entries."""
    m = random_rational_matrix(rng, n, height)
    m[n - 1][n - 1] = -sum((m[i][i] for i in range(n - 1)), Fraction(0))
    if integral:
        d = 1
        for row in m:
            for x in row:
                d = lcm(d, x.denominator)
        m = [[int(x * d) for x in row] for row in m]
    return m


def to_ints(a):
    return [[int(x) for x in row] for row in a]
