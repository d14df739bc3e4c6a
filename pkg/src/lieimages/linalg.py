"""Exact linear algebra over Q with fraction-free row reduction.

Rows are sparse ``{column: int}`` dicts.  Rational input is scaled to
integers row by row, and every intermediate row is divided by its content,
so entries stay small without ever forming a Fraction during elimination.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

Row = dict


def _integral(row: Mapping[int, Fraction | int]) -> Row:
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    out = {}
    for c, v in row.items():
        v = v * den
        if v:
            out[c] = int(v)
    return _primitive(out)


def _primitive(row: Row) -> Row:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def _combine(r: Row, p: Row, col: int) -> Row:
    """Return a multiple of ``r`` minus a multiple of ``p`` with ``col`` cleared."""
    a, b = p[col], r[col]
    g = gcd(a, b)
    a //= g
    b //= g
    out = {c: a * v for c, v in r.items()}
    for c, v in p.items():
        w = out.get(c, 0) - b * v
        if w:
            out[c] = w
        else:
            out.pop(c, None)
    return _primitive(out)


class Echelon:
    """Incrementally maintained echelon basis of a row space.

    Each stored row is primitive and keyed by its leading (smallest) column.
    """

    def __init__(self):
        self.pivots: dict[int, Row] = {}

    def add(self, row: Mapping[int, Fraction | int]) -> bool:
        """Insert a row; return True if it increased the rank."""
        r = _integral(row)
        while r:
            c = min(r)
            p = self.pivots.get(c)
            if p is None:
                if r[c] < 0:
                    r = {k: -v for k, v in r.items()}
                self.pivots[c] = r
                return True
            r = _combine(r, p, c)
        return False

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduced(self) -> dict[int, Row]:
        """Fully reduced form: every pivot column is cleared from the other rows."""
        cols = sorted(self.pivots)
        rows = {c: dict(self.pivots[c]) for c in cols}
        for c in reversed(cols):
            pc = rows[c]
            for c2 in cols:
                if c2 < c and c in rows[c2]:
                    rows[c2] = _combine(rows[c2], pc, c)
                    if rows[c2][c2] < 0:
                        rows[c2] = {k: -v for k, v in rows[c2].items()}
        return rows


def rank(rows: Iterable[Mapping[int, Fraction | int]]) -> int:
    e = Echelon()
    for r in rows:
        e.add(r)
    return e.rank


def nullspace(rows: Iterable[Mapping[int, Fraction | int]], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{v : A v = 0}``; each vector has first nonzero entry 1."""
    e = Echelon()
    for r in rows:
        e.add(r)
    red = e.reduced()
    free = [c for c in range(ncols) if c not in red]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for pc, row in red.items():
            if f in row:
                v[pc] = Fraction(-row[f], row[pc])
        lead = next(x for x in v if x)
        basis.append([x / lead for x in v])
    return basis


def solve(rows: Sequence[Mapping[int, Fraction | int]], rhs: Sequence[Fraction | int],
          ncols: int) -> list[Fraction] | None:
    """One solution of ``A v = rhs`` (free variables set to 0), or None if inconsistent."""
    e = Echelon()
    for r, b in zip(rows, rhs):
        aug = dict(r)
        if b:
            aug[ncols] = b
        e.add(aug)
    if ncols in e.pivots:
        return None
    red = e.reduced()
    v = [Fraction(0)] * ncols
    for pc, row in red.items():
        v[pc] = Fraction(row.get(ncols, 0), row[pc])
    return v
