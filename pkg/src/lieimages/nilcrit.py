"""Prime-divisor test for the absence of nonzero nilpotent values.

A trace-vanishing polynomial f is evaluated on generic trace-zero matrices
with polynomial entries.  f has no nonzero nilpotent values over integral
domains containing K exactly when every prime divisor of det(f) divides all
entries of f.  Restricting the generic entries to a random curve t -> xi(t)
gives a univariate test: strip from D = det(f) every common factor with
g = gcd(entries) until none is left; a nonconstant remainder is a prime of D
not dividing g.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import QQ
from sympy.polys.rings import ring

from . import matrices as mx
from .errors import DegenerateCurve, NotTraceVanishing
from .freelie import LiePolynomial
from .mateval import _eval_assoc_scalar, _eval_lie_scalar


def _qq(c: Fraction):
    return QQ(c.numerator, c.denominator)


def generic_trace_zero(n: int, gens, offset: int):
    """n x n matrix of fresh generators with the last diagonal entry = -(sum of others)."""
    it = iter(gens[offset:offset + n * n - 1])
    m = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if (i, j) != (n - 1, n - 1):
                m[i][j] = next(it)
    m[n - 1][n - 1] = -sum((m[i][i] for i in range(n - 1)), gens[0] * 0)
    return m


def _scaled_eval(poly, mats, R):
    """Evaluate with Fraction coefficients mapped into the sympy ring R."""
    coerce = lambda c: R(_qq(c))  # noqa: E731
    if isinstance(poly, LiePolynomial):
        return _eval_lie_scalar(poly, mats, coerce)
    return _eval_assoc_scalar(poly, mats, coerce)


def check_trace_vanishing(poly, n: int = 2) -> bool:
    """Trace of poly on generic trace-zero matrices, computed symbolically, is 0."""
    variables = sorted(poly.variables())
    per = n * n - 1
    R, *gens = ring(",".join(f"xi{k}" for k in range(per * len(variables))), QQ)
    mats = {v: generic_trace_zero(n, gens, per * i) for i, v in enumerate(variables)}
    val = _scaled_eval(poly, mats, R)
    return mx.trace(val) == 0


@dataclass
class CurveResult:
    coefficients: list       # per generic entry: [c0, c1, c2] of c0 + c1 t + c2 t^2
    det: str
    entries_gcd: str
    remainder: str
    passed: bool

    def to_record(self):
        return {"curve": [[str(c) for c in cs] for cs in self.coefficients],
                "det": self.det, "entries_gcd": self.entries_gcd,
                "remainder": self.remainder, "passed": self.passed}


@dataclass
class NilcritVerdict:
    passed: bool
    curves_tested: int
    degenerate_resamples: int
    failing_curve: CurveResult | None = None
    curves: list[CurveResult] = field(default_factory=list)
    note: str = ("Fail is conclusive; Pass over random curves is probabilistic evidence. "
                 "The quantifier over all integral domains containing K is not testable and "
                 "is replaced by rational curve restrictions.")

    @property
    def verdict(self) -> str:
        return "Pass" if self.passed else "Fail"

    def to_record(self):
        return {"verdict": self.verdict, "curves_tested": self.curves_tested,
                "degenerate_resamples": self.degenerate_resamples,
                "failing_curve": self.failing_curve.to_record() if self.failing_curve else None,
                "note": self.note}


def curve_criterion(D, g) -> tuple[bool, object]:
    """Divide D by gcd(D, g) until coprime; pass iff what remains is constant."""
    h = D.gcd(g)
    while h.degree() > 0:
        D = D.exquo(h)
        h = D.gcd(g)
    return D.degree() <= 0, D


def nilcrit_check(poly, n: int = 2, curves: int = 10, seed: int = 0, degree: int = 2,
                  height: int = 10, max_degenerate: int | None = None,
                  check_trace: bool = True) -> NilcritVerdict:
    if check_trace and not check_trace_vanishing(poly, n):
        raise NotTraceVanishing("polynomial is not trace vanishing on generic sl_n matrices")
    variables = sorted(poly.variables())
    per = n * n - 1
    count = per * len(variables)
    R, t = ring("t", QQ)
    rng = random.Random(seed)
    cap = max_degenerate if max_degenerate is not None else 5 * curves
    degenerate = 0
    results = []
    while len(results) < curves:
        coeffs = [[Fraction(rng.randint(-height, height), rng.randint(1, height))
                   for _ in range(degree + 1)] for _ in range(count)]
        xis = [sum((R(_qq(c)) * t ** e for e, c in enumerate(cs)), R(0)) for cs in coeffs]
        mats = {v: generic_trace_zero(n, xis, per * i) for i, v in enumerate(variables)}
        val = _scaled_eval(poly, mats, R)
        D = mx.det(val)
        if D == 0:
            degenerate += 1
            if degenerate > cap:
                raise DegenerateCurve(f"{degenerate} curves gave det identically 0")
            continue
        g = R(0)
        for row in val:
            for x in row:
                g = g.gcd(x)
        ok, rest = curve_criterion(D, g)
        res = CurveResult(coeffs, str(D.as_expr()), str(g.monic().as_expr() if g else 0),
                          str(rest.as_expr()), ok)
        results.append(res)
        if not ok:
            return NilcritVerdict(False, len(results), degenerate, res, results)
    return NilcritVerdict(True, len(results), degenerate, None, results)
