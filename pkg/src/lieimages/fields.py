"""Exact scalar fields: Q, GF(p) and GF(p^2).

Elements of the finite fields are small immutable objects with operator
overloading, so the generic matrix helpers work over every field.  Q uses
``fractions.Fraction`` directly.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class FpElem:
    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FpElem):
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.v, self.p)

    def inverse(self):
        if not self.v:
            raise ZeroDivisionError("0 has no inverse")
        return FpElem(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = other if isinstance(other, FpElem) else FpElem(self._coerce(other), self.p)
        return self * o.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FpElem(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        return o is not NotImplemented and (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return str(self.v)


class Fp2Elem:
    """a + b*s in GF(p)[s]/(s^2 - r), r a fixed quadratic non-residue."""

    __slots__ = ("a", "b", "p", "r")

    def __init__(self, a: int, b: int, p: int, r: int):
        self.a = a % p
        self.b = b % p
        self.p = p
        self.r = r

    def _coerce(self, other):
        if isinstance(other, Fp2Elem):
            return other
        if isinstance(other, FpElem):
            return Fp2Elem(other.v, 0, self.p, self.r)
        if isinstance(other, int):
            return Fp2Elem(other, 0, self.p, self.r)
        if isinstance(other, Fraction):
            return Fp2Elem(other.numerator * pow(other.denominator, -1, self.p), 0, self.p, self.r)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp2Elem(self.a + o.a, self.b + o.b, self.p, self.r)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp2Elem(self.a - o.a, self.b - o.b, self.p, self.r)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp2Elem(self.a * o.a + self.r * self.b * o.b, self.a * o.b + self.b * o.a,
                       self.p, self.r)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp2Elem(-self.a, -self.b, self.p, self.r)

    def inverse(self):
        norm = (self.a * self.a - self.r * self.b * self.b) % self.p
        if not norm:
            raise ZeroDivisionError("0 has no inverse")
        ni = pow(norm, -1, self.p)
        return Fp2Elem(self.a * ni, -self.b * ni, self.p, self.r)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = Fp2Elem(1, 0, self.p, self.r)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        return o is not NotImplemented and (self.a, self.b) == (o.a, o.b)

    def __hash__(self):
        return hash((self.a, self.b, self.p))

    def __bool__(self):
        return bool(self.a or self.b)

    def __repr__(self):
        if not self.b:
            return str(self.a)
        return f"{self.a}+{self.b}s"


@dataclass(frozen=True)
class FieldSpec:
    """kind is 'Q', 'GF(p)' or 'GF(p^2)'."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Q", "GF(p)", "GF(p^2)"):
            raise ValueError(f"unknown field kind {self.kind}")
        if self.kind != "Q" and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def rational(cls):
        return cls("Q")

    @classmethod
    def prime(cls, p: int):
        return cls("GF(p)", p)

    @classmethod
    def prime_square(cls, p: int):
        return cls("GF(p^2)", p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """'q', 'gf5', 'gf5^2' or 'gf25' (a prime square)."""
        t = text.strip().lower().replace("(", "").replace(")", "")
        if t in ("q", "qq", "rational", "rationals"):
            return cls.rational()
        m = re.fullmatch(r"gf(\d+)(\^2)?", t)
        if not m:
            raise ValueError(f"cannot parse field {text!r}")
        q = int(m.group(1))
        if m.group(2):
            return cls.prime_square(q)
        if is_prime(q):
            return cls.prime(q)
        r = int(round(q ** 0.5))
        if r * r == q and is_prime(r):
            return cls.prime_square(r)
        raise ValueError(f"unsupported field order {q}")

    @property
    def name(self) -> str:
        if self.kind == "Q":
            return "Q"
        if self.kind == "GF(p)":
            return f"GF({self.p})"
        return f"GF({self.p}^2)"

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def is_finite(self) -> bool:
        return self.kind != "Q"

    @property
    def order(self) -> int | None:
        if self.kind == "GF(p)":
            return self.p
        if self.kind == "GF(p^2)":
            return self.p * self.p
        return None

    @property
    def nonresidue(self) -> int:
        if self.p == 2:
            # GF(4) = GF(2)[s]/(s^2 + s + 1) is not of this shape
            raise ValueError("GF(2^2) is not supported")
        return next(r for r in range(2, self.p) if pow(r, (self.p - 1) // 2, self.p) == self.p - 1)

    def __call__(self, x):
        """Coerce an int or Fraction into the field."""
        if self.kind == "Q":
            return Fraction(x)
        if self.kind == "GF(p)":
            if isinstance(x, Fraction):
                return FpElem(x.numerator * pow(x.denominator, -1, self.p), self.p)
            return FpElem(int(x), self.p)
        if isinstance(x, Fp2Elem):
            return x
        if isinstance(x, FpElem):
            x = x.v
        if isinstance(x, Fraction):
            x = x.numerator * pow(x.denominator, -1, self.p)
        return Fp2Elem(int(x), 0, self.p, self.nonresidue)

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def elements(self):
        if self.kind == "GF(p)":
            return [FpElem(v, self.p) for v in range(self.p)]
        if self.kind == "GF(p^2)":
            r = self.nonresidue
            return [Fp2Elem(a, b, self.p, r) for b in range(self.p) for a in range(self.p)]
        raise ValueError("Q is infinite")

    def random(self, rng: random.Random, height: int = 10):
        if self.kind == "Q":
            return Fraction(rng.randint(-height, height), rng.randint(1, height))
        if self.kind == "GF(p)":
            return FpElem(rng.randrange(self.p), self.p)
        return Fp2Elem(rng.randrange(self.p), rng.randrange(self.p), self.p, self.nonresidue)

    def primitive_cube_root(self):
        """A primitive cube root of unity if the field has one, else None."""
        if self.kind == "Q" or self.p == 3:
            return None
        if self.kind == "GF(p)" and self.p % 3 != 1:
            return None
        for x in self.elements():
            if x != 1 and x * x * x == 1:
                return x
        return None

    def sqrt(self, x):
        """Some square root of x in the field, or None."""
        if self.kind == "Q":
            x = Fraction(x)
            if x < 0:
                return None
            num, den = _isqrt_exact(x.numerator), _isqrt_exact(x.denominator)
            return None if num is None or den is None else Fraction(num, den)
        for y in self.elements():
            if y * y == x:
                return y
        return None


def _isqrt_exact(n: int):
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None
