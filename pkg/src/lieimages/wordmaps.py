"""Word maps on SL_2 and PSL_2 over small finite fields.

Censuses here are exploration tools: over a finite field they can exhibit
elements outside an image, but they never settle statements about
algebraically closed fields of characteristic 0.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import matrices as mx
from .errors import BudgetExceeded, ParseError
from .fields import FieldSpec
from .mateval import sl_projection

DEFAULT_BUDGET = 2_000_000
BANNER = "evidence only, finite field"


# --------------------------------------------------------------------------
# Words


@dataclass(frozen=True)
class GroupWord:
    letters: tuple[tuple[int, int], ...] = ()
    arity: int = 0

    def exponent_sums(self) -> dict[int, int]:
        sums = {i: 0 for i in range(1, self.arity + 1)}
        for g, e in self.letters:
            sums[g] = sums.get(g, 0) + e
        return sums

    def is_exponent_zero(self) -> bool:
        return not any(self.exponent_sums().values())

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((g, -e) for g, e in reversed(self.letters)), self.arity)

    def __str__(self):
        if not self.letters:
            return "1"
        return "".join(f"x{g}" if e == 1 else f"x{g}^{e}" for g, e in self.letters)


def reduce_word(raw: Iterable[tuple[int, int]], arity: int | None = None) -> GroupWord:
    """Free reduction: merge adjacent powers of one generator, drop zero exponents."""
    stack: list[list[int]] = []
    top = 0
    for g, e in raw:
        top = max(top, g)
        if not e:
            continue
        if stack and stack[-1][0] == g:
            stack[-1][1] += e
            if not stack[-1][1]:
                stack.pop()
        else:
            stack.append([g, e])
    return GroupWord(tuple((g, e) for g, e in stack), max(top, arity or 0))


_TOKEN = re.compile(r"\s*(?:(x)([1-9])(?:\s*\^\s*(-?\d+))?|(\*)|(1))")


def parse_word(text: str) -> GroupWord:
    """Letters x1..x9 with optional integer exponents, joined by juxtaposition or '*'."""
    raw = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected {text[pos:pos + 1]!r}", pos)
        if m.group(1):
            raw.append((int(m.group(2)), int(m.group(3)) if m.group(3) else 1))
        pos = m.end()
    return reduce_word(raw)


# --------------------------------------------------------------------------
# Scalar evaluation


def _inverse_sl2(x):
    a, b = x[0]
    c, d = x[1]
    return [[d, -b], [-c, a]]


def evaluate_word(w: GroupWord, args: Sequence, field: FieldSpec | None = None):
    """Value of ``w`` at SL_2 matrices ``args`` (exact scalars or ints coerced into ``field``)."""
    if len(args) < w.arity:
        raise ValueError(f"word has arity {w.arity}, got {len(args)} arguments")
    if field is not None:
        args = [[[field(v) for v in row] for row in x] for x in args]
    sample = args[0] if args else None
    if sample is None:
        one = field.one() if field else 1
        return mx.identity(2, one, one - one)
    one = sample[0][0] - sample[0][0] + 1
    out = mx.identity(2, one, one - one)
    for g, e in w.letters:
        x = args[g - 1]
        if mx.det(x) != 1:
            raise ValueError(f"argument x{g} does not have determinant 1")
        base = x if e > 0 else _inverse_sl2(x)
        for _ in range(abs(e)):
            out = mx.mat_mul(out, base)
    return out


def sl2_projection(x, field: FieldSpec | None = None):
    if field is not None and field.characteristic == 2:
        raise ZeroDivisionError("2 is not invertible in characteristic 2")
    return sl_projection(x, field)


def normalize_to_sl2(x, field: FieldSpec):
    """z = x / sqrt(det x); None when det x has no square root in ``field``."""
    x = [[field(v) for v in row] for row in x]
    root = field.sqrt(mx.det(x))
    if root is None or not root:
        return None
    inv = field.one() / root if field.kind != "Q" else 1 / root
    return mx.mat_scale(inv, x)


def _elem_key(v):
    if hasattr(v, "a"):
        return (v.a, v.b)
    return (int(v),) if not hasattr(v, "numerator") else (v,)


class ProjectiveMatrix:
    """An SL_2 matrix, compared modulo +-I when ``projective``."""

    __slots__ = ("rows", "projective", "_key")

    def __init__(self, rows, projective: bool = True):
        self.rows = tuple(tuple(r) for r in rows)
        self.projective = projective
        k1 = tuple(_elem_key(v) for r in self.rows for v in r)
        if projective:
            k2 = tuple(_elem_key(-v) for r in self.rows for v in r)
            self._key = min(k1, k2)
        else:
            self._key = k1

    def canonical(self):
        """The representative of +-rows with the lexicographically smaller entry key."""
        if self.projective and tuple(_elem_key(v) for r in self.rows for v in r) != self._key:
            return tuple(tuple(-v for v in r) for r in self.rows)
        return self.rows

    def __eq__(self, other):
        return isinstance(other, ProjectiveMatrix) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"ProjectiveMatrix({self.canonical()})"


# --------------------------------------------------------------------------
# Batched SL_2(F_p)


def sl2_elements(p: int) -> np.ndarray:
    """All of SL_2(F_p) as an (N, 2, 2) int64 array in lexicographic order."""
    g = np.array(np.meshgrid(*[np.arange(p)] * 4, indexing="ij")).reshape(4, -1).T
    det = (g[:, 0] * g[:, 3] - g[:, 1] * g[:, 2]) % p
    return g[det == 1].reshape(-1, 2, 2).astype(np.int64)


def _codes(m: np.ndarray, p: int) -> np.ndarray:
    return ((m[:, 0, 0] * p + m[:, 0, 1]) * p + m[:, 1, 0]) * p + m[:, 1, 1]


def _projective_codes(m: np.ndarray, p: int) -> np.ndarray:
    return np.minimum(_codes(m, p), _codes((-m) % p, p))


def _inverse_batch(m: np.ndarray, p: int) -> np.ndarray:
    out = np.empty_like(m)
    out[:, 0, 0] = m[:, 1, 1]
    out[:, 1, 1] = m[:, 0, 0]
    out[:, 0, 1] = (-m[:, 0, 1]) % p
    out[:, 1, 0] = (-m[:, 1, 0]) % p
    return out


def _power_batch(m: np.ndarray, e: int, p: int) -> np.ndarray:
    base = m if e > 0 else _inverse_batch(m, p)
    e = abs(e)
    out = np.broadcast_to(np.eye(2, dtype=np.int64), m.shape).copy()
    while e:
        if e & 1:
            out = np.matmul(out, base) % p
        base = np.matmul(base, base) % p
        e >>= 1
    return out


def evaluate_word_batch(w: GroupWord, args: Sequence[np.ndarray], p: int) -> np.ndarray:
    B = len(args[0]) if args else 1
    out = np.broadcast_to(np.eye(2, dtype=np.int64), (B, 2, 2)).copy()
    for g, e in w.letters:
        out = np.matmul(out, _power_batch(args[g - 1], e, p)) % p
    return out


def conjugacy_classes(p: int, projective: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """(elements, class id per element) for SL_2(F_p) or its image in PSL_2(F_p).

    In projective mode ``elements`` holds one representative per +-pair.
    """
    G = sl2_elements_cache(p)
    code_fn = _projective_codes if projective else _codes
    codes = code_fn(G, p)
    if projective:
        keep = codes == _codes(G, p)
        G, codes = G[keep], codes[keep]
    pos = {int(c): i for i, c in enumerate(codes)}
    cls = np.full(len(G), -1, dtype=np.int64)
    nxt = 0
    for i in range(len(G)):
        if cls[i] >= 0:
            continue
        conj = np.matmul(np.matmul(sl2_elements_cache(p), G[i]) % p, sl2_inverse_cache(p)) % p
        for c in np.unique(code_fn(conj, p)):
            cls[pos[int(c)]] = nxt
        nxt += 1
    return G, cls


_CACHE: dict = {}


def sl2_elements_cache(p: int) -> np.ndarray:
    if ("G", p) not in _CACHE:
        _CACHE[("G", p)] = sl2_elements(p)
    return _CACHE[("G", p)]


def sl2_inverse_cache(p: int) -> np.ndarray:
    if ("Ginv", p) not in _CACHE:
        _CACHE[("Ginv", p)] = _inverse_batch(sl2_elements_cache(p), p)
    return _CACHE[("Ginv", p)]


@dataclass
class WordCensus:
    word: str
    p: int
    projective: bool
    mode: str
    evaluations: int
    seed: int | None
    trace_hits: dict[int, bool] = field(default_factory=dict)
    flags: dict[str, bool] = field(default_factory=dict)
    classes: list[dict] = field(default_factory=list)
    image_size: int = 0
    group_size: int = 0
    class_consistent: bool = True
    all_non_unipotent_hit: bool = False
    banner: str = BANNER

    def to_record(self) -> dict:
        return {
            "word": self.word, "p": self.p, "group": ("PSL2" if self.projective else "SL2"),
            "mode": self.mode, "evaluations": self.evaluations, "seed": self.seed,
            "image_size": self.image_size, "group_size": self.group_size,
            "trace_hits": {str(k): v for k, v in sorted(self.trace_hits.items())},
            "flags": self.flags, "class_consistent": self.class_consistent,
            "all_non_unipotent_hit": self.all_non_unipotent_hit,
            "classes": self.classes, "banner": self.banner,
        }


def _named(p: int) -> dict[str, np.ndarray]:
    one = np.array([[1, 0], [0, 1]])
    e12 = np.array([[0, 1], [0, 0]])
    return {
        "I": one % p,
        "-I": (-one) % p,
        "I+e12": (one + e12) % p,
        "-I+e12": (-one + e12) % p,
    }


def word_census(w: GroupWord, p: int, projective: bool = False, mode: str = "exhaustive",
                trials: int | None = None, seed: int | None = 0,
                budget: int = DEFAULT_BUDGET) -> WordCensus:
    """Image of ``w`` on SL_2(F_p) (or PSL_2(F_p)): trace classes, named elements, classes."""
    G = sl2_elements_cache(p)
    N = len(G)
    m = max(w.arity, 1)
    code_fn = _projective_codes if projective else _codes
    hit = np.zeros(p ** 4, dtype=bool)
    if mode == "exhaustive":
        total = N ** m
        if total > budget:
            raise BudgetExceeded(f"|SL_2(F_{p})|^{m} = {total} exceeds budget {budget}")
        chunk = 1 << 16
        for start in range(0, total, chunk):
            idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
            digits = np.unravel_index(idx, (N,) * m)
            vals = evaluate_word_batch(w, [G[d] for d in digits], p)
            hit[code_fn(vals, p)] = True
        evaluations = total
    else:
        if trials is None or trials > budget:
            raise BudgetExceeded(f"{trials} trials exceeds budget {budget}")
        rng = np.random.default_rng(seed)
        idx = rng.integers(0, N, size=(trials, m))
        vals = evaluate_word_batch(w, [G[idx[:, i]] for i in range(m)], p)
        hit[code_fn(vals, p)] = True
        evaluations = trials

    elems, cls = conjugacy_classes(p, projective)
    ecodes = code_fn(elems, p)
    ehit = hit[ecodes]
    tr = (elems[:, 0, 0] + elems[:, 1, 1]) % p
    census = WordCensus(word=str(w), p=p, projective=projective, mode=mode,
                        evaluations=evaluations, seed=seed if mode == "sampled" else None)
    census.image_size = int(ehit.sum())
    census.group_size = len(elems)
    for t in range(p):
        key = min(t, (-t) % p) if projective else t
        sel = tr == t
        if sel.any():
            census.trace_hits[key] = census.trace_hits.get(key, False) or bool(ehit[sel].any())
    for name, mat in _named(p).items():
        census.flags[name] = bool(hit[code_fn(mat[None], p)[0]])
    consistent = True
    for c in range(int(cls.max()) + 1):
        members = ehit[cls == c]
        if members.any() and not members.all():
            consistent = False
        rep = elems[int(np.argmax(cls == c))]
        census.classes.append({"representative": rep.tolist(), "size": int((cls == c).sum()),
                               "trace": int(rep[0, 0] + rep[1, 1]) % p,
                               "hit": bool(members.all())})
    census.class_consistent = consistent
    scalar = (elems[:, 0, 1] == 0) & (elems[:, 1, 0] == 0) & (elems[:, 0, 0] == elems[:, 1, 1])
    unipotent = ((tr == 2 % p) | (tr == (-2) % p)) & ~scalar
    census.all_non_unipotent_hit = bool(ehit[~unipotent].all())
    return census


def exponent_sum_value(w: GroupWord, p: int):
    """If some generator has exponent sum k != 0, the value I + k e12 (others set to I)."""
    for g, k in w.exponent_sums().items():
        if k % p:
            args = [[[1, 0], [0, 1]] for _ in range(w.arity)]
            args[g - 1] = [[1, 1], [0, 1]]
            return evaluate_word(w, args, FieldSpec.prime(p)), k
    return None
