"""Evaluation of polynomials on gl_n / sl_n, value classification and censuses.

Over GF(p) tuples are evaluated in numpy batches (int64, reduced mod p after
every product).  Over Q and GF(p^2) evaluation is per tuple with exact
scalar objects.
"""
from __future__ import annotations

import enum
import itertools
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

import numpy as np

from . import matrices as mx
from .errors import BudgetExceeded, ShapeMismatch, UnassignedVariable, WrongDimension
from .fields import FieldSpec
from .freelie import AssocPolynomial, Leaf, LiePolynomial, LieTerm

DEFAULT_BUDGET = 5_000_000
CHUNK = 1 << 16


class ValueClass(enum.Enum):
    ZERO = "Zero"
    SCALAR_NONZERO = "ScalarNonzero"
    NILPOTENT_NONZERO = "NilpotentNonzero"
    TRACE_ZERO_NON_NILPOTENT = "TraceZeroNonNilpotent"
    THREE_SCALAR_NONZERO = "ThreeScalarNonzero"
    NONZERO_TRACE = "NonzeroTrace"
    OTHER = "Other"


CLASSES = list(ValueClass)
_CODE = {c: i for i, c in enumerate(CLASSES)}


@dataclass(frozen=True)
class MatrixValue:
    field: FieldSpec
    rows: tuple

    @classmethod
    def of(cls, field: FieldSpec, rows) -> "MatrixValue":
        return cls(field, tuple(tuple(field(x) for x in row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.rows)

    def as_lists(self):
        return [list(r) for r in self.rows]

    def trace(self):
        return mx.trace(self.rows)

    def det(self):
        return mx.det(self.rows)

    def is_zero(self) -> bool:
        return mx.is_zero_matrix(self.rows)

    def is_scalar(self) -> bool:
        return mx.is_scalar_matrix(self.rows)

    def is_nilpotent(self) -> bool:
        return mx.is_nilpotent(self.as_lists())

    def to_record(self):
        return [[str(x) for x in row] for row in self.rows]


def _as_rows(m):
    if isinstance(m, MatrixValue):
        return m.as_lists()
    return [list(r) for r in m]


# --------------------------------------------------------------------------
# Scalar (per tuple) evaluation


def _eval_lie_scalar(f: LiePolynomial, mats: Mapping[int, list], coerce=None) -> list:
    cache: dict = {}

    def ev(t: LieTerm):
        hit = cache.get(t)
        if hit is not None:
            return hit
        val = mats[t.var] if isinstance(t, Leaf) else mx.bracket(ev(t.left), ev(t.right))
        cache[t] = val
        return val

    total = None
    for t, c in f.terms.items():
        v = mx.mat_scale(coerce(c) if coerce else c, ev(t))
        total = v if total is None else mx.mat_add(total, v)
    if total is None:
        total = mx.zeros_like(next(iter(mats.values())))
    return total


def _trie(p: AssocPolynomial) -> dict:
    root: dict = {"c": 0, "kids": {}}
    for w, c in sorted(p.terms.items()):
        node = root
        for v in w:
            node = node["kids"].setdefault(v, {"c": 0, "kids": {}})
        node["c"] = c
    return root


def _eval_assoc_scalar(p: AssocPolynomial, mats: Mapping[int, list], coerce=None) -> list:
    sample = next(iter(mats.values()))
    n = len(sample)
    zero = sample[0][0] - sample[0][0]
    one = zero + 1
    total = mx.zeros_like(sample)

    def dfs(node, cur):
        nonlocal total
        if node["c"]:
            c = coerce(node["c"]) if coerce else node["c"]
            total = mx.mat_add(total, mx.mat_scale(c, cur))
        for v, kid in node["kids"].items():
            dfs(kid, mx.mat_mul(cur, mats[v]))

    dfs(_trie(p), mx.identity(n, one, zero))
    return total


def _check_assignment(p, assignment):
    needed = p.variables()
    missing = needed - set(assignment)
    if missing:
        raise UnassignedVariable(f"no value for variable {min(missing)}")
    shapes = {(len(m), len(m[0])) for m in assignment.values()}
    if len(shapes) != 1 or any(a != b for a, b in shapes):
        raise ShapeMismatch(f"matrices must be square and of one size, got {sorted(shapes)}")


def evaluate_poly(p: AssocPolynomial | LiePolynomial, assignment: Mapping[int, object],
                  field: FieldSpec | None = None) -> MatrixValue:
    """Exact value of ``p`` at the given matrices.

    Lie polynomials are evaluated along their bracket trees, which gives the
    same matrix as evaluating the associative expansion.
    """
    mats = {v: _as_rows(m) for v, m in assignment.items()}
    if field is None:
        mv = next((m for m in assignment.values() if isinstance(m, MatrixValue)), None)
        field = mv.field if mv is not None else FieldSpec.rational()
    mats = {v: [[field(x) for x in row] for row in m] for v, m in mats.items()}
    _check_assignment(p, mats)
    if isinstance(p, LiePolynomial):
        rows = _eval_lie_scalar(p, mats)
    else:
        rows = _eval_assoc_scalar(p, mats)
    return MatrixValue(field, tuple(tuple(r) for r in rows))


# --------------------------------------------------------------------------
# Classification


def classify2(m: MatrixValue) -> ValueClass:
    if m.n != 2:
        raise WrongDimension(f"classify2 needs a 2x2 matrix, got {m.n}x{m.n}")
    if m.is_zero():
        return ValueClass.ZERO
    if m.trace():
        return ValueClass.NONZERO_TRACE
    if m.is_scalar():
        return ValueClass.SCALAR_NONZERO
    if not m.det():
        return ValueClass.NILPOTENT_NONZERO
    return ValueClass.TRACE_ZERO_NON_NILPOTENT


def classify3(m: MatrixValue) -> ValueClass:
    """3-scalar values (eigenvalues c, c w, c w^2) need a primitive cube root w in the field."""
    if m.n != 3:
        raise WrongDimension(f"classify3 needs a 3x3 matrix, got {m.n}x{m.n}")
    if m.is_zero():
        return ValueClass.ZERO
    e1, e2, e3 = mx.elementary_symmetric(m.as_lists())
    if e1:
        return ValueClass.NONZERO_TRACE
    if m.is_scalar():
        return ValueClass.SCALAR_NONZERO
    if not e2 and not e3:
        return ValueClass.NILPOTENT_NONZERO
    if not e2:
        if m.field.primitive_cube_root() is None:
            return ValueClass.OTHER
        return ValueClass.THREE_SCALAR_NONZERO
    return ValueClass.TRACE_ZERO_NON_NILPOTENT


def classify(m: MatrixValue) -> ValueClass:
    if m.n == 2:
        return classify2(m)
    if m.n == 3:
        return classify3(m)
    if m.is_zero():
        return ValueClass.ZERO
    if m.trace():
        return ValueClass.NONZERO_TRACE
    if m.is_scalar():
        return ValueClass.SCALAR_NONZERO
    if m.is_nilpotent():
        return ValueClass.NILPOTENT_NONZERO
    return ValueClass.TRACE_ZERO_NON_NILPOTENT


def _classify_batch(vals: np.ndarray, p: int, cube_root: bool) -> np.ndarray:
    """Vectorized classify over GF(p); vals has shape (B, n, n) with entries in [0, p)."""
    B, n, _ = vals.shape
    flat = vals.reshape(B, -1)
    zero = ~flat.any(axis=1)
    tr = np.trace(vals, axis1=1, axis2=2) % p
    off = vals.copy()
    idx = np.arange(n)
    off[:, idx, idx] = 0
    scalar = ~off.reshape(B, -1).any(axis=1) & (vals[:, idx, idx] == vals[:, :1, 0]).all(axis=1)
    if n == 2:
        d = (vals[:, 0, 0] * vals[:, 1, 1] - vals[:, 0, 1] * vals[:, 1, 0]) % p
        nil = d == 0
        three = np.zeros(B, dtype=bool)
        other = np.zeros(B, dtype=bool)
    elif n == 3:
        a = vals
        e2 = (a[:, 0, 0] * a[:, 1, 1] - a[:, 0, 1] * a[:, 1, 0]
              + a[:, 0, 0] * a[:, 2, 2] - a[:, 0, 2] * a[:, 2, 0]
              + a[:, 1, 1] * a[:, 2, 2] - a[:, 1, 2] * a[:, 2, 1]) % p
        e3 = (a[:, 0, 0] * ((a[:, 1, 1] * a[:, 2, 2] - a[:, 1, 2] * a[:, 2, 1]) % p)
              - a[:, 0, 1] * ((a[:, 1, 0] * a[:, 2, 2] - a[:, 1, 2] * a[:, 2, 0]) % p)
              + a[:, 0, 2] * ((a[:, 1, 0] * a[:, 2, 1] - a[:, 1, 1] * a[:, 2, 0]) % p)) % p
        nil = (e2 == 0) & (e3 == 0)
        three = (e2 == 0) & (e3 != 0) & cube_root
        other = (e2 == 0) & (e3 != 0) & (not cube_root)
    else:
        power = vals
        for _ in range(n - 1):
            power = np.matmul(power, vals) % p
        nil = ~power.reshape(B, -1).any(axis=1)
        three = np.zeros(B, dtype=bool)
        other = np.zeros(B, dtype=bool)
    codes = np.full(B, _CODE[ValueClass.TRACE_ZERO_NON_NILPOTENT], dtype=np.int8)
    # later assignments take priority
    codes[other] = _CODE[ValueClass.OTHER]
    codes[three] = _CODE[ValueClass.THREE_SCALAR_NONZERO]
    codes[nil] = _CODE[ValueClass.NILPOTENT_NONZERO]
    codes[scalar] = _CODE[ValueClass.SCALAR_NONZERO]
    codes[tr != 0] = _CODE[ValueClass.NONZERO_TRACE]
    codes[zero] = _CODE[ValueClass.ZERO]
    return codes


# --------------------------------------------------------------------------
# Domains


def domain_elements(domain: str, n: int, field: FieldSpec) -> list:
    """All elements of sl_n or gl_n over a finite field, in canonical order."""
    if not field.is_finite:
        raise ValueError("cannot enumerate matrices over Q")
    elems = field.elements()
    free = n * n - 1 if domain == "sl" else n * n
    out = []
    for entries in itertools.product(elems, repeat=free):
        flat = list(entries)
        if domain == "sl":
            flat.append(-sum((flat[i * n + i] for i in range(n - 1)), field.zero()))
        out.append([flat[i * n:(i + 1) * n] for i in range(n)])
    return out


def _domain_array(domain: str, n: int, p: int) -> np.ndarray:
    free = n * n - 1 if domain == "sl" else n * n
    grid = np.array(list(itertools.product(range(p), repeat=free)), dtype=np.int64).reshape(-1, free)
    if domain == "sl":
        diag = grid[:, [i * n + i for i in range(n - 1)]].sum(axis=1) if n > 1 else 0
        grid = np.concatenate([grid, ((-diag) % p)[:, None]], axis=1)
    return grid.reshape(-1, n, n)


def random_domain_element(rng: random.Random, domain: str, n: int, field: FieldSpec,
                          height: int = 10):
    m = [[field.random(rng, height) for _ in range(n)] for _ in range(n)]
    if domain == "sl":
        m[n - 1][n - 1] = -sum((m[i][i] for i in range(n - 1)), field.zero())
    return m


def parse_domain(text: str) -> tuple[str, int]:
    """'sl2' -> ('sl', 2)."""
    t = text.strip().lower().replace("_", "")
    for kind in ("sl", "gl"):
        if t.startswith(kind) and t[2:].isdigit():
            return kind, int(t[2:])
    raise ValueError(f"cannot parse domain {text!r}")


# --------------------------------------------------------------------------
# Batched evaluation over GF(p)


def _coeff_mod(c: Fraction, p: int) -> int:
    if c.denominator % p == 0:
        raise ZeroDivisionError(f"coefficient {c} is undefined in characteristic {p}")
    return c.numerator * pow(c.denominator, -1, p) % p


def _eval_batch(poly, arrays: Mapping[int, np.ndarray], p: int, n: int, B: int) -> np.ndarray:
    total = np.zeros((B, n, n), dtype=np.int64)
    if isinstance(poly, LiePolynomial):
        cache: dict = {}

        def ev(t):
            hit = cache.get(t)
            if hit is not None:
                return hit
            if isinstance(t, Leaf):
                val = arrays[t.var]
            else:
                a, b = ev(t.left), ev(t.right)
                val = (np.matmul(a, b) - np.matmul(b, a)) % p
            cache[t] = val
            return val

        for t, c in poly.terms.items():
            total = (total + _coeff_mod(c, p) * ev(t)) % p
        return total

    def dfs(node, cur):
        nonlocal total
        if node["c"]:
            c = _coeff_mod(node["c"], p)
            if cur is None:
                total[:, range(n), range(n)] = (total[:, range(n), range(n)] + c) % p
            else:
                total = (total + c * cur) % p
        for v, kid in node["kids"].items():
            nxt = arrays[v] if cur is None else np.matmul(cur, arrays[v]) % p
            dfs(kid, nxt)

    dfs(_trie(poly), None)
    return total


def _variables(poly) -> list[int]:
    return sorted(poly.variables())


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("LIEIMAGES_WORKERS", "1")))
    except ValueError:
        return 1


# --------------------------------------------------------------------------
# Census


@dataclass
class Census:
    poly: str
    field: str
    domain: str
    mode: str
    trials: int
    seed: int | None
    counts: dict[str, int] = field(default_factory=dict)
    witnesses: dict[str, list] = field(default_factory=dict)
    values: dict[str, list] = field(default_factory=dict)
    note: str = ""

    @property
    def classes_hit(self) -> set[ValueClass]:
        return {ValueClass(k) for k, v in self.counts.items() if v}

    def to_record(self) -> dict:
        return {
            "poly": self.poly,
            "field": self.field,
            "domain": self.domain,
            "mode": self.mode,
            "trials": self.trials,
            "seed": self.seed,
            "counts": dict(sorted(self.counts.items())),
            "classes_hit": sorted(c.value for c in self.classes_hit),
            "witnesses": dict(sorted(self.witnesses.items())),
            "witness_values": dict(sorted(self.values.items())),
            "note": self.note,
        }


def _finite_note(field: FieldSpec) -> str:
    if field.is_finite:
        return (f"evidence only: finite field {field.name}; the statements being probed "
                "concern infinite fields")
    return "evidence only: random rational sampling"


def _iter_batches(poly, domain: str, n: int, field: FieldSpec, mode: str, trials: int | None,
                  seed: int | None, budget: int) -> Iterator[tuple]:
    """Yield (tuple_indices_or_matrices, values, codes) chunks in canonical order."""
    variables = _variables(poly)
    k = len(variables)
    if not k:
        raise ValueError("polynomial has no variables")
    if field.kind == "GF(p)":
        p = field.p
        dom = _domain_array(domain, n, p)
        d = len(dom)
        cube = field.primitive_cube_root() is not None
        if mode == "exhaustive":
            total = d ** k
            if total > budget:
                raise BudgetExceeded(f"{d}^{k} = {total} tuples exceeds budget {budget}")
            starts = range(0, total, CHUNK)

            def index_block(start):
                idx = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
                return np.stack(np.unravel_index(idx, (d,) * k), axis=1)
        else:
            if trials is None or trials > budget:
                raise BudgetExceeded(f"{trials} trials exceeds budget {budget}")
            gen = np.random.default_rng(seed)
            all_idx = gen.integers(0, d, size=(trials, k), dtype=np.int64)
            starts = range(0, trials, CHUNK)

            def index_block(start):
                return all_idx[start:start + CHUNK]

        def work(start):
            idx = index_block(start)
            B = len(idx)
            arrays = {v: dom[idx[:, i]] for i, v in enumerate(variables)}
            vals = _eval_batch(poly, arrays, p, n, B)
            return idx, vals, _classify_batch(vals, p, cube)

        workers = _workers()
        if workers > 1:
            with ThreadPoolExecutor(workers) as ex:
                yield from ex.map(work, starts)
        else:
            for s in starts:
                yield work(s)
        return

    # exact scalar route: Q (sampled) or GF(p^2)
    if mode == "exhaustive":
        dom = domain_elements(domain, n, field)
        total = len(dom) ** k
        if total > budget:
            raise BudgetExceeded(f"{len(dom)}^{k} = {total} tuples exceeds budget {budget}")
        tuples = itertools.product(dom, repeat=k)
    else:
        if trials is None or trials > budget:
            raise BudgetExceeded(f"{trials} trials exceeds budget {budget}")
        rng = random.Random(seed)
        tuples = (tuple(random_domain_element(rng, domain, n, field) for _ in variables)
                  for _ in range(trials))
    for tup in tuples:
        mats = dict(zip(variables, tup))
        val = evaluate_poly(poly, mats, field)
        yield [tup], [val], [_CODE[classify(val)]]


def _witness_record(tup):
    return [[[str(x) for x in row] for row in m] for m in tup]


def run_census(poly, domain: str = "sl", n: int = 2, field: FieldSpec | None = None,
               mode: str = "exhaustive", trials: int | None = None, seed: int | None = 0,
               budget: int = DEFAULT_BUDGET, label: str | None = None) -> Census:
    """Classify every value of ``poly`` on the domain; one witness per class hit.

    Witnesses are the first tuple in canonical (exhaustive) or sampling order.
    """
    field = field or FieldSpec.rational()
    if not field.is_finite and mode == "exhaustive":
        raise ValueError("exhaustive mode needs a finite field")
    census = Census(poly=label or repr(poly), field=field.name, domain=f"{domain}{n}",
                    mode=mode, trials=0, seed=seed if mode == "sampled" else None,
                    note=_finite_note(field))
    if n == 3 and field.primitive_cube_root() is None:
        census.note += ("; no primitive cube root of 1 in this field, so 3-scalar values "
                        "are reported as Other")
    counts = np.zeros(len(CLASSES), dtype=np.int64)
    dom = _domain_array(domain, n, field.p) if field.kind == "GF(p)" else None
    for idx, vals, codes in _iter_batches(poly, domain, n, field, mode, trials, seed, budget):
        codes = np.asarray(codes)
        counts += np.bincount(codes, minlength=len(CLASSES))
        census.trials += len(codes)
        for code in np.unique(codes):
            cls = CLASSES[code].value
            if cls in census.witnesses:
                continue
            pos = int(np.argmax(codes == code))
            if dom is not None:
                tup = [dom[i].tolist() for i in idx[pos]]
                value = vals[pos].tolist()
            else:
                tup = idx[0]
                value = vals[0].as_lists()
            census.witnesses[cls] = _witness_record(tup)
            census.values[cls] = [[str(x) for x in row] for row in value]
    census.counts = {CLASSES[i].value: int(c) for i, c in enumerate(counts) if c}
    return census


@dataclass
class NilpotentWitness:
    arguments: list
    value: list

    def to_record(self):
        return {"arguments": self.arguments, "value": self.value}


def nilpotent_value_search(poly, domain: str = "sl", n: int = 2, field: FieldSpec | None = None,
                           mode: str = "exhaustive", trials: int | None = None,
                           seed: int | None = 0,
                           budget: int = DEFAULT_BUDGET) -> NilpotentWitness | None:
    """First tuple whose value is a nonzero nilpotent matrix, or None."""
    field = field or FieldSpec.rational()
    if not poly:
        return None
    target = _CODE[ValueClass.NILPOTENT_NONZERO]
    dom = _domain_array(domain, n, field.p) if field.kind == "GF(p)" else None
    for idx, vals, codes in _iter_batches(poly, domain, n, field, mode, trials, seed, budget):
        codes = np.asarray(codes)
        hits = np.nonzero(codes == target)[0]
        if len(hits):
            pos = int(hits[0])
            if dom is not None:
                return NilpotentWitness(_witness_record([dom[i].tolist() for i in idx[pos]]),
                                        [[str(x) for x in r] for r in vals[pos].tolist()])
            return NilpotentWitness(_witness_record(idx[0]), vals[0].to_record())
    return None


def sl_projection(m, field: FieldSpec | None = None):
    """x -> x - (tr x / n) 1; requires n invertible in the field."""
    rows = _as_rows(m)
    n = len(rows)
    if field is not None:
        rows = [[field(x) for x in r] for r in rows]
        if field.characteristic and field.characteristic % n == 0:
            raise ZeroDivisionError(f"{n} is not invertible in {field.name}")
        inv_n = field(Fraction(1, n))
    else:
        inv_n = Fraction(1, n)
    shift = mx.trace(rows) * inv_n
    return [[x - shift if i == j else x for j, x in enumerate(r)] for i, r in enumerate(rows)]
