"""Linear combinations of diagrams over Q(d), and their numeric specializations.

Products are computed by grouping the terms of each factor by coefficient.
The batch kernels then only count, for every pair of coefficient classes,
how often each result diagram arises with each number of removed loops; the
field arithmetic runs once per distinct count pattern.  Projectors have a
handful of distinct coefficients, so this keeps exact products of tens of
thousands of terms cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping

import numpy as np

from . import _kernels
from .diagram import (
    Diagram,
    DiagramError,
    canonical_k_element,
    class_size,
    closure_loops,
    embed,
    enumerate_diagrams,
    generator,
    identity,
    partner_array,
    rows_for,
    through_strands,
)
from .exactfield import ONE, ZERO, PoleError, Polynomial, RationalFunction, rf_eval

__all__ = [
    "Element",
    "NumericElement",
    "ClassTable",
    "ClassNonUniformError",
    "element_combine",
    "element_mul",
    "markov_trace",
    "class_decompose",
    "class_expand",
    "element_eval",
    "class_mul",
    "class_structure",
]

# largest dense histogram (entries) before switching to sorted sparse keys
DENSE_LIMIT = 1 << 25


class ClassNonUniformError(ValueError):
    """Raised by :func:`class_decompose`; ``witness`` holds two diagrams of one class."""

    def __init__(self, message: str, witness: tuple[Diagram, Diagram]):
        super().__init__(message)
        self.witness = witness


class _Combination:
    __slots__ = ("n", "terms", "_groups")

    def __init__(self, n: int, terms: Mapping[Diagram, object] | None = None):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        clean = {}
        for dia, c in (terms or {}).items():
            if dia.n != n:
                raise DiagramError(f"diagram on {dia.n} strands in element on {n}")
            c = self._coerce(c)
            if c:
                clean[dia] = c
        self.terms: dict[Diagram, object] = clean
        self._groups = None

    @classmethod
    def _raw(cls, n, terms, **extra):
        obj = object.__new__(cls)
        obj.n = n
        obj.terms = terms
        obj._groups = None
        for k, v in extra.items():
            setattr(obj, k, v)
        return obj

    # hooks ---------------------------------------------------------------
    def _coerce(self, c):
        raise NotImplementedError

    def _like(self, terms: dict) -> "_Combination":
        raise NotImplementedError

    def _loop_value(self, counts) -> object:
        """Sum of ``counts[L] * d**L`` in the coefficient field."""
        raise NotImplementedError

    def _compatible(self, other) -> None:
        if type(self) is not type(other):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if self.n != other.n:
            raise DiagramError(f"strand mismatch: {self.n} vs {other.n}")

    # container -----------------------------------------------------------
    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Diagram]:
        return iter(self.terms)

    def items(self):
        return self.terms.items()

    def coeff(self, dia: Diagram):
        return self.terms.get(dia, self._coerce(0))

    def support(self) -> set[Diagram]:
        return set(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_items(self) -> list[tuple[Diagram, object]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].partner)

    # linear structure ----------------------------------------------------
    def __eq__(self, other) -> bool:
        if type(self) is not type(other):
            return NotImplemented
        return self.n == other.n and self._key() == other._key() and self.terms == other.terms

    def _key(self):
        return None

    __hash__ = None

    def __add__(self, other):
        self._compatible(other)
        out = dict(self.terms)
        for dia, c in other.terms.items():
            s = out.get(dia)
            s = c if s is None else s + c
            if s:
                out[dia] = s
            else:
                out.pop(dia, None)
        return self._like(out)

    def __neg__(self):
        return self._like({d: -c for d, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        s = self._coerce(s)
        if not s:
            return self._like({})
        return self._like({d: c * s for d, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, _Combination):
            return _multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def embed(self, m: int):
        """Add vertical strands on the right, landing in ``m`` strands."""
        return self._like_n(m, {embed(d, m): c for d, c in self.terms.items()})

    def _like_n(self, n, terms):
        raise NotImplementedError

    # batch views ---------------------------------------------------------
    def _grouped(self):
        """Distinct coefficients, class id per term, partner rows (term order)."""
        if self._groups is None:
            index: dict = {}
            ids = np.empty(len(self.terms), dtype=np.int64)
            rows = np.empty((len(self.terms), 2 * self.n), dtype=np.int64)
            for t, (dia, c) in enumerate(self.terms.items()):
                ids[t] = index.setdefault(c, len(index))
                rows[t] = dia.partner
            self._groups = (list(index), ids, rows)
        return self._groups

    def text_lines(self) -> list[str]:
        return [f"{c}\t{d}" for d, c in self.sorted_items()]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{d}" for d, c in self.sorted_items())

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, terms={len(self.terms)})"


class Element(_Combination):
    """An element of VTL_n(d): a finite map from diagrams to Q(d)."""

    __slots__ = ()

    def _coerce(self, c):
        return RationalFunction.coerce(c)

    def _like(self, terms):
        return Element._raw(self.n, terms)

    def _like_n(self, n, terms):
        return Element._raw(n, terms)

    def _loop_value(self, counts):
        return RationalFunction.coerce(Polynomial(counts))

    @classmethod
    def basis(cls, dia: Diagram, coeff=ONE) -> "Element":
        return cls(dia.n, {dia: coeff})

    @classmethod
    def identity(cls, n: int) -> "Element":
        return cls.basis(identity(n))

    @classmethod
    def generator(cls, n: int, kind: str, i: int | None = None) -> "Element":
        return cls.basis(generator(n, kind, i))

    @classmethod
    def zero(cls, n: int) -> "Element":
        return cls._raw(n, {})

    def evaluate(self, v) -> "NumericElement":
        return element_eval(self, v)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                {"partner": list(d.partner), "coeff": c.to_json()}
                for d, c in self.sorted_items()
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Element":
        n = int(obj["n"])
        terms = {}
        for t in obj["terms"]:
            dia = Diagram(n, tuple(int(x) for x in t["partner"]))
            terms[dia] = RationalFunction.from_json(t["coeff"])
        return cls(n, terms)


class NumericElement(_Combination):
    """An element of VTL_n specialized at ``d = point``; coefficients are Fractions."""

    __slots__ = ("point",)

    def __init__(self, n: int, point, terms=None):
        self.point = Fraction(point)
        super().__init__(n, terms)

    def _coerce(self, c):
        if isinstance(c, RationalFunction):
            return rf_eval(c, self.point)
        return Fraction(c)

    def _like(self, terms):
        return NumericElement._raw(self.n, terms, point=self.point)

    def _like_n(self, n, terms):
        return NumericElement._raw(n, terms, point=self.point)

    def _key(self):
        return self.point

    def _compatible(self, other):
        super()._compatible(other)
        if self.point != other.point:
            raise ValueError(f"evaluation points differ: {self.point} vs {other.point}")

    def _loop_value(self, counts):
        acc = Fraction(0)
        for c in reversed(counts):
            acc = acc * self.point + int(c)
        return acc

    def __repr__(self) -> str:
        return f"NumericElement(n={self.n}, point={self.point}, terms={len(self.terms)})"


# ---------------------------------------------------------------- products


def _sparse_keys(A, B, wa, wb, n, L):
    step = max(1, (1 << 22) // max(len(B), 1))
    keys_acc = np.zeros(0, dtype=np.int64)
    cnt_acc = np.zeros(0, dtype=np.int64)
    for lo in range(0, len(A), step):
        keys = _kernels.pair_keys(A[lo : lo + step], B, wa[lo : lo + step], wb, n, L)
        uk, c = np.unique(keys, return_counts=True)
        keys_acc = np.concatenate([keys_acc, uk])
        cnt_acc = np.concatenate([cnt_acc, c])
        if len(keys_acc) > (1 << 23):
            keys_acc, cnt_acc = _merge(keys_acc, cnt_acc)
    return _merge(keys_acc, cnt_acc)


def _merge(keys, cnt):
    if not len(keys):
        return keys, cnt
    order = np.argsort(keys, kind="stable")
    keys, cnt = keys[order], cnt[order]
    starts = np.concatenate([[0], np.flatnonzero(np.diff(keys)) + 1])
    return keys[starts], np.add.reduceat(cnt, starts)


def _multiply(a: _Combination, b: _Combination) -> _Combination:
    a._compatible(b)
    n = a.n
    if not a.terms or not b.terms:
        return a._like({})
    ka, ia, A = a._grouped()
    kb, ib, B = b._grouped()
    R = _kernels.dimension(n)
    L = n + 1
    Kb = len(kb)
    stride = R * L
    space = len(ka) * Kb * stride
    if space >= 1 << 62:
        raise OverflowError("product key space too large")
    wa = ia * (Kb * stride)
    wb = ib * stride
    pairs = len(A) * len(B)
    if space <= DENSE_LIMIT and space <= 8 * pairs + (1 << 16):
        counts = _kernels.accumulate(A, B, wa, wb, n, L, space)
        keys = np.flatnonzero(counts)
        cnt = counts[keys]
    else:
        keys, cnt = _sparse_keys(A, B, wa, wb, n, L)

    loops = keys % L
    rest = keys // L
    ranks = rest % R
    pc = rest // R
    order = np.lexsort((loops, pc, ranks))
    ranks, pc, loops, cnt = ranks[order], pc[order], loops[order], cnt[order]
    starts = np.concatenate([[0], np.flatnonzero(np.diff(ranks)) + 1])
    ends = np.concatenate([starts[1:], [len(ranks)]])
    rec = np.ascontiguousarray(np.stack([pc, loops, cnt], axis=1))

    patterns: dict[bytes, list[int]] = {}
    for s, e in zip(starts.tolist(), ends.tolist()):
        patterns.setdefault(rec[s:e].tobytes(), []).append(s)

    products: dict[int, object] = {}
    result_ranks: list[int] = []
    result_coeffs: list[object] = []
    for blob, firsts in patterns.items():
        block = np.frombuffer(blob, dtype=np.int64).reshape(-1, 3)
        total = None
        for p in np.unique(block[:, 0]).tolist():
            sel = block[block[:, 0] == p]
            poly = [0] * (int(sel[:, 1].max()) + 1)
            for _, lp, c in sel.tolist():
                poly[lp] += c
            prod = products.get(p)
            if prod is None:
                prod = products[p] = ka[p // Kb] * kb[p % Kb]
            term = prod * a._loop_value(poly)
            total = term if total is None else total + term
        if total:
            for s in firsts:
                result_ranks.append(int(ranks[s]))
                result_coeffs.append(total)

    if not result_ranks:
        return a._like({})
    order = np.argsort(result_ranks, kind="stable")
    rows = _kernels.unrank_rows(np.asarray(result_ranks)[order], n).tolist()
    terms = {
        Diagram._trusted(n, tuple(row)): result_coeffs[i]
        for row, i in zip(rows, order.tolist())
    }
    return a._like(terms)


# ---------------------------------------------------------------- public functions


def element_combine(a: _Combination, b: _Combination, s, t) -> _Combination:
    """``s*a + t*b``."""
    a._compatible(b)
    return a.scale(s) + b.scale(t)


def element_mul(a: _Combination, b: _Combination) -> _Combination:
    return _multiply(a, b)


def markov_trace(a: _Combination):
    """Sum of ``coeff * d**closure_loops`` over the terms of ``a``."""
    if not a.terms:
        return a._coerce(0)
    ka, ids, rows = a._grouped()
    loops = _kernels.closure_loops_rows(rows, a.n)
    hist = np.zeros((len(ka), a.n + 1), dtype=np.int64)
    np.add.at(hist, (ids, loops), 1)
    total = a._coerce(0)
    for cid, c in enumerate(ka):
        total = total + c * a._loop_value(hist[cid].tolist())
    return total


def element_eval(a: Element, v) -> NumericElement:
    """Coefficient-wise value at ``d = v``; a pole raises PoleError naming the term."""
    v = Fraction(v)
    cache: dict = {}
    terms = {}
    for dia, c in a.terms.items():
        val = cache.get(c)
        if val is None:
            try:
                val = cache[c] = rf_eval(c, v)
            except PoleError as exc:
                raise PoleError(f"{exc} (coefficient of {dia})", exc.point, exc.factor) from None
        if val:
            terms[dia] = val
    return NumericElement._raw(a.n, terms, point=v)


@dataclass
class ClassTable:
    """Coefficient of each through-strand class: ``l`` cup-cap pairs -> coefficient."""

    n: int
    coeff: dict[int, object]
    point: Fraction | None = field(default=None)

    def __post_init__(self):
        want = set(range(self.n // 2 + 1))
        if set(self.coeff) != want:
            raise ValueError(f"class table keys must be exactly 0..{self.n // 2}")
        if self.point is None:
            self.coeff = {l: RationalFunction.coerce(c) for l, c in self.coeff.items()}
        else:
            self.point = Fraction(self.point)
            self.coeff = {
                l: rf_eval(c, self.point) if isinstance(c, RationalFunction) else Fraction(c)
                for l, c in self.coeff.items()
            }

    def __getitem__(self, l: int):
        return self.coeff[l]

    def expand(self) -> _Combination:
        return class_expand(self)

    def evaluate(self, v) -> "ClassTable":
        return ClassTable(self.n, dict(self.coeff), point=Fraction(v))

    def to_json(self) -> dict:
        def enc(c):
            return c.to_json() if isinstance(c, RationalFunction) else str(c)

        out = {"n": self.n, "coeffs": [{"l": l, "coeff": enc(self.coeff[l])} for l in sorted(self.coeff)]}
        if self.point is not None:
            out["point"] = str(self.point)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ClassTable":
        point = obj.get("point")
        coeff = {}
        for entry in obj["coeffs"]:
            c = entry["coeff"]
            coeff[int(entry["l"])] = (
                RationalFunction.from_json(c) if isinstance(c, dict) else Fraction(c)
            )
        return cls(int(obj["n"]), coeff, None if point is None else Fraction(point))

    def render(self, name: str = "f") -> str:
        """One line in the style ``f_3 = (1/6)[3]_3 - (1/(3(d+2)))[1]_3``."""
        parts = []
        for l in sorted(self.coeff):
            c = self.coeff[l]
            if not c:
                continue
            k = self.n - 2 * l
            basis = f"{k}_{k}" if self.n == 1 else f"[{k}]_{self.n}"
            text = str(c)
            sign = "-" if text.startswith("-") else "+"
            mag = str(-c) if sign == "-" else text
            body = basis if mag == "1" else f"({mag}){basis}"
            parts.append((sign, body))
        if not parts:
            return f"{name}_{self.n} = 0"
        first_sign, first = parts[0]
        line = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            line += f" {sign} {body}"
        return f"{name}_{self.n} = {line}"

    def __str__(self) -> str:
        return self.render()


def class_decompose(a: _Combination) -> ClassTable:
    """Compress a class-uniform element into its per-class coefficients."""
    n = a.n
    zero = a._coerce(0)
    items = list(a.terms.items())
    ts = (
        _kernels.through_strands_rows(a._grouped()[2], n)
        if items
        else np.zeros(0, dtype=np.int64)
    )
    table = {}
    for l in range(n // 2 + 1):
        k = n - 2 * l
        members = [items[i] for i in np.flatnonzero(ts == k).tolist()]
        if not members:
            table[l] = zero
            continue
        d0, c0 = members[0]
        for dia, c in members[1:]:
            if c != c0:
                raise ClassNonUniformError(
                    f"class [{k}]_{n} not uniform: {d0} has {c0}, {dia} has {c}", (d0, dia)
                )
        if len(members) != class_size(n, l):
            present = a.terms
            missing = next(d for d in enumerate_diagrams(n, k) if d not in present)
            raise ClassNonUniformError(
                f"class [{k}]_{n} not uniform: {d0} has {c0}, {missing} has 0", (d0, missing)
            )
        table[l] = c0
    point = getattr(a, "point", None)
    return ClassTable(n, table, point)


def class_expand(t: ClassTable) -> _Combination:
    """``sum_l coeff(l) * [n-2l]_n`` as a full element."""
    terms = {}
    for l in sorted(t.coeff):
        c = t.coeff[l]
        if not c:
            continue
        for row in rows_for(t.n, t.n - 2 * l).tolist():
            terms[Diagram._trusted(t.n, tuple(row))] = c
    if t.point is None:
        return Element._raw(t.n, terms)
    return NumericElement._raw(t.n, terms, point=t.point)


@lru_cache(maxsize=None)
def class_structure(n: int) -> dict[tuple[int, int], dict[int, Polynomial]]:
    """Structure constants ``[n-2l]_n [n-2m]_n = sum_p N[l,m][p](d) [n-2p]_n``.

    Class sums are invariant under left and right multiplication by
    permutation diagrams, and each class is a single orbit of that two-sided
    action.  Hence ``[k][k'] = (|class k'| / n!) ([k] CE_k') [n]_n``, and only
    the coefficient at one canonical element per target class is needed.
    """
    perms = rows_for(n, n)
    nfact = math.factorial(n)
    L = n + 1
    reps = {l: np.array([canonical_k_element(n, n - 2 * l).partner]) for l in range(n // 2 + 1)}
    # canonical element times every permutation; no loops can form
    z_ranks = {p: _kernels.compose_rows(reps[p], perms, n)[0][0] for p in reps}
    out: dict[tuple[int, int], dict[int, Polynomial]] = {}
    for l in reps:
        cls_rows = rows_for(n, n - 2 * l)
        for m in reps:
            r, lp = _kernels.compose_rows(cls_rows, reps[m], n)
            keys, cnt = np.unique(r[:, 0] * L + lp[:, 0], return_counts=True)
            uranks = np.unique(keys // L)
            table = np.zeros((len(uranks), L), dtype=np.int64)
            table[np.searchsorted(uranks, keys // L), keys % L] = cnt
            scale = Fraction(class_size(n, m), nfact)
            entry = {}
            for p in reps:
                zr = z_ranks[p]
                pos = np.searchsorted(uranks, zr)
                pos = np.minimum(pos, len(uranks) - 1)
                hit = uranks[pos] == zr
                counts = table[pos[hit]].sum(axis=0)
                entry[p] = Polynomial(Fraction(int(c)) * scale for c in counts)
            out[(l, m)] = entry
    return out


def class_mul(s: ClassTable, t: ClassTable) -> ClassTable:
    """Product of two class-uniform elements given as class tables."""
    if s.n != t.n:
        raise DiagramError(f"strand mismatch: {s.n} vs {t.n}")
    if s.point != t.point:
        raise ValueError("class tables specialized at different points")
    N = class_structure(s.n)
    point = s.point
    zero = RationalFunction.coerce(0) if point is None else Fraction(0)
    acc = {p: zero for p in s.coeff}
    for (l, m), entry in N.items():
        sl, tm = s.coeff[l], t.coeff[m]
        if not sl or not tm:
            continue
        w = sl * tm
        for p, poly in entry.items():
            if not poly:
                continue
            val = RationalFunction.coerce(poly) if point is None else poly(point)
            acc[p] = acc[p] + w * val
    return ClassTable(s.n, acc, point)
