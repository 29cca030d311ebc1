"""Brauer diagrams: the basis of the virtual Temperley-Lieb algebra.

A diagram on ``n`` strands is a fixed-point-free involution ``partner`` on
``2n`` boundary points.  Points ``0..n-1`` are the top row left to right,
``n..2n-1`` the bottom row left to right.  Products stack the left factor
above the right one, so a generator word reads top to bottom.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _kernels

__all__ = [
    "Diagram",
    "CompositionResult",
    "DiagramError",
    "identity",
    "generator",
    "compose",
    "from_word",
    "through_strands",
    "closure_loops",
    "enumerate_diagrams",
    "canonical_k_element",
    "is_planar",
    "embed",
    "rank",
    "unrank",
    "double_factorial",
    "catalan",
    "class_size",
    "cup_sites",
    "cap_sites",
    "partner_array",
]


class DiagramError(ValueError):
    pass


@dataclass(frozen=True, order=True, slots=True)
class Diagram:
    n: int
    partner: tuple[int, ...]

    def __post_init__(self):
        p = self.partner
        if self.n < 1 or len(p) != 2 * self.n:
            raise DiagramError(f"partner must have length 2n, got {len(p)} for n={self.n}")
        for x, y in enumerate(p):
            if not 0 <= y < 2 * self.n or y == x or p[y] != x:
                raise DiagramError(f"partner is not a fixed-point-free involution at {x}")

    @classmethod
    def _trusted(cls, n: int, partner: tuple[int, ...]) -> "Diagram":
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "partner", partner)
        return obj

    def label(self, x: int) -> str:
        return f"T{x + 1}" if x < self.n else f"B{x - self.n + 1}"

    def pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x, y in enumerate(self.partner) if x < y]

    def __str__(self) -> str:
        return "".join(f"({self.label(x)} {self.label(y)})" for x, y in self.pairs())

    @classmethod
    def parse(cls, text: str) -> "Diagram":
        """Inverse of ``str``: ``"(T1 T2)(B1 B2)"``."""
        pairs = re.findall(r"\(\s*([TB])(\d+)\s+([TB])(\d+)\s*\)", text)
        if not pairs:
            raise DiagramError(f"cannot parse diagram {text!r}")
        n = len(pairs)
        partner = [-1] * (2 * n)

        def index(side, k):
            k = int(k) - 1
            if not 0 <= k < n:
                raise DiagramError(f"point {side}{k + 1} out of range")
            return k if side == "T" else n + k

        for s1, k1, s2, k2 in pairs:
            x, y = index(s1, k1), index(s2, k2)
            partner[x], partner[y] = y, x
        return cls(n, tuple(partner))

    def to_json(self) -> dict:
        return {"n": self.n, "partner": list(self.partner)}

    @classmethod
    def from_json(cls, obj: dict) -> "Diagram":
        return cls(int(obj["n"]), tuple(int(x) for x in obj["partner"]))


class CompositionResult(NamedTuple):
    diagram: Diagram
    loops: int


def identity(n: int) -> Diagram:
    return Diagram._trusted(n, tuple(range(n, 2 * n)) + tuple(range(n)))


def generator(n: int, kind: str, i: int | None = None) -> Diagram:
    """``1_n``, the cup-cap ``e_i`` or the virtual crossing ``v_i`` (1-based ``i``)."""
    if kind == "identity":
        if n < 1:
            raise DiagramError("n must be positive")
        return identity(n)
    if kind not in ("e", "v"):
        raise DiagramError(f"unknown generator kind {kind!r}")
    if i is None or not 1 <= i <= n - 1:
        raise DiagramError(f"generator index {i} out of range 1..{n - 1}")
    p = list(identity(n).partner)
    a, b = i - 1, i
    if kind == "e":
        p[a], p[b] = b, a
        p[n + a], p[n + b] = n + b, n + a
    else:
        p[a], p[n + b] = n + b, a
        p[b], p[n + a] = n + a, b
    return Diagram._trusted(n, tuple(p))


def compose(a: Diagram, b: Diagram) -> CompositionResult:
    """Stack ``a`` above ``b``; closed curves in the middle are removed and counted."""
    if a.n != b.n:
        raise DiagramError(f"strand mismatch: {a.n} vs {b.n}")
    n = a.n
    pa, pb = a.partner, b.partner
    out = [-1] * (2 * n)
    seen = [False] * n
    for t in range(n):
        if out[t] >= 0:
            continue
        q = pa[t]
        while q >= n:
            seen[q - n] = True
            r = pb[q - n]
            if r >= n:
                q = r
                break
            seen[r] = True
            q = pa[n + r]
        out[t], out[q] = q, t
    for j in range(n, 2 * n):
        if out[j] >= 0:
            continue
        r = pb[j]
        while r < n:
            seen[r] = True
            q = pa[n + r]
            if q < n:
                r = q
                break
            seen[q - n] = True
            r = pb[q - n]
        out[j], out[r] = r, j
    loops = 0
    for m in range(n):
        if seen[m]:
            continue
        loops += 1
        cur = m
        while True:
            seen[cur] = True
            m2 = pa[n + cur] - n
            seen[m2] = True
            cur = pb[m2]
            if cur == m:
                break
    return CompositionResult(Diagram._trusted(n, tuple(out)), loops)


_WORD_TOKEN = re.compile(r"([ev])_?(\d+)")


def from_word(n: int, word: str | Iterable[tuple[str, int]]) -> CompositionResult:
    """Compose a generator word such as ``"e1 v2 e1"`` left to right."""
    if isinstance(word, str):
        tokens = [(k, int(i)) for k, i in _WORD_TOKEN.findall(word)]
    else:
        tokens = list(word)
    acc = identity(n)
    loops = 0
    for kind, i in tokens:
        acc, extra = compose(acc, generator(n, kind, i))
        loops += extra
    return CompositionResult(acc, loops)


def through_strands(a: Diagram) -> int:
    return sum(1 for t in range(a.n) if a.partner[t] >= a.n)


def closure_loops(a: Diagram) -> int:
    """Closed curves after joining top ``k`` to bottom ``k`` outside the box."""
    n = a.n
    seen = [False] * (2 * n)
    loops = 0
    for x in range(2 * n):
        if seen[x]:
            continue
        loops += 1
        cur = x
        while True:
            seen[cur] = True
            y = a.partner[cur]
            seen[y] = True
            cur = y - n if y >= n else y + n
            if cur == x:
                break
    return loops


def embed(a: Diagram, m: int) -> Diagram:
    """Add ``m - n`` vertical strands on the right."""
    n = a.n
    if m < n:
        raise DiagramError(f"cannot embed {n} strands into {m}")
    if m == n:
        return a

    def move(x):
        return x if x < n else x - n + m

    p = [0] * (2 * m)
    for x, y in enumerate(a.partner):
        p[move(x)] = move(y)
    for t in range(n, m):
        p[t], p[m + t] = m + t, t
    return Diagram._trusted(m, tuple(p))


def is_planar(a: Diagram) -> bool:
    """True iff no two arcs interleave around the boundary of the rectangle."""
    n = a.n
    # walk the boundary: top left to right, then bottom right to left
    pos = list(range(n)) + [2 * n - 1 - j for j in range(n)]
    order = sorted(range(2 * n), key=pos.__getitem__)
    stack: list[int] = []
    for x in order:
        y = a.partner[x]
        if pos[y] < pos[x]:
            if not stack or stack[-1] != y:
                return False
            stack.pop()
        else:
            stack.append(x)
    return True


def canonical_k_element(n: int, k: int) -> Diagram:
    """``e_{k+1} e_{k+3} ... e_{n-1}``: ``k`` vertical strands then cup-cap pairs."""
    _check_class(n, k)
    p = list(identity(n).partner)
    for s in range(k, n, 2):
        p[s], p[s + 1] = s + 1, s
        p[n + s], p[n + s + 1] = n + s + 1, n + s
    return Diagram._trusted(n, tuple(p))


def cup_sites(a: Diagram) -> list[int]:
    """1-based sites ``i`` with a top arc joining points ``i`` and ``i+1``."""
    return [t + 1 for t in range(a.n - 1) if a.partner[t] == t + 1]


def cap_sites(a: Diagram) -> list[int]:
    """1-based sites ``i`` with a bottom arc joining points ``i`` and ``i+1``."""
    n = a.n
    return [j + 1 for j in range(n - 1) if a.partner[n + j] == n + j + 1]


def _check_class(n: int, k: int) -> None:
    if n < 1:
        raise DiagramError("n must be positive")
    if not 0 <= k <= n or (n - k) % 2:
        raise DiagramError(f"through-strand count {k} invalid for n={n} (need 0<=k<=n, k=n mod 2)")


def double_factorial(m: int) -> int:
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def class_size(n: int, l: int) -> int:
    """Number of diagrams with ``l`` cup-cap pairs, i.e. ``n - 2l`` through strands."""
    k = n - 2 * l
    return (
        math.comb(n, 2 * l) ** 2
        * double_factorial(2 * l - 1) ** 2
        * math.factorial(k)
    )


def partner_array(diagrams: Sequence[Diagram]) -> np.ndarray:
    if not diagrams:
        return np.zeros((0, 0), dtype=np.int64)
    return np.array([d.partner for d in diagrams], dtype=np.int64)


def rank(a: Diagram) -> int:
    return int(_kernels.rank_rows(np.array(a.partner), a.n)[0])


def unrank(n: int, r: int) -> Diagram:
    if not 0 <= r < _kernels.dimension(n):
        raise DiagramError(f"rank {r} out of range for n={n}")
    row = _kernels.unrank_rows(np.array([r]), n)[0]
    return Diagram._trusted(n, tuple(int(x) for x in row))


@lru_cache(maxsize=16)
def _all_rows(n: int) -> np.ndarray:
    rows = _kernels.unrank_rows(np.arange(_kernels.dimension(n)), n)
    rows = rows.astype(np.int8)
    rows.setflags(write=False)
    return rows


def rows_for(n: int, k: int | None = None) -> np.ndarray:
    """Partner rows of all diagrams (optionally with ``k`` through strands), in rank order."""
    rows = _all_rows(n)
    if k is None:
        return rows
    _check_class(n, k)
    return rows[_kernels.through_strands_rows(rows, n) == k]


def enumerate_diagrams(n: int, k: int | None = None) -> list[Diagram]:
    """All diagrams in lexicographic partner order, or only the ``k``-elements."""
    if n < 1:
        raise DiagramError("n must be positive")
    rows = rows_for(n, k)
    return [Diagram._trusted(n, tuple(int(x) for x in r)) for r in rows.tolist()]
