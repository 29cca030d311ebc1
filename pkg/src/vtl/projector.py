"""Scalar sequences and projector constructions.

``f_n`` is built three ways: the defining recursion through ``f_{n-1}``, the
factorization ``f_n = f_{n-1} f^K_n`` with the small kernel factor, and the
per-class closed form.  Jones-Wenzl projectors sit alongside as the planar
baseline.
"""

from __future__ import annotations

import itertools
import math
import threading
from fractions import Fraction
from typing import Callable

from .algebra import ClassTable, Element
from .diagram import Diagram, DiagramError, _check_class, compose, from_word, identity
from .exactfield import D, ONE, ZERO, Polynomial, RationalFunction

__all__ = [
    "x_seq",
    "y_seq",
    "z_seq",
    "alpha",
    "alpha_closed",
    "delta",
    "jones_wenzl",
    "f_recursive",
    "f_kernel",
    "f_simplified",
    "coeff_explicit",
    "f_explicit",
    "coeff_ce_recursive",
    "trace_closed_form",
    "kernel_support",
    "u_set",
    "clear_cache",
]


# ---------------------------------------------------------------- scalars


def x_seq(i: int) -> RationalFunction:
    return RationalFunction.coerce(Fraction(1, i + 1))


def z_seq(i: int) -> RationalFunction:
    return RationalFunction.coerce(Fraction(i, i + 1))


def y_seq(i: int) -> RationalFunction:
    if i == 0:
        return ZERO
    return RationalFunction.coerce(-2 * i) / ((i + 1) * (D + (2 * i - 2)))


def alpha(i: int) -> RationalFunction:
    """``x_i d + y_i + z_i``."""
    return x_seq(i) * D + y_seq(i) + z_seq(i)


def alpha_closed(i: int) -> RationalFunction:
    """Factored form ``(d+i-2)(d+2i)/((i+1)(d+2i-2))`` of ``alpha(i)``."""
    return (D + (i - 2)) * (D + 2 * i) / ((i + 1) * (D + (2 * i - 2)))


def delta(i: int) -> Polynomial:
    """Chebyshev polynomial: ``delta(i) = d delta(i-1) - delta(i-2)``, ``delta(0)=1``, ``delta(-1)=0``."""
    if i < -1:
        raise ValueError("delta defined for i >= -1")
    prev, cur = Polynomial(()), Polynomial((1,))
    if i == -1:
        return prev
    d = Polynomial((0, 1))
    for _ in range(i):
        prev, cur = cur, d * cur - prev
    return cur


# ---------------------------------------------------------------- cache

_cache: dict = {}
_cache_locks: dict = {}
_cache_guard = threading.Lock()


def _cached(variant: str, n: int, build: Callable[[], object]):
    """Compute ``build()`` at most once per ``(variant, n)``, even across threads."""
    key = (variant, n)
    hit = _cache.get(key)
    if hit is not None:
        return hit
    with _cache_guard:
        lock = _cache_locks.setdefault(key, threading.Lock())
    with lock:
        hit = _cache.get(key)
        if hit is None:
            hit = _cache[key] = build()
    return hit


def clear_cache() -> None:
    with _cache_guard:
        _cache.clear()
        _cache_locks.clear()


def _check_n(n: int, low: int = 1) -> None:
    if not isinstance(n, int) or n < low:
        raise ValueError(f"n must be an integer >= {low}, got {n!r}")


# ---------------------------------------------------------------- constructions


def _gen(n: int, kind: str, i: int) -> Element:
    return Element.generator(n, kind, i)


def jones_wenzl(n: int, ambient: int | None = None) -> Element:
    """``P_n`` inside ``TL_ambient`` (default ``ambient = n``)."""
    _check_n(n)
    m = n if ambient is None else ambient
    if m < n:
        raise ValueError(f"ambient {m} smaller than {n}")
    if m != n:
        return jones_wenzl(n).embed(m)

    def build():
        if n == 1:
            return Element.identity(1)
        P = jones_wenzl(n - 1).embed(n)
        i = n - 1
        ratio = RationalFunction.coerce(delta(i - 1)) / RationalFunction.coerce(delta(i))
        return P - (P * _gen(n, "e", i) * P).scale(ratio)

    return _cached("jones_wenzl", n, build)


def f_recursive(n: int) -> Element:
    """``f_n = x F + y F e F + z F v F`` with ``F = f_{n-1}`` on ``n`` strands."""
    _check_n(n)

    def build():
        if n == 1:
            return Element.identity(1)
        F = f_recursive(n - 1).embed(n)
        i = n - 1
        FeF = (F * _gen(n, "e", i)) * F
        FvF = (F * _gen(n, "v", i)) * F
        return F.scale(x_seq(i)) + FeF.scale(y_seq(i)) + FvF.scale(z_seq(i))

    return _cached("recursive", n, build)


def f_kernel(n: int) -> Element:
    """Kernel factor ``f^K_n = x 1 + y e_{n-1} f^K_{n-1} + z v_{n-1} f^K_{n-1}``, ``f^K_1 = 1``."""
    _check_n(n)

    def build():
        if n == 1:
            return Element.identity(1)
        K = f_kernel(n - 1).embed(n)
        i = n - 1
        return (
            Element.identity(n).scale(x_seq(i))
            + (_gen(n, "e", i) * K).scale(y_seq(i))
            + (_gen(n, "v", i) * K).scale(z_seq(i))
        )

    return _cached("kernel", n, build)


def f_simplified(n: int) -> Element:
    """``f_n = f_{n-1} f^K_n``, each step reusing the previous result."""
    _check_n(n)

    def build():
        if n == 1:
            return Element.identity(1)
        return f_simplified(n - 1).embed(n) * f_kernel(n)

    return _cached("simplified", n, build)


def coeff_explicit(n: int, l: int) -> RationalFunction:
    """Closed-form coefficient of the class with ``l`` cup-cap pairs."""
    _check_n(n)
    if not 0 <= l <= n // 2:
        raise ValueError(f"l={l} outside 0..{n // 2}")
    den = RationalFunction.coerce(math.factorial(n))
    for i in range(1, l + 1):
        den = den * (D + (2 * n - 2 - 2 * i))
    return RationalFunction.coerce((-2) ** l * math.factorial(l)) / den


def f_explicit(n: int) -> ClassTable:
    _check_n(n)
    return _cached("explicit", n, lambda: ClassTable(n, {l: coeff_explicit(n, l) for l in range(n // 2 + 1)}))


def coeff_ce_recursive(n: int, k: int) -> RationalFunction:
    """Coefficient of the canonical ``k``-element, by recursion on ``n``."""
    try:
        _check_class(n, k)
    except DiagramError as exc:
        raise ValueError(str(exc)) from None
    if k == n:
        return RationalFunction.coerce(Fraction(1, math.factorial(n)))
    step = RationalFunction.coerce(-2) / (n * (D + (2 * n - 4)))
    return step * ((n - k) // 2) * coeff_ce_recursive(n - 1, k + 1)


TRACE_VARIANTS = ("d_power", "alpha_product")


def trace_closed_form(n: int, variant: str) -> RationalFunction:
    """Candidate closed forms for the trace of ``f_n``.

    ``d_power``: ``d^(n-1) (d+2n-2) prod_{i<n}(d+i-2) / n!``.
    ``alpha_product``: ``d * prod_{i<n} alpha(i)``.
    """
    _check_n(n)
    if variant == "d_power":
        out = RationalFunction.coerce(D ** (n - 1)) * (D + (2 * n - 2))
        for i in range(1, n):
            out = out * (D + (i - 2))
        return out / math.factorial(n)
    if variant == "alpha_product":
        out = D
        for i in range(1, n):
            out = out * alpha(i)
        return out
    raise ValueError(f"unknown trace variant {variant!r}; expected one of {TRACE_VARIANTS}")


# ---------------------------------------------------------------- kernel support


def _word_diagram(n: int, word: list[tuple[str, int]]) -> Diagram:
    res = from_word(n, word)
    if res.loops:
        raise AssertionError(f"word {word} produced loops")
    return res.diagram


def kernel_words(n: int) -> list[list[tuple[str, int]]]:
    """Generator words ``U_{n-1} ... U_i`` (``U_j`` in ``{e_j, v_j}``) plus the empty word."""
    _check_n(n)
    words: list[list[tuple[str, int]]] = [[]]
    for i in range(1, n):
        span = range(n - 1, i - 1, -1)
        for kinds in itertools.product("ev", repeat=n - i):
            words.append(list(zip(kinds, span)))
    return words


def kernel_support(n: int) -> list[Diagram]:
    """Diagrams of the kernel words, one per word (duplicates kept, so callers can test distinctness)."""
    return [_word_diagram(n, w) for w in kernel_words(n)]


def u_set(m: int, i: int) -> list[Diagram]:
    """``U_{m-1} ... U_{i+1} e_i`` on ``m`` strands, every ``U_j`` in ``{e_j, v_j}``."""
    if not 1 <= i <= m - 1:
        raise ValueError(f"site {i} outside 1..{m - 1}")
    span = list(range(m - 1, i, -1))
    out = []
    for kinds in itertools.product("ev", repeat=len(span)):
        out.append(_word_diagram(m, list(zip(kinds, span)) + [("e", i)]))
    return out
