"""Exact arithmetic in Q and Q(d).

Scalars are :class:`fractions.Fraction`.  Polynomials in the indeterminate
``d`` are dense ascending coefficient tuples; rational functions are kept
reduced with a monic denominator so that equality is structural.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

__all__ = [
    "BigRational",
    "Polynomial",
    "RationalFunction",
    "PoleError",
    "poly_gcd",
    "rf_arith",
    "rf_eval",
    "parse_rational",
    "D",
    "ONE",
    "ZERO",
]

BigRational = Fraction
Scalar = Union[int, Fraction]


class PoleError(ZeroDivisionError):
    """Evaluation of a rational function at a root of its denominator."""

    def __init__(self, message: str, point: Fraction, factor: "Polynomial"):
        super().__init__(message)
        self.point = point
        self.factor = factor


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer/decimal literal into a reduced Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


class Polynomial:
    """Univariate polynomial in ``d`` over Q, ascending coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        c = [Fraction(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)
        self._hash: int | None = None

    @classmethod
    def _trusted(cls, coeffs: tuple) -> "Polynomial":
        # caller guarantees Fractions and no trailing zero
        p = object.__new__(cls)
        p.coeffs = coeffs
        p._hash = None
        return p

    @classmethod
    def _trim(cls, c: list) -> "Polynomial":
        while c and not c[-1]:
            c.pop()
        return cls._trusted(tuple(c))

    @classmethod
    def constant(cls, value: Scalar) -> "Polynomial":
        return cls((value,))

    @classmethod
    def monomial(cls, degree: int, coeff: Scalar = 1) -> "Polynomial":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Polynomial((other,)).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({[str(c) for c in self.coeffs]})"

    def __neg__(self) -> "Polynomial":
        return Polynomial._trusted(tuple(-c for c in self.coeffs))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        c = list(a)
        for i, x in enumerate(b):
            c[i] += x
        return Polynomial._trim(c)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO_POLY
        c = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    c[i + j] += x * y
        return Polynomial._trim(c)

    __rmul__ = __mul__

    def scale(self, k: Scalar) -> "Polynomial":
        if not k:
            return ZERO_POLY
        return Polynomial._trusted(tuple(c * k for c in self.coeffs))

    def __divmod__(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        lead = other.coeffs[-1]
        if len(rem) - 1 < db:
            return ZERO_POLY, self
        quot = [Fraction(0)] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            q = rem[k + db] / lead
            quot[k] = q
            if q:
                for j, y in enumerate(other.coeffs):
                    rem[k + j] -= q * y
        return Polynomial._trim(quot), Polynomial._trim(rem[:db])

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    def __call__(self, v: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def monic(self) -> "Polynomial":
        if not self.coeffs:
            return self
        return self.scale(1 / self.coeffs[-1])

    def integer_form(self) -> tuple[int, ...]:
        """Primitive integer multiple with positive leading coefficient."""
        if not self.coeffs:
            return ()
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        sign = -1 if ints[-1] < 0 else 1
        return tuple(sign * x // g for x in ints)

    def __str__(self) -> str:
        return _format_poly(self.coeffs)


ZERO_POLY = Polynomial._trusted(())
ONE_POLY = Polynomial._trusted((Fraction(1),))
D_POLY = Polynomial._trusted((Fraction(0), Fraction(1)))


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor of two polynomials, not both zero."""
    if not a and not b:
        raise ValueError("gcd(0, 0) is undefined")
    while b:
        a, b = b, a % b
    return a.monic()


def _format_poly(coeffs: tuple) -> str:
    if not coeffs:
        return "0"
    parts: list[str] = []
    for deg in range(len(coeffs) - 1, -1, -1):
        c = coeffs[deg]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if deg == 0:
            body = str(mag)
        else:
            var = "d" if deg == 1 else f"d^{deg}"
            if mag == 1:
                body = var
            elif mag.denominator == 1:
                body = f"{mag}{var}"
            else:
                body = f"({mag}){var}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _linear_factors(ints: tuple[int, ...]) -> tuple[int, list[int], tuple[int, ...]]:
    """Split an integer polynomial into content, integer roots, and a remainder."""
    content = math.gcd(*ints) if ints else 1
    poly = [x // content for x in ints]
    roots: list[int] = []
    while len(poly) > 1:
        c0 = poly[0]
        if c0 == 0:
            cand = [0]
        else:
            cand = []
            for q in range(1, math.isqrt(abs(c0)) + 1):
                if c0 % q == 0:
                    cand.extend((q, -q, c0 // q, -(c0 // q)))
        for r in sorted(set(cand), key=lambda t: (abs(t), t)):
            if Polynomial(poly)(r) == 0:
                break
        else:
            break
        # synthetic division by (d - r)
        hi = len(poly) - 1
        q = [0] * hi
        acc = 0
        for k in range(hi, 0, -1):
            acc = acc * r + poly[k]
            q[k - 1] = acc
        poly = q
        roots.append(r)
    return content, roots, tuple(poly)


def _format_factored(ints: tuple[int, ...]) -> str:
    content, roots, rest = _linear_factors(ints)
    lead = rest[-1] if rest else 1
    scale = content * lead
    factors = []
    for r in sorted(roots, key=lambda t: -t):
        factors.append("d" if r == 0 else f"(d{-r:+d})")
    if len(rest) > 1:
        factors.append(f"({_format_poly(tuple(Fraction(x, lead) for x in rest))})")
    body = "".join(factors)
    if not body:
        return str(scale)
    if scale == 1:
        return body
    if scale == -1:
        return "-" + body
    return f"{scale}{body}"


class RationalFunction:
    """Element of Q(d) in lowest terms with a monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Polynomial | Scalar = 0, den: Polynomial | Scalar = 1):
        if not isinstance(num, Polynomial):
            num = Polynomial.constant(num)
        if not isinstance(den, Polynomial):
            den = Polynomial.constant(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            num, den = ZERO_POLY, ONE_POLY
        elif den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        lc = den.leading
        if lc != 1:
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _trusted(cls, num: Polynomial, den: Polynomial) -> "RationalFunction":
        r = object.__new__(cls)
        r.num = num
        r.den = den
        r._hash = None
        return r

    @classmethod
    def coerce(cls, x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, Polynomial):
            return cls._trusted(x, ONE_POLY)
        if isinstance(x, (int, Fraction)):
            return cls._trusted(Polynomial.constant(x), ONE_POLY)
        raise TypeError(f"cannot coerce {type(x).__name__} to RationalFunction")

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            try:
                other = RationalFunction.coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num.coeffs, self.den.coeffs))
        return self._hash

    def __add__(self, other):
        return _add(self, RationalFunction.coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return _add(self, -RationalFunction.coerce(other))

    def __rsub__(self, other):
        return _add(RationalFunction.coerce(other), -self)

    def __mul__(self, other):
        return _mul(self, RationalFunction.coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return _mul(self, RationalFunction.coerce(other).inverse())

    def __rtruediv__(self, other):
        return _mul(RationalFunction.coerce(other), self.inverse())

    def __neg__(self) -> "RationalFunction":
        return RationalFunction._trusted(-self.num, self.den)

    def __pow__(self, k: int) -> "RationalFunction":
        base = self if k >= 0 else self.inverse()
        out = ONE
        for _ in range(abs(k)):
            out = out * base
        return out

    def inverse(self) -> "RationalFunction":
        if not self.num:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.den, self.num)

    def __call__(self, v: Scalar) -> Fraction:
        return rf_eval(self, v)

    def integer_form(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Integer coefficient vectors (num, den) with den primitive, positive leading."""
        if not self.num:
            return (), (1,)
        scale = math.lcm(
            *(c.denominator for c in self.num.coeffs + self.den.coeffs)
        )
        num = [int(c * scale) for c in self.num.coeffs]
        den = [int(c * scale) for c in self.den.coeffs]
        g = math.gcd(*num, *den)
        return tuple(x // g for x in num), tuple(x // g for x in den)

    def to_json(self) -> dict:
        num, den = self.integer_form()
        return {"num": [str(x) for x in num], "den": [str(x) for x in den]}

    @classmethod
    def from_json(cls, obj: dict) -> "RationalFunction":
        num = Polynomial(Fraction(s) for s in obj["num"])
        den = Polynomial(Fraction(s) for s in obj["den"])
        return cls(num, den)

    def __repr__(self) -> str:
        return f"RationalFunction({self})"

    def __str__(self) -> str:
        num, den = self.integer_form()
        if den == (1,):
            return _format_poly(tuple(Fraction(x) for x in num))
        if len(num) == 1:
            ns = str(num[0])
        else:
            ns = f"({_format_poly(tuple(Fraction(x) for x in num))})"
        ds = _format_factored(den)
        single = ds == "d" or (ds.startswith("(") and ds.count("(") == 1 and ds.endswith(")"))
        if len(den) > 1 and not single:
            ds = f"({ds})"
        return f"{ns}/{ds}"


@lru_cache(maxsize=1 << 16)
def _add(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    if not a.num:
        return b
    if not b.num:
        return a
    if a.den == b.den:
        return RationalFunction(a.num + b.num, a.den)
    return RationalFunction(a.num * b.den + b.num * a.den, a.den * b.den)


@lru_cache(maxsize=1 << 16)
def _mul(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    if not a.num or not b.num:
        return ZERO
    if a.den.degree == 0 and b.den.degree == 0:
        return RationalFunction._trusted(a.num * b.num, ONE_POLY)
    return RationalFunction(a.num * b.num, a.den * b.den)


def rf_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    """Field operation ``op`` in {"add", "sub", "mul", "div"}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def rf_eval(a: RationalFunction, v: Scalar) -> Fraction:
    """Exact value of ``a`` at ``d = v``; raises PoleError on a pole."""
    v = Fraction(v)
    den = a.den(v)
    if not den:
        factor = Polynomial((-v, 1))
        mult = 0
        rest = a.den
        while rest.degree > 0 and not rest(v):
            rest = rest // factor
            mult += 1
        shown = str(factor) if mult == 1 else f"({factor})^{mult}"
        raise PoleError(
            f"pole at d = {v}: denominator {a.den} has factor {shown}", v, factor
        )
    return a.num(v) / den


ZERO = RationalFunction._trusted(ZERO_POLY, ONE_POLY)
ONE = RationalFunction._trusted(ONE_POLY, ONE_POLY)
D = RationalFunction._trusted(D_POLY, ONE_POLY)
