"""Exact arithmetic substrate.

Rationals are ``gmpy2.mpq`` values (they compare and hash equal to
``fractions.Fraction``).  On top of them this module provides quadratic
surds ``p + q*sqrt(d)``, formal sums of such surds, linear-fractional
curves and isolation of real roots of rational quadratics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import gmpy2
from gmpy2 import mpq, mpz

Rational = type(mpq(0))

ZERO = mpq(0)
ONE = mpq(1)
HALF = mpq(1, 2)


class DegenerateInput(ValueError):
    """Raised when an operation receives input with no meaningful answer."""


class UndecidedSign(ArithmeticError):
    """Raised when certified interval refinement fails to fix a sign."""


def rat(x) -> Rational:
    """Coerce ints, strings ("p/q"), Fractions and mpqs to an exact rational."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, type(mpz(0)))):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational string")
        return mpq(s)
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals")
    raise TypeError(f"cannot interpret {x!r} as a rational")


def rat_str(x) -> str:
    """Serialize a rational as "p/q", omitting the denominator when it is 1."""
    x = rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def sign(x) -> int:
    return (x > 0) - (x < 0)


def rat_cmp(x, y) -> int:
    """Total order on rationals: -1, 0 or 1 (by cross-multiplication)."""
    x, y = rat(x), rat(y)
    lhs = x.numerator * y.denominator
    rhs = y.numerator * x.denominator
    return (lhs > rhs) - (lhs < rhs)


def _sqrt_bounds(n: int, m: int, bits: int) -> tuple[Rational, Rational]:
    """Rational bounds lo <= sqrt(n/m) <= hi with hi - lo <= 2**-bits / m."""
    scale = mpz(1) << bits
    s = gmpy2.isqrt(mpz(n) * m * scale * scale)
    lo = mpq(s, m * scale)
    if s * s == mpz(n) * m * scale * scale:
        return lo, lo
    return lo, mpq(s + 1, m * scale)


def rational_sqrt(d) -> Rational | None:
    """sqrt(d) when it is rational, else None."""
    d = rat(d)
    if d < 0:
        return None
    n, m = d.numerator, d.denominator
    if gmpy2.is_square(n) and gmpy2.is_square(m):
        return mpq(gmpy2.isqrt(n), gmpy2.isqrt(m))
    return None


@lru_cache(maxsize=65536)
def _square_part(n: int) -> tuple[int, int]:
    """Split n > 0 as s**2 * k with k square-free; returns (s, k)."""
    s, k = 1, 1
    rest = n
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        s *= p ** (e // 2)
        k *= p ** (e % 2)
    if rest > 1:
        if gmpy2.is_square(rest):
            s *= int(gmpy2.isqrt(rest))
        elif rest < 53 * 53:
            k *= rest
        else:
            from sympy import factorint

            for p, e in factorint(rest).items():
                s *= p ** (e // 2)
                k *= p ** (e % 2)
    return s, k


def canonical_radicand(d) -> tuple[Rational, int]:
    """Write sqrt(d) as c*sqrt(k) with k a square-free integer (k = 0 or 1 when rational)."""
    d = rat(d)
    if d < 0:
        raise ValueError("negative radicand")
    if d == 0:
        return ZERO, 0
    n, m = int(d.numerator), int(d.denominator)
    s, k = _square_part(n * m)
    return mpq(s, m), k


Number = Union[Rational, "QuadraticValue"]


@dataclass(frozen=True)
class QuadraticValue:
    """The exact real number p + q*sqrt(d).

    Always build through :meth:`make`, which stores d as a square-free
    integer (so equal numbers have equal representations) and collapses
    rational values to ``q = d = 0``.
    """

    p: Rational
    q: Rational
    d: int

    @classmethod
    def make(cls, p, q=0, d=0) -> QuadraticValue:
        p, q = rat(p), rat(q)
        if q == 0:
            return cls(p, ZERO, 0)
        c, k = canonical_radicand(d)
        if k <= 1:
            return cls(p + q * c, ZERO, 0)
        return cls(p, q * c, k)

    @classmethod
    def of(cls, x) -> QuadraticValue:
        if isinstance(x, QuadraticValue):
            return x
        return cls(rat(x), ZERO, 0)

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def simplify(self) -> Number:
        """The plain rational when the value is rational, else self."""
        return self.p if self.q == 0 else self

    def _field(self, other: QuadraticValue) -> int:
        if self.d and other.d and self.d != other.d:
            raise ValueError("quadratic values over different radicands")
        return self.d or other.d

    def __add__(self, other):
        if not isinstance(other, QuadraticValue):
            return QuadraticValue(self.p + rat(other), self.q, self.d)
        d = self._field(other)
        return QuadraticValue.make(self.p + other.p, self.q + other.q, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticValue(-self.p, -self.q, self.d)

    def __sub__(self, other):
        return self + (-QuadraticValue.of(other))

    def __rsub__(self, other):
        return QuadraticValue.of(other) - self

    def __mul__(self, other):
        if not isinstance(other, QuadraticValue):
            c = rat(other)
            return QuadraticValue.make(self.p * c, self.q * c, self.d)
        d = self._field(other)
        return QuadraticValue.make(
            self.p * other.p + self.q * other.q * d,
            self.p * other.q + self.q * other.p,
            d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> QuadraticValue:
        return QuadraticValue(self.p, -self.q, self.d)

    def norm(self) -> Rational:
        return self.p * self.p - self.q * self.q * self.d

    def __truediv__(self, other):
        if not isinstance(other, QuadraticValue):
            c = rat(other)
            return QuadraticValue.make(self.p / c, self.q / c, self.d)
        if other.q == 0:
            return self / other.p
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero quadratic value")
        return self * other.conjugate() / n

    def __rtruediv__(self, other):
        return QuadraticValue.of(other) / self

    def sign(self) -> int:
        return quad_sign(self)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def _cmp(self, other) -> int:
        return compare(self, other)

    def __eq__(self, other):
        if isinstance(other, QuadraticValue):
            return (self.p, self.q, self.d) == (other.p, other.q, other.d)
        try:
            return self.q == 0 and self.p == rat(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self.q == 0:
            return hash(self.p)
        return hash((self.p, self.q, self.d))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def enclosure(self, bits: int = 64) -> tuple[Rational, Rational]:
        if self.q == 0:
            return self.p, self.p
        lo, hi = _sqrt_bounds(self.d, 1, bits)
        a, b = self.p + self.q * lo, self.p + self.q * hi
        return (a, b) if a <= b else (b, a)

    def __float__(self):
        return float(self.p) + float(self.q) * math.sqrt(self.d)

    def __str__(self):
        if self.q == 0:
            return rat_str(self.p)
        return f"{rat_str(self.p)}{'+' if self.q > 0 else '-'}{rat_str(abs(self.q))}*sqrt({self.d})"

    def to_json(self):
        if self.q == 0:
            return rat_str(self.p)
        return {"p": rat_str(self.p), "q": rat_str(self.q), "d": str(self.d)}


def quad_sign(v: QuadraticValue) -> int:
    """Exact sign of p + q*sqrt(d), for any rational d >= 0."""
    sp, sq = sign(v.p), sign(v.q)
    if sq == 0 or v.d == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    t = v.p * v.p - v.q * v.q * v.d
    if t > 0:
        return sp
    if t < 0:
        return sq
    return 0


def _radical_pair_sign(y, u, z, v) -> int:
    """Sign of y*sqrt(u) + z*sqrt(v)."""
    sy = sign(y) if u else 0
    sz = sign(z) if v else 0
    if sy == 0 or sz == 0 or sy == sz:
        return sy or sz
    t = y * y * u - z * z * v
    return sy if t > 0 else (sz if t < 0 else 0)


def surd2_sign(x, y, u, z, v) -> int:
    """Exact sign of x + y*sqrt(u) + z*sqrt(v) for rationals, u, v >= 0."""
    x, y, z = rat(x), rat(y), rat(z)
    s = _radical_pair_sign(y, u, z, v)
    sx = sign(x)
    if sx == 0 or s == 0 or sx == s:
        return sx or s
    # opposite signs: compare x**2 with (y sqrt u + z sqrt v)**2
    t = quad_sign(QuadraticValue(x * x - y * y * u - z * z * v, -2 * y * z, rat(u) * rat(v)))
    return sx if t > 0 else (s if t < 0 else 0)


def compare(x, y) -> int:
    """Exact comparison of two rationals / quadratic values (any radicands)."""
    if not isinstance(x, QuadraticValue) and not isinstance(y, QuadraticValue):
        return rat_cmp(x, y)
    x, y = QuadraticValue.of(x), QuadraticValue.of(y)
    if y.q == 0:
        return quad_sign(QuadraticValue(x.p - y.p, x.q, x.d))
    if x.q == 0:
        return quad_sign(QuadraticValue(x.p - y.p, -y.q, y.d))
    if x.d == y.d:
        return quad_sign(QuadraticValue(x.p - y.p, x.q - y.q, x.d))
    return surd2_sign(x.p - y.p, x.q, x.d, -y.q, y.d)


def exact_max(values):
    best = None
    for v in values:
        if best is None or compare(v, best) > 0:
            best = v
    return best


def simplify(v) -> Number:
    return v.simplify() if isinstance(v, QuadraticValue) else v


class SurdSum:
    """A formal sum r + sum_k c_k*sqrt(d_k) over distinct square-free d_k > 1.

    Square roots of distinct square-free integers are linearly independent
    over the rationals, so the representation is unique and equality is
    syntactic.  Order comparisons use exact procedures for up to two
    radicals and certified interval refinement beyond that.
    """

    __slots__ = ("rational", "terms")

    max_bits = 1 << 14

    def __init__(self, rational=0, terms=None):
        self.rational = rat(rational)
        self.terms = {d: c for d, c in (terms or {}).items() if c != 0}

    @classmethod
    def of(cls, x) -> SurdSum:
        if isinstance(x, SurdSum):
            return x
        if isinstance(x, QuadraticValue):
            return cls(x.p, {x.d: x.q} if x.q else None)
        return cls(rat(x))

    @property
    def is_rational(self) -> bool:
        return not self.terms

    def simplify(self):
        return self.rational if not self.terms else self

    def __add__(self, other):
        other = SurdSum.of(other)
        terms = dict(self.terms)
        for d, c in other.terms.items():
            terms[d] = terms.get(d, ZERO) + c
        return SurdSum(self.rational + other.rational, terms)

    __radd__ = __add__

    def __neg__(self):
        return SurdSum(-self.rational, {d: -c for d, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-SurdSum.of(other))

    def __rsub__(self, other):
        return SurdSum.of(other) - self

    def __mul__(self, c):
        c = rat(c)
        return SurdSum(self.rational * c, {d: v * c for d, v in self.terms.items()})

    __rmul__ = __mul__

    def enclosure(self, bits: int = 64) -> tuple[Rational, Rational]:
        lo = hi = self.rational
        for d, c in self.terms.items():
            slo, shi = _sqrt_bounds(d, 1, bits)
            a, b = c * slo, c * shi
            lo += min(a, b)
            hi += max(a, b)
        return lo, hi

    def sign(self) -> int:
        terms = sorted(self.terms.items())
        if not terms:
            return sign(self.rational)
        if len(terms) == 1:
            (d, c), = terms
            return quad_sign(QuadraticValue(self.rational, c, d))
        if len(terms) == 2:
            (u, y), (v, z) = terms
            return surd2_sign(self.rational, y, u, z, v)
        bits = 64
        while bits <= self.max_bits:
            lo, hi = self.enclosure(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        raise UndecidedSign(f"sign of {self} not certified at {self.max_bits} bits")

    def _cmp(self, other) -> int:
        return (self - SurdSum.of(other)).sign()

    def __eq__(self, other):
        try:
            other = SurdSum.of(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.rational == other.rational and self.terms == other.terms

    def __hash__(self):
        if not self.terms:
            return hash(self.rational)
        return hash((self.rational, tuple(sorted(self.terms.items()))))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.rational) + sum(float(c) * math.sqrt(d) for d, c in self.terms.items())

    def __str__(self):
        out = rat_str(self.rational)
        for d, c in sorted(self.terms.items()):
            out += f"{'+' if c > 0 else '-'}{rat_str(abs(c))}*sqrt({d})"
        return out

    def __repr__(self):
        return f"SurdSum({self})"

    def to_json(self):
        if not self.terms:
            return rat_str(self.rational)
        lo, hi = self.enclosure(96)
        return {
            "exact": str(self),
            "rational": rat_str(self.rational),
            "terms": {str(d): rat_str(c) for d, c in sorted(self.terms.items())},
            "enclosure": [rat_str(lo), rat_str(hi)],
        }


def exact_json(v):
    """JSON rendering of a rational, QuadraticValue or SurdSum."""
    if isinstance(v, (QuadraticValue, SurdSum)):
        return v.to_json()
    return rat_str(v)


def exact_text(v) -> str:
    if isinstance(v, (QuadraticValue, SurdSum)):
        return str(v)
    return rat_str(v)


# ---------------------------------------------------------------- roots


@dataclass(frozen=True)
class RootDescriptor:
    """One real root of A x^2 + B x + C, isolated in the closed interval [lo, hi]."""

    A: Rational
    B: Rational
    C: Rational
    index: str  # "smaller", "larger" or "only"
    lo: Rational
    hi: Rational
    bits: int = 0

    @property
    def value(self) -> QuadraticValue:
        A, B, C = self.A, self.B, self.C
        if A == 0:
            return QuadraticValue.of(-C / B)
        disc = B * B - 4 * A * C
        if self.index == "only":
            return QuadraticValue.of(-B / (2 * A))
        # smaller root takes -sqrt when A > 0
        s = -1 if (self.index == "smaller") == (A > 0) else 1
        return QuadraticValue.make(-B / (2 * A), mpq(s) / (2 * A), disc)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def poly(self, x):
        return (self.A * x + self.B) * x + self.C

    def refine(self, width) -> RootDescriptor:
        """A descriptor for the same root with hi - lo <= width."""
        width = rat(width)
        if width <= 0:
            raise ValueError("width must be positive")
        r = self
        while r.hi - r.lo > width:
            r = _descriptor(r.A, r.B, r.C, r.index, r.bits + 8)
        return r


def _descriptor(A, B, C, index, bits) -> RootDescriptor:
    disc = B * B - 4 * A * C
    lo, hi = _sqrt_bounds(disc.numerator, disc.denominator, bits)
    two_a = 2 * A
    if index == "smaller" and A > 0 or index == "larger" and A < 0:
        ends = ((-B - hi) / two_a, (-B - lo) / two_a)
    else:
        ends = ((-B + lo) / two_a, (-B + hi) / two_a)
    return RootDescriptor(A, B, C, index, min(ends), max(ends), bits)


def isolate_roots(A, B, C) -> list[RootDescriptor]:
    """Isolate the distinct real roots of A x^2 + B x + C, in increasing order."""
    A, B, C = rat(A), rat(B), rat(C)
    if A == 0 and B == 0 and C == 0:
        raise DegenerateInput("all coefficients are zero")
    if A == 0:
        if B == 0:
            return []
        x = -C / B
        return [RootDescriptor(A, B, C, "only", x, x)]
    disc = B * B - 4 * A * C
    if disc < 0:
        return []
    if disc == 0:
        x = -B / (2 * A)
        return [RootDescriptor(A, B, C, "only", x, x)]
    root = rational_sqrt(disc)
    if root is not None:
        xs = sorted(((-B - root) / (2 * A), (-B + root) / (2 * A)))
        return [
            RootDescriptor(A, B, C, "smaller", xs[0], xs[0]),
            RootDescriptor(A, B, C, "larger", xs[1], xs[1]),
        ]
    bits = 0
    while True:
        lo, _ = _sqrt_bounds(disc.numerator, disc.denominator, bits)
        if lo > 0:
            break
        bits += 4
    return [_descriptor(A, B, C, "smaller", bits), _descriptor(A, B, C, "larger", bits)]


# -------------------------------------------------------------- Mobius


@dataclass(frozen=True)
class Mobius:
    """The linear-fractional curve x -> (p x + q) / (r x + s)."""

    p: Rational
    q: Rational
    r: Rational
    s: Rational

    @classmethod
    def constant(cls, c) -> Mobius:
        return cls(ZERO, rat(c), ZERO, ONE)

    @property
    def det(self) -> Rational:
        return self.p * self.s - self.q * self.r

    @property
    def is_constant(self) -> bool:
        return self.det == 0

    def constant_value(self) -> Rational:
        if self.r != 0:
            return self.p / self.r
        return self.q / self.s

    def direction(self) -> int:
        """+1 increasing, -1 decreasing, 0 constant (away from the pole)."""
        return sign(self.det)

    def __call__(self, x):
        if self.is_constant:
            return self.constant_value()
        if isinstance(x, QuadraticValue):
            if x.q == 0:
                x = x.p
            else:
                return ((self.p * x + self.q) / (self.r * x + self.s)).simplify()
        return (self.p * x + self.q) / (self.r * x + self.s)

    def limit(self, side: int) -> Rational:
        """Limit as x -> side * infinity."""
        if self.is_constant:
            return self.constant_value()
        if self.r == 0:
            raise ValueError("unbounded linear curve")
        return self.p / self.r

    def crossing_poly(self, other: Mobius) -> tuple[Rational, Rational, Rational]:
        """Coefficients of (p1 x + q1)(r2 x + s2) - (p2 x + q2)(r1 x + s1)."""
        return (
            self.p * other.r - other.p * self.r,
            self.p * other.s + self.q * other.r - other.p * self.s - other.q * self.r,
            self.q * other.s - other.q * self.s,
        )

    def to_json(self):
        return [rat_str(self.p), rat_str(self.q), rat_str(self.r), rat_str(self.s)]
