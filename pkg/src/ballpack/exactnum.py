"""Exact arithmetic in real quadratic fields Q(sqrt(m)).

A :class:`QuadScalar` stores a + b*sqrt(m) with rational a, b.  Values with
b == 0 are field-agnostic (m is ``None``) and combine freely with values from
any concrete field; combining two values with different concrete m raises.

Floats never silently mix with exact values: arithmetic between a QuadScalar
and a float raises TypeError, so a computation is either exact end to end or
explicitly converted with :func:`approx`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from typing import Optional, Union

RationalLike = Union[int, Fraction]
ScalarLike = Union[int, Fraction, "QuadScalar"]

# Ring tags accepted by is_ring_integer.
RING_Z = "Z"
RING_Z_SQRT2 = "Z[sqrt2]"
RING_Z_PHI = "Z[phi]"

_SQUAREFREE_CACHE: dict[int, bool] = {}


def _is_squarefree(m: int) -> bool:
    cached = _SQUAREFREE_CACHE.get(m)
    if cached is not None:
        return cached
    ok = True
    k = 2
    mm = m
    while k * k <= mm:
        if mm % (k * k) == 0:
            ok = False
            break
        if mm % k == 0:
            mm //= k
        else:
            k += 1
    _SQUAREFREE_CACHE[m] = ok
    return ok


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    """Exact square root of a nonnegative rational, or None."""
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


@total_ordering
class QuadScalar:
    """An element a + b*sqrt(m) of a real quadratic field, exactly."""

    __slots__ = ("a", "b", "m")

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0, m: Optional[int] = None):
        a = Fraction(a)
        b = Fraction(b)
        if b == 0:
            m = None
        else:
            if m is None:
                raise ValueError("irrational part requires a field modulus m")
            if m <= 1 or not _is_squarefree(m):
                raise ValueError(f"m must be a square-free integer > 1, got {m}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "m", m)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("QuadScalar is immutable")

    # -- field bookkeeping -------------------------------------------------

    def _join(self, other: "QuadScalar") -> Optional[int]:
        if self.m is None:
            return other.m
        if other.m is None or other.m == self.m:
            return self.m
        raise ValueError(f"cannot mix fields Q(sqrt {self.m}) and Q(sqrt {other.m})")

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> "QuadScalar":
        return QuadScalar(self.a, -self.b, self.m)

    # -- coercion ----------------------------------------------------------

    @staticmethod
    def _coerce(x) -> Optional["QuadScalar"]:
        if isinstance(x, QuadScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return QuadScalar(x)
        return None

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadScalar(self.a + o.a, self.b + o.b, self._join(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadScalar(-self.a, -self.b, self.m)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadScalar(self.a - o.a, self.b - o.b, self._join(o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        m = self._join(o)
        a = self.a * o.a + (self.b * o.b * m if m is not None else 0)
        b = self.a * o.b + self.b * o.a
        return QuadScalar(a, b, m)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.a == 0 and o.b == 0:
            raise ZeroDivisionError("division by zero QuadScalar")
        m = self._join(o)
        if o.b == 0:
            return QuadScalar(self.a / o.a, self.b / o.a, m)
        norm = o.a * o.a - o.b * o.b * m
        num = self * o.conjugate()
        return QuadScalar(num.a / norm, num.b / norm, m)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (QuadScalar(1) / self) ** (-n)
        out = QuadScalar(1)
        base = self
        k = n
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- comparison --------------------------------------------------------

    def sign(self) -> int:
        """Exact sign (-1, 0, +1) of a + b*sqrt(m)."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 against b^2 m
        lhs, rhs = a * a, b * b * self.m
        if a > 0:  # b < 0
            return 1 if lhs > rhs else (-1 if lhs < rhs else 0)
        return -1 if lhs > rhs else (1 if lhs < rhs else 0)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.b != o.b:
            return False
        if self.b != 0 and self.m != o.m:
            return False
        return self.a == o.a

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.m))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # -- output ------------------------------------------------------------

    def __float__(self):
        if self.b == 0:
            return float(self.a)
        return float(self.a) + float(self.b) * math.sqrt(self.m)

    def __repr__(self):
        if self.b == 0:
            return f"QuadScalar({self.a})"
        return f"QuadScalar({self.a}, {self.b}, m={self.m})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}√{self.m}"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}√{self.m}"


def phi() -> QuadScalar:
    """The golden ratio (1 + sqrt 5)/2 as an exact value in Q(sqrt 5)."""
    return QuadScalar(Fraction(1, 2), Fraction(1, 2), 5)


def sqrt_int(m: int) -> QuadScalar:
    """sqrt(m) for square-free m, as an exact value in Q(sqrt m)."""
    r = math.isqrt(m)
    if r * r == m:
        return QuadScalar(r)
    return QuadScalar(0, 1, m)


def approx(x) -> float:
    """Float image of any scalar (exact or already float)."""
    if isinstance(x, QuadScalar):
        return float(x)
    return float(x)


def sqrt_if_expressible(x: ScalarLike, m: Optional[int] = None) -> Optional[QuadScalar]:
    """The nonnegative square root of x inside Q(sqrt m), if one exists.

    With m omitted, the value's own field is used (pure rationals get only
    rational roots).  Negative x raises; an inexpressible root returns None.
    """
    q = QuadScalar._coerce(x)
    if q is None:
        raise TypeError(f"expected an exact scalar, got {type(x).__name__}")
    if q.sign() < 0:
        raise ValueError("square root of a negative value")
    if m is None:
        m = q.m
    elif q.m is not None and q.m != m:
        raise ValueError(f"value lives in Q(sqrt {q.m}), not Q(sqrt {m})")

    if q.b == 0:
        r = _rational_sqrt(q.a)
        if r is not None:
            return QuadScalar(r)
        if m is not None:
            # maybe x = (d*sqrt(m))^2
            d2 = q.a / m
            d = _rational_sqrt(d2)
            if d is not None:
                return QuadScalar(0, d, m)
        return None

    # q = a + b sqrt(m), b != 0: seek y = c + d sqrt(m), so
    # c^2 + d^2 m = a and 2 c d = b; c^2 solves t^2 - a t + b^2 m / 4 = 0.
    disc = q.a * q.a - q.b * q.b * m
    s = _rational_sqrt(disc)
    if s is None:
        return None
    for c2 in ((q.a + s) / 2, (q.a - s) / 2):
        c = _rational_sqrt(c2)
        if c is None or c == 0:
            continue
        d = q.b / (2 * c)
        y = QuadScalar(c, d, m)
        if y * y == q:
            return abs(y)
    return None


def sqrt_rational(x: RationalLike) -> QuadScalar:
    """Exact sqrt of a nonnegative rational as k*sqrt(m), m square-free.

    Unlike :func:`sqrt_if_expressible` this always succeeds (for x >= 0) by
    choosing the field: sqrt(p/q) = sqrt(p*q)/q and sqrt(n) = k*sqrt(m) with
    m the square-free part of n.
    """
    x = Fraction(x)
    if x < 0:
        raise ValueError("square root of a negative value")
    if x == 0:
        return QuadScalar(0)
    n = x.numerator * x.denominator
    k, m, d = 1, 1, 2
    while d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
            k *= d
        if n % d == 0:
            n //= d
            m *= d
        d += 1
    m *= n
    coeff = Fraction(k, x.denominator)
    if m == 1:
        return QuadScalar(coeff)
    return QuadScalar(0, coeff, m)


def is_float_data(values) -> bool:
    """True if any entry of the sequence is a float (float-mode data)."""
    return any(isinstance(x, float) for x in values)


def scalar_sign(x) -> int:
    """Exact sign for exact scalars; ordinary sign for floats."""
    if isinstance(x, QuadScalar):
        return x.sign()
    return (x > 0) - (x < 0)


def ratio(x, y):
    """Division that keeps exact operands exact (int/int would give float)."""
    if isinstance(x, float) or isinstance(y, float):
        return x / y
    if isinstance(x, QuadScalar) or isinstance(y, QuadScalar):
        return x / y
    return Fraction(x) / y


def exact_sqrt(x):
    """Square root: float in, float out; exact in, exact out (field may grow)."""
    if isinstance(x, float):
        return math.sqrt(x)
    if isinstance(x, QuadScalar) and not x.is_rational:
        r = sqrt_if_expressible(x)
        if r is None:
            raise ValueError(f"no exact square root of {x} in its field")
        return r
    a = x.a if isinstance(x, QuadScalar) else Fraction(x)
    return sqrt_rational(a)


def is_ring_integer(x: ScalarLike, ring: str) -> bool:
    """Membership of an exact scalar in Z, Z[sqrt2], or Z[phi]."""
    q = QuadScalar._coerce(x)
    if q is None:
        raise TypeError(f"expected an exact scalar, got {type(x).__name__}")
    if ring == RING_Z:
        return q.b == 0 and q.a.denominator == 1
    if ring == RING_Z_SQRT2:
        if q.m not in (None, 2):
            raise ValueError(f"value lives in Q(sqrt {q.m}), incompatible with {ring}")
        return q.a.denominator == 1 and q.b.denominator == 1
    if ring == RING_Z_PHI:
        if q.m not in (None, 5):
            raise ValueError(f"value lives in Q(sqrt {q.m}), incompatible with {ring}")
        # a + b sqrt5 = (a - b) + 2b * phi
        return (q.a - q.b).denominator == 1 and (2 * q.b).denominator == 1
    raise ValueError(f"unknown ring {ring!r}")
