"""Exact rational arithmetic and certified dyadic ball arithmetic.

Two layers live here.  ``Rational`` is an alias of :class:`fractions.Fraction`
(always reduced, exact).  :class:`CertifiedReal` is a midpoint-radius number
at a fixed binary precision: it stores integers ``mid`` and ``rad`` scaled by
``2**-prec``, and every operation rounds outward, so the represented true
value always lies in ``[mid - rad, mid + rad]``.

Powers ``n**(p/q)`` of integers are handled through exact integer q-th
roots, which makes floors like ``[n**lam]`` decidable with no floating
point anywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import PrecisionError

Rational = Fraction

#: Hard cap (bits) for precision-escalation loops.
DEFAULT_MAX_PREC = 1 << 20


def rational_ops(a: Fraction, b: Fraction, op: str) -> Fraction:
    """Apply one of ``+ - * /`` to two rationals, exactly.

    Division by zero raises ``ZeroDivisionError``.
    """
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0:
            raise ZeroDivisionError("rational division by zero")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError("factorial of negative integer")
    return math.factorial(n)


def int_nth_root(x: int, k: int) -> tuple[int, bool]:
    """Floor of the k-th root of a nonnegative integer, plus exactness.

    Returns ``(r, exact)`` with ``r**k <= x < (r+1)**k``.
    """
    if x < 0:
        raise ValueError("root of negative integer")
    if k <= 0:
        raise ValueError("root order must be positive")
    if x == 0:
        return 0, True
    if k == 1:
        return x, True
    if k == 2:
        r = math.isqrt(x)
        return r, r * r == x
    # Newton iteration on integers, seeded above the root.
    g = 1 << -(-x.bit_length() // k)
    while True:
        t = ((k - 1) * g + x // g ** (k - 1)) // k
        if t >= g:
            break
        g = t
    while g ** k > x:
        g -= 1
    while (g + 1) ** k <= x:
        g += 1
    return g, g ** k == x


def pow_floor(n: int, lam: Fraction) -> int:
    """Exact ``floor(n**lam)`` for integer ``n >= 0`` and rational ``lam >= 0``."""
    if n < 0 or lam < 0:
        raise ValueError("pow_floor needs n >= 0 and lam >= 0")
    if n == 0:
        return 0
    p, q = lam.numerator, lam.denominator
    r, _ = int_nth_root(n ** p, q)
    return r


def pow_ceil(n: int, lam: Fraction) -> int:
    """Exact ``ceil(n**lam)``, used for rational upper bounds on real powers."""
    if n == 0:
        return 0
    p, q = lam.numerator, lam.denominator
    r, exact = int_nth_root(n ** p, q)
    return r if exact else r + 1


def certified_floor(n: int, lam: Fraction) -> int:
    """``m = [n**lam]`` for ``n >= 1``, decided by the exact integer
    comparison ``m**q <= n**p < (m+1)**q``."""
    if n < 1:
        raise ValueError("certified_floor needs n >= 1")
    if lam < 0:
        raise ValueError("certified_floor needs lam >= 0")
    return pow_floor(n, lam)


class CertifiedReal:
    """Dyadic ball ``mid/2**prec +- rad/2**prec`` with guaranteed containment.

    Values are immutable.  Binary operations accept another CertifiedReal,
    an int, or a Fraction; mixed-precision operands are rounded outward to
    the smaller precision of the two.
    """

    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid: int, rad: int, prec: int):
        if rad < 0:
            raise ValueError("radius must be nonnegative")
        if prec < 1:
            raise ValueError("precision must be positive")
        object.__setattr__(self, "mid", mid)
        object.__setattr__(self, "rad", rad)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, *a):
        raise AttributeError("CertifiedReal is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_int(cls, value: int, prec: int) -> "CertifiedReal":
        return cls(value << prec, 0, prec)

    @classmethod
    def from_fraction(cls, value: Fraction, prec: int) -> "CertifiedReal":
        value = Fraction(value)
        q, rem = divmod(value.numerator << prec, value.denominator)
        if rem == 0:
            return cls(q, 0, prec)
        # true value in (q, q+1)/2**prec
        return cls(q, 1, prec)

    @classmethod
    def _from_bounds(cls, lo: int, hi: int, prec: int) -> "CertifiedReal":
        mid = (lo + hi) >> 1
        rad = max(hi - mid, mid - lo)
        return cls(mid, rad, prec)

    # -- views ---------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.rad == 0

    def lower(self) -> Fraction:
        return Fraction(self.mid - self.rad, 1 << self.prec)

    def upper(self) -> Fraction:
        return Fraction(self.mid + self.rad, 1 << self.prec)

    def midpoint(self) -> Fraction:
        return Fraction(self.mid, 1 << self.prec)

    def radius(self) -> Fraction:
        return Fraction(self.rad, 1 << self.prec)

    def contains(self, value) -> bool:
        v = Fraction(value)
        return self.lower() <= v <= self.upper()

    def __float__(self) -> float:
        return self.mid / (1 << self.prec)

    # -- rounding helpers ----------------------------------------------

    @staticmethod
    def _round_bounds(lo_num: int, hi_num: int, from_prec: int, to_prec: int):
        """Rescale exact integer bounds at ``2**-from_prec`` to ``to_prec``,
        rounding outward."""
        if to_prec >= from_prec:
            s = to_prec - from_prec
            return lo_num << s, hi_num << s
        s = from_prec - to_prec
        return lo_num >> s, -((-hi_num) >> s)

    def _bounds_at(self, prec: int) -> tuple[int, int]:
        return self._round_bounds(self.mid - self.rad, self.mid + self.rad,
                                  self.prec, prec)

    @staticmethod
    def _coerce(other, prec):
        if isinstance(other, CertifiedReal):
            return other
        if isinstance(other, int):
            return CertifiedReal.from_int(other, prec)
        if isinstance(other, Fraction):
            return CertifiedReal.from_fraction(other, prec)
        return None

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other, self.prec)
        if o is None:
            return NotImplemented
        p = min(self.prec, o.prec)
        s = max(self.prec, o.prec)
        la, ha = self._round_bounds(self.mid - self.rad, self.mid + self.rad, self.prec, s)
        lb, hb = self._round_bounds(o.mid - o.rad, o.mid + o.rad, o.prec, s)
        lo, hi = self._round_bounds(la + lb, ha + hb, s, p)
        return CertifiedReal._from_bounds(lo, hi, p)

    __radd__ = __add__

    def __neg__(self):
        return CertifiedReal(-self.mid, self.rad, self.prec)

    def __sub__(self, other):
        o = self._coerce(other, self.prec)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other, self.prec)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other, self.prec)
        if o is None:
            return NotImplemented
        p = min(self.prec, o.prec)
        la, ha = self.mid - self.rad, self.mid + self.rad
        lb, hb = o.mid - o.rad, o.mid + o.rad
        prods = (la * lb, la * hb, ha * lb, ha * hb)
        lo, hi = self._round_bounds(min(prods), max(prods), self.prec + o.prec, p)
        return CertifiedReal._from_bounds(lo, hi, p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other, self.prec)
        if o is None:
            return NotImplemented
        lb, hb = o.mid - o.rad, o.mid + o.rad
        if lb <= 0 <= hb:
            raise ZeroDivisionError("certified divisor interval contains zero")
        p = min(self.prec, o.prec)
        la, ha = self.mid - self.rad, self.mid + self.rad
        sp = 1 << o.prec
        quots = [Fraction(x * sp, y) for x in (la, ha) for y in (lb, hb)]
        qlo, qhi = min(quots), max(quots)
        # quotients are exact at scale 2**-self.prec; round outward to p
        lo = (qlo.numerator << p) // (qlo.denominator << self.prec)
        hi = -(((-qhi.numerator) << p) // (qhi.denominator << self.prec))
        return CertifiedReal._from_bounds(lo, hi, p)

    def __rtruediv__(self, other):
        o = self._coerce(other, self.prec)
        if o is None:
            return NotImplemented
        return o / self

    def div_int(self, d: int) -> "CertifiedReal":
        """Fast exact division by a positive integer (outward rounding)."""
        if d <= 0:
            raise ValueError("div_int needs a positive divisor")
        lo, hi = self.mid - self.rad, self.mid + self.rad
        return CertifiedReal._from_bounds(lo // d, -((-hi) // d), self.prec)

    # -- comparisons (definite only) --------------------------------------

    def definitely_lt(self, other) -> bool:
        o = self._coerce(other, self.prec)
        return self.upper() < o.lower()

    def definitely_gt(self, other) -> bool:
        o = self._coerce(other, self.prec)
        return self.lower() > o.upper()

    # -- rendering ---------------------------------------------------------

    def decimal_digits(self) -> int:
        return max(1, int(self.prec * 0.30103))

    def __repr__(self):
        return f"CertifiedReal({self.decimal_str()})"

    def decimal_str(self, digits: int | None = None) -> str:
        """Render as ``mid ± rad`` with an explicit decimal digit count."""
        d = self.decimal_digits() if digits is None else digits
        return f"{_dec(self.midpoint(), d)} ± {_dec(self.radius(), min(d, 3), up=True)}"

    def to_json(self) -> dict:
        d = self.decimal_digits()
        return {"mid": _dec(self.midpoint(), d),
                "rad": _dec(self.radius(), min(d, 6), up=True),
                "bits": self.prec}


def _dec(fr: Fraction, digits: int, up: bool = False) -> str:
    """Decimal string of a Fraction with ``digits`` fractional digits.

    Truncates toward zero unless ``up``, which rounds away from zero (used
    for radii so the printed value never understates the error).
    """
    sign = "-" if fr < 0 else ""
    fr = abs(fr)
    scale = 10 ** digits
    num = fr.numerator * scale
    q, rem = divmod(num, fr.denominator)
    if up and rem:
        q += 1
    whole, frac = divmod(q, scale)
    return f"{sign}{whole}.{str(frac).zfill(digits)}"


def pow_rational(n: int, lam: Fraction, prec: int = 64) -> CertifiedReal:
    """Certified enclosure of ``n**lam`` for integer ``n >= 1``, rational
    ``lam >= 0``, radius at most ``2**-prec`` (exact when ``n**p`` is a
    perfect q-th power)."""
    if n < 1:
        raise ValueError("pow_rational needs n >= 1")
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError("pow_rational needs lam >= 0")
    p, q = lam.numerator, lam.denominator
    npow = n ** p
    if q == 1:
        return CertifiedReal.from_int(npow, prec)
    r, exact = int_nth_root(npow, q)
    if exact:
        return CertifiedReal.from_int(r, prec)
    scaled, _ = int_nth_root(npow << (q * prec), q)
    # n**lam in [scaled, scaled+1] / 2**prec
    return CertifiedReal._from_bounds(scaled, scaled + 1, prec)


def nearest_int_dist(x):
    """Distance to the nearest integer, ``|x|`` folded into ``[0, 1/2]``.

    Rational input gives an exact rational; CertifiedReal input gives a
    certified enclosure and requires radius < 1/4.
    """
    if isinstance(x, CertifiedReal):
        if x.rad * 4 >= (1 << x.prec):
            raise PrecisionError(
                "radius too large to fold to nearest-integer distance "
                f"(rad={float(x.radius()):.3g}, need < 1/4)")
        one = 1 << x.prec
        m = x.mid % one
        d = min(m, one - m)
        return CertifiedReal(d, x.rad, x.prec)
    fr = Fraction(x)
    t = fr - math.floor(fr)
    return min(t, 1 - t)
