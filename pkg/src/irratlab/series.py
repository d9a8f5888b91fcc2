"""Exact partial sums with certified tails for factorially convergent series.

Covers the floor-power series ``sum [n**lam]/n!``, prime-polynomial series
``sum P(p_n)/n!``, the injectivity witness and integral-power cover count
used to separate distinct exponents, and the certified nearest-integer
residual of the truncated power-phase sum.

Every returned bound is unconditionally valid: geometric tail domination is
checked by an exact integer inequality; when the requested truncation index
sits below the checkable range, the gap is bridged term by term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import unipoly
from .errors import CapacityError, DominationError, PrecisionError
from .exactnum import (CertifiedReal, DEFAULT_MAX_PREC, certified_floor,
                       factorial, nearest_int_dist, pow_ceil, pow_rational)


@dataclass(frozen=True)
class PartialSum:
    """Exact truncated value plus a certified rational tail bound."""

    value: Fraction
    tail_bound: Fraction
    n_terms: int

    def bracket(self) -> tuple[Fraction, Fraction]:
        return self.value - self.tail_bound, self.value + self.tail_bound

    def to_json(self) -> dict:
        return {"value": str(self.value),
                "tail_bound": str(self.tail_bound),
                "n": self.n_terms}


def _domination_ok(lam: Fraction, n: int) -> bool:
    # term ratio at n: ((n+1)/n)**(lam+1) / (n+1) <= 1/2, i.e.
    # 2**q * (n+1)**p <= n**(p+q) for lam+1 = p/q
    r = lam + 1
    p, q = r.numerator, r.denominator
    return (1 << q) * (n + 1) ** p <= n ** (p + q)


def min_admissible_n(lam: Fraction) -> int:
    n = 1
    while not _domination_ok(lam, n):
        n += 1
        if n > 10 ** 6:
            raise DominationError("no admissible truncation index found", min_n=None)
    return n


def tail_bound(lam: Fraction, n: int) -> Fraction:
    """Rational ``B`` with ``sum_{m>n} m**(lam+1)/m! <= B``.

    Uses geometric domination with ratio <= 1/2 starting at ``n+1``; below
    the checkable index this raises :class:`DominationError` carrying the
    minimal admissible ``n``.
    """
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError("tail_bound needs lam >= 0")
    if n < 1:
        raise ValueError("tail_bound needs n >= 1")
    if not _domination_ok(lam, n):
        m = min_admissible_n(lam)
        raise DominationError(
            f"tail domination fails at n={n}; smallest admissible n is {m}",
            min_n=m)
    return Fraction(2 * pow_ceil(n + 1, lam + 1), factorial(n + 1))


def tail_bound_total(lam: Fraction, n: int) -> Fraction:
    """Like :func:`tail_bound` but total: for small ``n`` the terms up to the
    first admissible index are added exactly (via integer power ceilings)."""
    lam = Fraction(lam)
    if _domination_ok(lam, n):
        return tail_bound(lam, n)
    m = min_admissible_n(lam)
    bridge = sum((Fraction(pow_ceil(j, lam + 1), factorial(j))
                  for j in range(n + 1, m + 1)), Fraction(0))
    return bridge + tail_bound(lam, m)


def s_lambda_partial(lam: Fraction, n: int) -> PartialSum:
    """Exact ``sum_{m=0}^{n} [m**lam]/m!`` with a certified tail bound.

    ``lam`` must be a positive rational; ``lam = 0`` is rejected because the
    leading ``0**0`` term has no distinguished value (the ``m = 0`` term is
    defined as 0 for ``lam > 0``).
    """
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("s_lambda_partial needs a positive rational lam "
                         "(lam = 0 is excluded: 0**0 is not assigned a value)")
    if n < 1:
        raise ValueError("s_lambda_partial needs n >= 1")
    value = Fraction(0)
    for m in range(n, 0, -1):
        value = (value + certified_floor(m, lam)) / m
    return PartialSum(value, tail_bound_total(lam, n), n)


def prime_series_partial(coeffs, n: int, table) -> PartialSum:
    """Exact ``sum_{m=1}^{n} P(p_m)/m!`` for an integer polynomial ``P``.

    The tail bound majorizes ``|P(p_m)|`` by substituting the bound
    ``p_m <= 2 m ln m`` (checked against the sieve on the covered range)
    with a rational upper bound for the logarithm.
    """
    coeffs = unipoly.normalize(coeffs)
    if unipoly.is_zero(coeffs):
        raise ValueError("prime polynomial must not vanish identically")
    if n < 1:
        raise ValueError("prime_series_partial needs n >= 1")
    if table.count < n:
        raise CapacityError(
            f"prime table holds {table.count} primes, need {n}", required=n)
    table.validate_chebyshev()
    value = Fraction(0)
    for m in range(n, 0, -1):
        value = (value + unipoly.evaluate(coeffs, int(table.nth_prime(m)))) / m
    return PartialSum(value, _prime_tail_bound(coeffs, n, table), n)


def _prime_upper(m: int) -> Fraction:
    # p_m <= 2 m ln m <= 2 m * 0.6932 * bitlength(m) for m >= 2
    return 2 * m * Fraction(6932, 10000) * m.bit_length()


def _abs_poly_upper(coeffs, bound: Fraction) -> Fraction:
    return sum(abs(c) * bound ** j for j, c in enumerate(coeffs))


def _prime_tail_bound(coeffs, n: int, table) -> Fraction:
    k = unipoly.degree(coeffs)
    start = max(n, 2 * 4 ** k, 3)
    bridge = Fraction(0)
    for m in range(n + 1, start + 1):
        if m <= table.count:
            t = abs(unipoly.evaluate(coeffs, int(table.nth_prime(m))))
        else:
            t = _abs_poly_upper(coeffs, _prime_upper(m))
        bridge += Fraction(t, factorial(m))
    # beyond `start`: p-bound at most quadruples per step, so the term ratio
    # is at most 4**k/(m+1) <= 1/2
    geom = 2 * Fraction(_abs_poly_upper(coeffs, _prime_upper(start + 1)),
                        factorial(start + 1))
    return bridge + geom


def euler_e_partial(n: int) -> PartialSum:
    """``sum_{m=0}^{n} 1/m!`` with tail bound ``2/(n+1)!``."""
    if n < 1:
        raise ValueError("euler_e_partial needs n >= 1")
    value = Fraction(0)
    for m in range(n, 0, -1):
        value = (value + 1) / m
    return PartialSum(value + 1, Fraction(2, factorial(n + 1)), n)


def exceeds_by_one(n: int, lam1: Fraction, lam2: Fraction,
                   max_prec: int = DEFAULT_MAX_PREC) -> bool:
    """Exactly decide ``n**lam2 > n**lam1 + 1`` for rationals lam2 > lam1 >= 0.

    Perfect powers are compared as integers; otherwise dyadic floors are
    compared at escalating precision (equality of the two sides is only
    possible in the all-integer case, so escalation terminates).
    """
    from .exactnum import int_nth_root
    p1, q1 = lam1.numerator, lam1.denominator
    p2, q2 = lam2.numerator, lam2.denominator
    a_pow, b_pow = n ** p1, n ** p2
    r1, exact1 = int_nth_root(a_pow, q1)
    if exact1:
        return b_pow > (r1 + 1) ** q2
    s = 32
    while s <= max_prec:
        f1, _ = int_nth_root(a_pow << (s * q1), q1)
        f2, _ = int_nth_root(b_pow << (s * q2), q2)
        if f2 >= f1 + (1 << s) + 1:
            return True
        if f2 + 1 <= f1 + (1 << s):
            return False
        s *= 2
    raise PrecisionError("power comparison undecided at maximum precision",
                         required_bits=s)


def injectivity_witness(lam1: Fraction, lam2: Fraction) -> int:
    """Minimal ``n0`` with ``n0**lam2 > n0**lam1 + 1`` (hence for all
    ``n >= n0``, as the power gap grows monotonically for n >= 1)."""
    lam1, lam2 = Fraction(lam1), Fraction(lam2)
    if not (0 <= lam1 < lam2):
        raise ValueError("need 0 <= lam1 < lam2")
    hi = 2
    while not exceeds_by_one(hi, lam1, lam2):
        hi *= 2
        if hi > 1 << 62:
            raise PrecisionError("no witness found below 2**62")
    lo = max(1, hi // 2)
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if exceeds_by_one(mid, lam1, lam2):
            hi = mid
        else:
            lo = mid
    return hi if not exceeds_by_one(lo, lam1, lam2) else lo


def cover_count(t: Fraction, n: int) -> int:
    """``sum_{m=2}^{n} #{integers in [m**t, m**(t+1)]}``, the number of
    exponents in ``[t, t+1]`` at which some ``m <= n`` has an integral
    power.  Verified against the bound ``n**(t+2)`` before returning."""
    t = Fraction(t)
    if t < 0:
        raise ValueError("cover_count needs t >= 0")
    if n < 2:
        raise ValueError("cover_count needs n >= 2")
    total = 0
    for m in range(2, n + 1):
        lo = pow_ceil(m, t)
        hi = certified_floor(m, t + 1)
        total += max(0, hi - lo + 1)
    e = t + 2
    p, q = e.numerator, e.denominator
    assert total ** q <= n ** p, "cover count exceeded its stated bound"
    return total


def truncated_phase(a, lams, depth: int, n: int, prec: int = 64) -> CertifiedReal:
    """Certified value of
    ``sum_{v=1}^{depth} (a_1 (n+v)**lam_1 + ... + a_k (n+v)**lam_k)
    / ((n+1)...(n+v))`` at integer ``n``."""
    lams = [Fraction(l) for l in lams]
    if len(a) != len(lams):
        raise ValueError("coefficient and exponent counts differ")
    acc = CertifiedReal.from_int(0, prec)
    denom = 1
    for v in range(1, depth + 1):
        denom *= n + v
        term = CertifiedReal.from_int(0, prec)
        for ai, li in zip(a, lams):
            if ai == 0:
                continue
            term = term + pow_rational(n + v, li, prec) * ai
        acc = acc + term.div_int(denom)
    return acc


def residual_norm(a, lams, n: int, prec: int = 64,
                  include_tail: bool = True,
                  max_prec: int = DEFAULT_MAX_PREC) -> CertifiedReal:
    """Certified nearest-integer distance of the truncated power-phase sum
    at ``n``, truncation depth ``M = [lam_k] + 1``.

    With ``include_tail`` the radius additionally absorbs an explicit
    majorant for all discarded terms of depth > M, so the result encloses
    the nearest-integer distance of the full series remainder.
    """
    lams = [Fraction(l) for l in lams]
    if len(a) != len(lams):
        raise ValueError("coefficient and exponent counts differ")
    if sorted(lams) != lams or len(set(lams)) != len(lams):
        raise ValueError("exponents must be strictly increasing")
    if all(c == 0 for c in a):
        return CertifiedReal.from_int(0, prec)
    lam_k = lams[-1]
    m_depth = int(lam_k) + 1
    if n <= m_depth:
        raise ValueError(f"need n > {m_depth} for this exponent range")

    tail = Fraction(0)
    if include_tail:
        # terms of depth v > M: |term_v| <= A*(n+v)**lam_k/((n+1)...(n+v)),
        # successive ratios <= 2**ceil(lam_k)/(n+M+2) <= 1/2
        if (n + m_depth + 2) < 2 ** (math.ceil(lam_k) + 1):
            raise PrecisionError(
                f"n={n} too small to certify the discarded depth-> {m_depth} tail")
        amax = sum(abs(c) for c in a)
        denom = 1
        for v in range(1, m_depth + 2):
            denom *= n + v
        tail = 2 * amax * Fraction(pow_ceil(n + m_depth + 1, lam_k), denom)

    w = prec
    while True:
        val = truncated_phase(a, lams, m_depth, n, w)
        # absorb the tail majorant into the radius (rounded up to a whole ulp)
        extra = -((-tail.numerator << w) // tail.denominator) if tail else 0
        cand = CertifiedReal(val.mid, val.rad + extra, w)
        if cand.rad * 4 < (1 << w):
            return nearest_int_dist(cand)
        if w >= max_prec:
            raise PrecisionError("residual fold undecidable at maximum precision",
                                 required_bits=w)
        w *= 2
