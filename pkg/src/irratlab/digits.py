"""Digit-concatenation reals ``0.f(1)f(2)f(3)...`` in an integer base,
bounded-window eventual-periodicity detection with exact rational
reconstruction, and the ratio/power diagnostics for the block function.

Periodicity detection is sound but bounded: a report with ``found`` only
claims agreement on the digits actually materialized (``verified_digits``),
and absence of a period inside the search window is never interpreted as
irrationality.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import IrratlabError
from .exactnum import int_nth_root
from . import unipoly


def digit_count(n: int, base: int) -> int:
    """Number of base-``base`` digits of ``n >= 1``, by exact comparison
    against powers of the base."""
    if n < 1:
        raise ValueError("digit_count needs n >= 1")
    if base < 2:
        raise ValueError("base must be >= 2")
    length, power = 1, base
    while power <= n:
        power *= base
        length += 1
    return length


def to_digits(n: int, base: int) -> list:
    if n < 1:
        raise ValueError("block values must be >= 1")
    out = []
    while n:
        n, r = divmod(n, base)
        out.append(r)
    out.reverse()
    return out


def base_is_proper_power(base: int) -> bool:
    for k in range(2, base.bit_length() + 1):
        root, exact = int_nth_root(base, k)
        if exact and root >= 2:
            return True
    return False


class FSpec:
    """Block-value function: closed forms from a small grammar, or a table.

    kinds: polynomial in n, geometric ``a**n``, repunit
    ``(base**n - 1)/(base - 1)``, linear recurrence, explicit table.
    """

    def __init__(self, kind, **params):
        self.kind = kind
        self.params = params

    @classmethod
    def poly(cls, coeffs) -> "FSpec":
        return cls("poly", coeffs=unipoly.normalize(coeffs))

    @classmethod
    def power(cls, a: int) -> "FSpec":
        if a < 2:
            raise ValueError("power base must be >= 2")
        return cls("power", a=a)

    @classmethod
    def repunit(cls, base: int) -> "FSpec":
        return cls("repunit", base=base)

    @classmethod
    def linrec(cls, coeffs, initial) -> "FSpec":
        if len(coeffs) != len(initial) or not coeffs:
            raise ValueError("recurrence order must match initial count")
        return cls("linrec", coeffs=tuple(coeffs), initial=tuple(initial))

    @classmethod
    def table(cls, values) -> "FSpec":
        return cls("table", values=tuple(int(v) for v in values))

    @classmethod
    def parse(cls, text: str, base: int) -> "FSpec":
        """CLI grammar: ``repunit``, ``<a>^n``, polynomials in ``n``
        (e.g. ``n``, ``n^2+1``), ``table:1,2,3``, ``linrec:c1,..;f1,..``."""
        s = text.strip().replace(" ", "")
        if s == "repunit":
            return cls.repunit(base)
        m = re.fullmatch(r"(\d+)\^n", s)
        if m:
            return cls.power(int(m.group(1)))
        if s.startswith("table:"):
            return cls.table(int(v) for v in s[6:].split(","))
        if s.startswith("linrec:"):
            body = s[7:]
            cpart, fpart = body.split(";")
            return cls.linrec([int(v) for v in cpart.split(",")],
                              [int(v) for v in fpart.split(",")])
        return cls.poly(unipoly.parse(s.replace("n", "x")))

    def __call__(self, n: int) -> int:
        if self.kind == "poly":
            return int(unipoly.evaluate(self.params["coeffs"], n))
        if self.kind == "power":
            return self.params["a"] ** n
        if self.kind == "repunit":
            b = self.params["base"]
            return (b ** n - 1) // (b - 1)
        if self.kind == "linrec":
            coeffs, initial = self.params["coeffs"], self.params["initial"]
            k = len(coeffs)
            if n <= k:
                return initial[n - 1]
            window = list(initial)
            for _ in range(n - k):
                window.append(sum(c * w for c, w in zip(coeffs, window[-k:])))
            return window[-1]
        if self.kind == "table":
            values = self.params["values"]
            if n > len(values):
                raise IrratlabError(
                    f"table spec holds {len(values)} values, need f({n})")
            return values[n - 1]
        raise ValueError(f"unknown f kind {self.kind!r}")


class DigitStream:
    """Lazily materialized digit concatenation with block position index.

    ``block_starts[j]`` is the 1-based digit position where block ``j+1``
    begins.  Digits are stored 0-based internally.
    """

    def __init__(self, f, base: int):
        if base < 2:
            raise ValueError("base must be >= 2")
        if base > 256:
            raise ValueError("bases above 256 are not supported")
        self.f = f if callable(f) else FSpec.table(f)
        self.base = base
        self.base_flagged_proper_power = base_is_proper_power(base)
        self.digits = bytearray()
        self.block_starts = []
        self._next_block = 1

    def extend_to(self, n_digits: int) -> None:
        while len(self.digits) < n_digits:
            value = self.f(self._next_block)
            if value < 1:
                raise IrratlabError(
                    f"f({self._next_block}) = {value} is not positive")
            block = to_digits(value, self.base)
            self.block_starts.append(len(self.digits) + 1)
            self.digits.extend(block)
            self._next_block += 1

    def digit(self, position: int) -> int:
        """1-based digit access."""
        if position < 1:
            raise ValueError("digit positions start at 1")
        self.extend_to(position)
        return self.digits[position - 1]

    def materialized(self) -> bytes:
        return bytes(self.digits)

    def render(self, blocks: bool = False) -> str:
        if self.base > 10:
            sep = "," if not blocks else None
            if blocks:
                parts, out = list(self.block_starts) + [len(self.digits) + 1], []
                for a, b in zip(parts, parts[1:]):
                    out.append(",".join(str(d) for d in self.digits[a - 1:b - 1]))
                return " ".join(out)
            return ",".join(str(d) for d in self.digits)
        s = "".join(str(d) for d in self.digits)
        if not blocks:
            return s
        parts = list(self.block_starts) + [len(self.digits) + 1]
        return " ".join(s[a - 1:b - 1] for a, b in zip(parts, parts[1:]))


def build_stream(f, base: int, n_digits: int) -> DigitStream:
    """Materialize at least ``n_digits`` digits of ``0.f(1)f(2)...``."""
    stream = DigitStream(f, base)
    stream.extend_to(n_digits)
    return stream


@dataclass(frozen=True)
class PeriodReport:
    found: bool
    preperiod: int
    period: int
    reconstructed: Fraction | None
    verified_digits: int

    def to_json(self) -> dict:
        out = {"found": self.found, "s": self.preperiod, "p": self.period,
               "verified_digits": self.verified_digits}
        if self.reconstructed is not None:
            out["num"] = self.reconstructed.numerator
            out["den"] = self.reconstructed.denominator
        return out


def rational_digits(value: Fraction, base: int, count: int) -> list:
    """First ``count`` base-``base`` digits of a rational in [0, 1)."""
    value = Fraction(value)
    if not 0 <= value < 1:
        raise ValueError("value must lie in [0, 1)")
    num, den = value.numerator, value.denominator
    out = []
    for _ in range(count):
        num *= base
        d, num = divmod(num, den)
        out.append(d)
    return out


def reconstruct_rational(digits, preperiod: int, period: int,
                         base: int) -> Fraction:
    prefix = 0
    for d in digits[:preperiod]:
        prefix = prefix * base + d
    block = 0
    for d in digits[preperiod:preperiod + period]:
        block = block * base + d
    return (Fraction(prefix, base ** preperiod)
            + Fraction(block, base ** preperiod * (base ** period - 1)))


def detect_period(source, max_preperiod: int, max_period: int,
                  base: int | None = None) -> PeriodReport:
    """Lexicographically minimal ``(s, p)`` with ``s <= max_preperiod`` and
    ``p <= max_period`` consistent with every materialized digit, plus the
    exact rational whose expansion eventually has that period.

    ``source`` is a :class:`DigitStream` or a plain digit sequence (then
    ``base`` is required).  At least ``max_preperiod + 3*max_period`` digits
    must be available.
    """
    if isinstance(source, DigitStream):
        digits = source.materialized()
        base = source.base
    else:
        if base is None:
            raise ValueError("raw digit sequences need an explicit base")
        digits = bytes(source)
    need = max_preperiod + 3 * max_period
    if len(digits) < need:
        raise IrratlabError(
            f"need at least {need} digits for (s <= {max_preperiod}, "
            f"p <= {max_period}); have {len(digits)}")

    length = len(digits)
    # minimal admissible preperiod for each candidate period
    min_s = {}
    for p in range(1, max_period + 1):
        last_mismatch = -1
        for i in range(length - p - 1, -1, -1):
            if digits[i] != digits[i + p]:
                last_mismatch = i
                break
        min_s[p] = last_mismatch + 1

    for s in range(0, max_preperiod + 1):
        for p in range(1, max_period + 1):
            if min_s[p] <= s:
                value = reconstruct_rational(digits, s, p, base)
                assert rational_digits(value, base, length) == list(digits), \
                    "reconstruction failed to reproduce the observed digits"
                return PeriodReport(True, s, p, value, length)
    return PeriodReport(False, 0, 0, None, length)


def check_ratio_conclusion(f, base: int, n1: int, n2: int,
                           c_candidate: int | None = None) -> dict:
    """Diagnostics for the block-ratio behaviour of ``f`` on ``[n1, n2]``:
    convergence of ``f(n+1)/f(n)`` (last-quartile spread), the nearest power
    of the base to the limit estimate, and boundedness of
    ``|f(n+1) - c*f(n)|`` for the candidate or detected ``c``."""
    if not callable(f):
        f = FSpec.table(f)
    if n2 <= n1:
        raise ValueError("need n2 > n1")
    values = [f(n) for n in range(n1, n2 + 2)]
    if any(v < 1 for v in values):
        raise IrratlabError("f must be positive on the whole range")
    ratios = [Fraction(b, a) for a, b in zip(values, values[1:])]
    quartile = ratios[3 * len(ratios) // 4:]
    c_est = float(quartile[-1])
    spread = max(abs(float(r) - c_est) for r in quartile)
    j = round(math.log(c_est, base)) if c_est >= 1 else 0
    j = max(j, 0)
    nearest_power = base ** j
    rel_gap = abs(c_est - nearest_power) / nearest_power
    c_used = c_candidate if c_candidate is not None else nearest_power
    max_residual = max(abs(b - c_used * a) for a, b in zip(values, values[1:]))
    return {
        "n1": n1, "n2": n2,
        "ratio_limit_estimate": c_est,
        "ratio_last_quartile_spread": spread,
        "nearest_power_of_base": nearest_power,
        "power_exponent": j,
        "relative_gap": rel_gap,
        "c_used": c_used,
        "max_abs_residual": str(max_residual),
        "residual_bounded_by_base": max_residual <= base,
        "base_is_proper_power": base_is_proper_power(base),
    }
