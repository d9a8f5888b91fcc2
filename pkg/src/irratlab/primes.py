"""Segmented prime sieve with indexed access, prime-gap windows,
constellation counting, and the inverse logarithmic integral.

The sieve produces an immutable :class:`PrimeTable` holding a packed
primality bitmap (for membership queries) and the sorted prime array (for
``p_n`` and ``pi(x)``).  The bitmap can be cached on disk in a small
self-describing binary format; a cache whose limit does not match the
request is ignored and rebuilt.
"""

from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapacityError, ConvergenceError

SIEVE_MAGIC = b"IRSV"
SIEVE_VERSION = 1
DEFAULT_SEGMENT = 1 << 20


def _simple_sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = False
    return flags


def sieve_flags(limit: int, segment_size: int = DEFAULT_SEGMENT) -> np.ndarray:
    """Boolean primality array for 0..limit, sieved in segments."""
    if limit < 2:
        out = np.zeros(limit + 1, dtype=bool)
        return out
    root = math.isqrt(limit)
    base = _simple_sieve(root)
    small = np.flatnonzero(base)
    flags = np.zeros(limit + 1, dtype=bool)
    flags[: root + 1] = base
    lo = root + 1
    while lo <= limit:
        hi = min(lo + segment_size - 1, limit)
        seg = np.ones(hi - lo + 1, dtype=bool)
        for p in small:
            p = int(p)
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start <= hi:
                seg[start - lo::p] = False
        flags[lo:hi + 1] = seg
        lo = hi + 1
    return flags


class PrimeTable:
    """Immutable sieve result: primality lookups, ``p_n``, and ``pi(x)``."""

    def __init__(self, limit: int, flags: np.ndarray):
        self.limit = int(limit)
        self._flags = flags
        self._primes = np.flatnonzero(flags).astype(np.int64)
        self._chebyshev_ok = None

    @classmethod
    def build(cls, limit: int, segment_size: int = DEFAULT_SEGMENT) -> "PrimeTable":
        return cls(limit, sieve_flags(limit, segment_size))

    # -- queries -----------------------------------------------------------

    @property
    def count(self) -> int:
        return len(self._primes)

    @property
    def primes(self) -> np.ndarray:
        return self._primes

    def is_prime(self, m: int) -> bool:
        if not 0 <= m <= self.limit:
            raise CapacityError(f"{m} outside sieved range [0, {self.limit}]",
                                required=m)
        return bool(self._flags[m])

    def nth_prime(self, n: int) -> int:
        if n < 1:
            raise ValueError("prime indices start at 1")
        if n > self.count:
            need = self.limit_for_count(n)
            raise CapacityError(
                f"table holds {self.count} primes (limit {self.limit}); "
                f"p_{n} needs a sieve limit of about {need}", required=need)
        return int(self._primes[n - 1])

    def pi(self, x: int) -> int:
        if x > self.limit:
            raise CapacityError(f"pi({x}) beyond sieve limit {self.limit}",
                                required=x)
        return int(np.searchsorted(self._primes, x, side="right"))

    def gaps(self, start: int, count: int) -> "GapSequence":
        if count < 0:
            raise ValueError("gap count must be nonnegative")
        if count == 0:
            return GapSequence(start, ())
        self.nth_prime(start + count)  # capacity check
        ps = self._primes[start - 1: start + count]
        return GapSequence(start, tuple(int(d) for d in np.diff(ps)))

    @staticmethod
    def limit_for_count(n: int) -> int:
        if n < 6:
            return 16
        x = n * (math.log(n) + math.log(math.log(n)))
        return int(x * 1.2) + 16

    def validate_chebyshev(self) -> bool:
        """Check ``p_m <= 2 m ln m`` for all covered ``m >= 3`` (cached)."""
        if self._chebyshev_ok is None:
            m = np.arange(3, self.count + 1, dtype=np.float64)
            ok = np.all(self._primes[2:] <= 2.0 * m * np.log(m))
            self._chebyshev_ok = bool(ok)
        if not self._chebyshev_ok:
            raise AssertionError("prime bound p_m <= 2 m ln m failed on the "
                                 "sieved range")
        return True

    # -- on-disk cache ------------------------------------------------------

    def save(self, path: str) -> None:
        packed = np.packbits(self._flags, bitorder="little")
        pad = (-len(packed)) % 8
        if pad:
            packed = np.concatenate([packed, np.zeros(pad, dtype=np.uint8)])
        with open(path, "wb") as fh:
            fh.write(SIEVE_MAGIC)
            fh.write(struct.pack("<IQ", SIEVE_VERSION, self.limit))
            fh.write(packed.tobytes())

    @classmethod
    def load(cls, path: str) -> "PrimeTable":
        with open(path, "rb") as fh:
            magic = fh.read(4)
            if magic != SIEVE_MAGIC:
                raise ValueError(f"{path}: not a sieve cache (bad magic)")
            version, limit = struct.unpack("<IQ", fh.read(12))
            if version != SIEVE_VERSION:
                raise ValueError(f"{path}: unsupported cache version {version}")
            packed = np.frombuffer(fh.read(), dtype=np.uint8)
        flags = np.unpackbits(packed, bitorder="little")[: limit + 1].astype(bool)
        return cls(limit, flags)

    @classmethod
    def load_or_build(cls, limit: int, cache_path: str | None = None,
                      segment_size: int = DEFAULT_SEGMENT) -> "PrimeTable":
        """Use ``cache_path`` when it exists and matches ``limit`` exactly;
        otherwise sieve and (re)write the cache."""
        if cache_path is None:
            cache_path = os.environ.get("IRRATLAB_SIEVE_CACHE")
        if cache_path and os.path.exists(cache_path):
            try:
                table = cls.load(cache_path)
                if table.limit == limit:
                    return table
            except (ValueError, OSError):
                pass
        table = cls.build(limit, segment_size)
        if cache_path:
            table.save(cache_path)
        return table


@dataclass(frozen=True)
class GapSequence:
    """Consecutive prime gaps ``p_{n+1} - p_n`` starting at index ``start``."""

    start: int
    gaps: tuple

    def __post_init__(self):
        if any(g <= 0 for g in self.gaps):
            raise ValueError("prime gaps must be positive")
        for i, g in enumerate(self.gaps):
            idx = self.start + i
            if idx == 1:
                if g != 1:
                    raise ValueError("the gap at index 1 must be 1")
            elif g % 2 != 0:
                raise ValueError(f"gap at index {idx} must be even")

    def __len__(self):
        return len(self.gaps)

    def __iter__(self):
        return iter(self.gaps)


@dataclass(frozen=True)
class OffsetTuple:
    """Strictly increasing nonnegative offsets defining a constellation."""

    offsets: tuple

    def __post_init__(self):
        o = self.offsets
        if not o:
            raise ValueError("offset tuple must be nonempty")
        if any(x < 0 for x in o) or any(a >= b for a, b in zip(o, o[1:])):
            raise ValueError("offsets must be strictly increasing and >= 0")

    @classmethod
    def of(cls, values) -> "OffsetTuple":
        return cls(tuple(int(v) for v in values))

    def __iter__(self):
        return iter(self.offsets)

    def __len__(self):
        return len(self.offsets)


def nu(p: int, offsets: OffsetTuple) -> int:
    """Number of distinct residues mod ``p`` among ``{0} | offsets``."""
    residues = {0}
    residues.update(a % p for a in offsets)
    return len(residues)


def constellation_count(table: PrimeTable, x: int, offsets: OffsetTuple) -> int:
    """Exact count of ``n`` in ``[x, 2x]`` with ``n + a`` prime for all
    offsets ``a``."""
    if not isinstance(offsets, OffsetTuple):
        offsets = OffsetTuple.of(offsets)
    top = 2 * x + max(offsets.offsets)
    if top > table.limit:
        raise CapacityError(f"need sieve limit {top}, have {table.limit}",
                            required=top)
    mask = np.ones(x + 1, dtype=bool)
    for a in offsets:
        mask &= table._flags[x + a: 2 * x + a + 1]
    return int(np.count_nonzero(mask))


def selberg_bound(x: int, k: int, constant: float = 1.0) -> float:
    """Evaluate ``C * x * (log log x)**(k+2) / (log x)**(k+1)``."""
    if x < 16:
        raise ValueError("x must be at least 16 so that log log x > 1")
    lx = math.log(x)
    return constant * x * math.log(lx) ** (k + 2) / lx ** (k + 1)


def gap_poly_nonvanish_rate(table: PrimeTable, poly, n_start: int,
                            n_count: int) -> Fraction:
    """Fraction of ``n`` in ``[n_start, n_start + n_count)`` where the gap
    polynomial does not vanish on ``(delta_n, ..., delta_{n+m-1})``."""
    if poly.is_zero():
        raise ValueError("gap polynomial must not vanish identically")
    if n_count < 1:
        raise ValueError("window must be nonempty")
    m = poly.nvars
    window = table.gaps(n_start, n_count + m - 1).gaps
    nonzero = 0
    for i in range(n_count):
        if poly.eval(window[i:i + m]) != 0:
            nonzero += 1
    return Fraction(nonzero, n_count)


def gap_poly_experiment(table: PrimeTable, poly, n_start: int, n_count: int) -> dict:
    """Nonvanishing rate plus the same rate on the subwindow where every gap
    obeys the size cut ``log p_n * log log p_n`` (reported separately)."""
    m = poly.nvars
    window = table.gaps(n_start, n_count + m - 1).gaps
    pn = table.nth_prime(n_start)
    cut = math.log(pn) * math.log(math.log(pn))
    nonzero = kept = kept_nonzero = 0
    for i in range(n_count):
        gs = window[i:i + m]
        nz = poly.eval(gs) != 0
        nonzero += nz
        if max(gs) <= cut:
            kept += 1
            kept_nonzero += nz
    return {
        "start": n_start,
        "count": n_count,
        "rate": str(Fraction(nonzero, n_count)),
        "rate_float": nonzero / n_count,
        "gap_cut": cut,
        "discarded": n_count - kept,
        "rate_within_cut_float": (kept_nonzero / kept) if kept else None,
    }


# -- logarithmic integral ----------------------------------------------------

def _simpson(f, a, b):
    c = 0.5 * (a + b)
    return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b)), c


def _adaptive(f, a, b, whole, tol, depth):
    mid = 0.5 * (a + b)
    left, _ = _simpson(f, a, mid)
    right, _ = _simpson(f, mid, b)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return (_adaptive(f, a, mid, left, tol / 2.0, depth - 1)
            + _adaptive(f, mid, b, right, tol / 2.0, depth - 1))


def li(y: float, tol: float = 1e-12) -> float:
    """``integral_2^y dt/ln t`` by adaptive Simpson quadrature."""
    if y < 2:
        raise ValueError("li is evaluated on [2, inf) here")
    if y == 2:
        return 0.0
    f = lambda t: 1.0 / math.log(t)
    whole, _ = _simpson(f, 2.0, float(y))
    return _adaptive(f, 2.0, float(y), whole, tol, 60)


def li_inverse(t: float, tol: float = 1e-9, max_iter: int = 80) -> float:
    """Solve ``li(y) = t`` for ``t >= 2``: bracketed Newton iteration with
    the analytic derivative ``1/ln y``; the residual is verified <= tol."""
    if t < 2:
        raise ValueError("li_inverse needs t >= 2")
    lo = 2.0
    hi = t * (math.log(t) + math.log(math.log(t))) if t >= 3 else 16.0
    hi = max(hi, 8.0)
    while li(hi, tol / 4) < t:
        hi *= 2.0
    y = hi
    for _ in range(max_iter):
        r = li(y, tol / 4) - t
        if abs(r) <= 0.75 * tol:
            return y
        if r > 0:
            hi = min(hi, y)
        else:
            lo = max(lo, y)
        step = -r * math.log(y)
        nxt = y + step
        if not (lo < nxt < hi):
            nxt = 0.5 * (lo + hi)
        y = nxt
    raise ConvergenceError(f"li_inverse: no convergence to tol={tol} "
                           f"within {max_iter} iterations")


def li_inverse_seq(n_values, tol: float = 1e-9):
    """Yield ``li_inverse(n)`` over an increasing integer range, reusing the
    previous solution as a warm start and integrating incrementally."""
    f = lambda u: 1.0 / math.log(u)
    y = None
    acc = 0.0
    for n in n_values:
        t = float(n)
        if y is None:
            y = li_inverse(t, tol)
            acc = li(y, tol / 4)
        else:
            for _ in range(60):
                r = acc - t
                if abs(r) <= 0.75 * tol:
                    break
                y2 = y - r * math.log(y)
                a, b = min(y, y2), max(y, y2)
                whole, _ = _simpson(f, a, b)
                inc = _adaptive(f, a, b, whole, tol / 8, 40)
                acc += inc if y2 > y else -inc
                y = y2
            else:
                raise ConvergenceError("incremental li inversion stalled")
        yield y
