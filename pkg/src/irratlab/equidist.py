"""Exact star discrepancy, exponential-sum magnitudes, and explicit
evaluators for the classical discrepancy bounds, plus the two built-in
equidistribution experiments (certified power-phase sequences and the
polynomial-of-prime-ratio sequences).

Discrepancy is computed exactly on rational entries via the sorted-sequence
formula; exponential sums use double precision after exact mod-1 reduction
(the phase error is at most ``N * 2**-45`` and is reported alongside).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import unipoly
from .errors import PrecisionError
from .exactnum import DEFAULT_MAX_PREC, CertifiedReal
from .primes import li_inverse_seq
from .series import truncated_phase


@dataclass(frozen=True)
class Mod1Sequence:
    """Finite sequence of exact rationals in [0, 1)."""

    entries: tuple

    def __post_init__(self):
        if not self.entries:
            raise ValueError("sequence must be nonempty")
        if any(not (0 <= e < 1) for e in self.entries):
            raise ValueError("entries must lie in [0, 1)")

    @classmethod
    def from_values(cls, values) -> "Mod1Sequence":
        return cls(tuple(Fraction(v) % 1 for v in values))

    def __len__(self):
        return len(self.entries)

    def floats(self) -> np.ndarray:
        return np.array([float(e) for e in self.entries], dtype=np.float64)


def fold_certified(value: CertifiedReal) -> Fraction | None:
    """Fractional part of a certified value, or None when the enclosure
    straddles an integer."""
    one = 1 << value.prec
    m = value.mid % one
    if m < value.rad or one - m <= value.rad:
        return None
    return Fraction(m, one)


@dataclass(frozen=True)
class PhaseSpec:
    """Sequence generator specification.

    kinds: ``power_phase`` (certified truncated power-phase sums),
    ``prime_ratio`` (``Q(p_n/n)`` exactly), ``linear`` (``alpha*n`` exactly).
    """

    kind: str
    a: tuple = ()
    lams: tuple = ()
    depth: int = 0
    qcoeffs: tuple = ()
    alpha: Fraction = Fraction(0)

    @classmethod
    def power_phase(cls, a, lams, depth: int | None = None) -> "PhaseSpec":
        lams = tuple(Fraction(l) for l in lams)
        if any(l2 <= l1 for l1, l2 in zip(lams, lams[1:])):
            raise ValueError("exponents must be strictly increasing")
        if len(a) != len(lams):
            raise ValueError("coefficient and exponent counts differ")
        if depth is None:
            depth = int(lams[-1]) + 1
        return cls("power_phase", a=tuple(int(c) for c in a), lams=lams,
                   depth=depth)

    @classmethod
    def prime_ratio(cls, qcoeffs) -> "PhaseSpec":
        qc = unipoly.normalize(qcoeffs)
        if unipoly.degree(qc) < 1:
            raise ValueError("prime-ratio polynomial must be nonconstant")
        return cls("prime_ratio", qcoeffs=qc)

    @classmethod
    def linear(cls, alpha) -> "PhaseSpec":
        return cls("linear", alpha=Fraction(alpha))


def frac_parts(spec: PhaseSpec, n1: int, n2: int, table=None,
               prec: int = 64, max_prec: int = DEFAULT_MAX_PREC) -> Mod1Sequence:
    """Fractional parts of the phase at integer arguments ``n1..n2``
    (inclusive).  Certified kinds are evaluated to width below ``2**-40``
    before folding, escalating precision on fold ambiguity."""
    if n2 < n1:
        raise ValueError("empty evaluation range")
    entries = []
    if spec.kind == "linear":
        for n in range(n1, n2 + 1):
            entries.append((spec.alpha * n) % 1)
    elif spec.kind == "prime_ratio":
        if table is None:
            raise ValueError("prime_ratio phases need a prime table")
        table.nth_prime(n2)
        for n in range(n1, n2 + 1):
            v = unipoly.evaluate(spec.qcoeffs, Fraction(table.nth_prime(n), n))
            entries.append(v % 1)
    elif spec.kind == "power_phase":
        for n in range(n1, n2 + 1):
            w = max(prec, 44)
            while True:
                val = truncated_phase(spec.a, spec.lams, spec.depth, n, w)
                folded = fold_certified(val) if val.rad * (1 << 41) < (1 << w) \
                    else None
                if folded is not None:
                    entries.append(folded)
                    break
                if w >= max_prec:
                    raise PrecisionError(
                        f"fold ambiguous at n={n} up to {w} bits",
                        required_bits=w)
                w *= 2
    else:
        raise ValueError(f"unknown phase kind {spec.kind!r}")
    return Mod1Sequence(tuple(entries))


def star_discrepancy(seq: Mod1Sequence) -> Fraction:
    """Exact ``D*_N = max_i max(i/N - x_(i), x_(i) - (i-1)/N)`` over the
    sorted entries; always in ``[1/(2N), 1]``."""
    xs = sorted(seq.entries)
    n = len(xs)
    best_num, best_den = 0, 1
    for i, x in enumerate(xs, start=1):
        a, b = x.numerator, x.denominator
        den = n * b
        for num in (i * b - n * a, n * a - (i - 1) * b):
            if num * best_den > best_num * den:
                best_num, best_den = num, den
    return Fraction(best_num, best_den)


def exp_sum(seq: Mod1Sequence, h: int) -> float:
    """``|sum_n exp(2*pi*i*h*x_n)|`` in double precision."""
    if h < 1:
        raise ValueError("harmonic h must be >= 1")
    x = seq.floats()
    return float(abs(np.exp(2j * np.pi * h * x).sum()))


def exp_sum_phase_error(n: int) -> float:
    """A-priori magnitude error bound of :func:`exp_sum` accumulation."""
    return n * 2.0 ** -45


def erdos_turan_bound(seq: Mod1Sequence, big_h: int) -> float:
    """Explicit form ``1/(H+1) + (3/N) * sum_{h<=H} |S_h| / h`` that
    dominates the exact star discrepancy."""
    if big_h < 1:
        raise ValueError("H must be >= 1")
    n = len(seq)
    total = sum(exp_sum(seq, h) / h for h in range(1, big_h + 1))
    return 1.0 / (big_h + 1) + 3.0 / n * total


def weyl_vdc_bound(n: int, lam: float, alpha: float, q: int = 0) -> float:
    """Second-derivative-test bound for ``|sum e(f(m))|`` when
    ``lam <= f^(q+2) <= alpha*lam`` on ``[1, n]``."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    if n < 1:
        raise ValueError("n must be >= 1")
    if q == 0:
        return alpha * n * math.sqrt(lam) + 1.0 / math.sqrt(lam)
    big_q = 2 ** q
    return (n * (alpha ** 2 * lam) ** (1.0 / (4 * big_q - 2))
            + n ** (1 - 1.0 / (2 * big_q)) * alpha ** (1.0 / (2 * big_q))
            + n ** (1 - 1.0 / (2 * big_q) + 1.0 / big_q ** 2)
            * lam ** (-1.0 / (2 * big_q)))


def power_phase_experiment(a, lams, n1: int, n2: int,
                           checkpoints: int = 0) -> dict:
    """Discrepancy of the certified power-phase sequence on ``[n1, n2]``;
    optional prefix checkpoints give (N, D*) rows for plot data."""
    spec = PhaseSpec.power_phase(a, lams)
    seq = frac_parts(spec, n1, n2)
    dstar = star_discrepancy(seq)
    rows = []
    if checkpoints > 0:
        n = len(seq)
        marks = sorted({int(round(n * (i + 1) / checkpoints))
                        for i in range(checkpoints)} - {0})
        for m in marks:
            prefix = Mod1Sequence(seq.entries[:m])
            rows.append({"N": m, "dstar": float(star_discrepancy(prefix))})
    return {
        "n1": n1, "n2": n2, "N": len(seq),
        "depth": spec.depth,
        "discrepancy_star": float(dstar),
        "discrepancy_star_exact": str(dstar),
        "expsum_err_bound": exp_sum_phase_error(len(seq)),
        "rows": rows,
    }


def prime_ratio_rhs(x: int, coeffs, c: float = 1.0,
                    constant: float = 1.0) -> dict:
    """Unnormalized bound ``C*(x*exp(-c*sqrt(log x)) +
    M**(1/3) * x**(2/3) * log(x)**(d/3))`` with its two components."""
    d = unipoly.degree(coeffs)
    m = unipoly.max_abs_coeff(coeffs)
    pnt_term = x * math.exp(-c * math.sqrt(math.log(x)))
    poly_term = m ** (1 / 3) * x ** (2 / 3) * math.log(x) ** (d / 3)
    return {"rhs": constant * (pnt_term + poly_term),
            "rhs_pnt_term": constant * pnt_term,
            "rhs_poly_term": constant * poly_term}


def prime_ratio_experiment(table, qcoeffs, x: int, big_h: int = 16,
                           c: float = 1.0, constant: float = 1.0,
                           substitute: bool = False,
                           li_tol: float = 1e-9) -> dict:
    """Exact discrepancy of ``(Q(p_n/n) mod 1)`` for ``n`` in ``[x, 2x]``
    against the asymptotic-shape bound and the explicit exponential-sum
    bound.

    With ``substitute`` the report also carries the largest gap between
    ``Q(p_n/n)`` and the same expression with the inverse logarithmic
    integral substituted for ``p_n``.
    """
    qcoeffs = unipoly.normalize(qcoeffs)
    spec = PhaseSpec.prime_ratio(qcoeffs)
    seq = frac_parts(spec, x, 2 * x, table=table)
    n = len(seq)
    dstar = star_discrepancy(seq)
    unnormalized = dstar * n
    rhs = prime_ratio_rhs(x, qcoeffs, c=c, constant=constant)
    report = {
        "x": x,
        "N": n,
        "discrepancy_star": float(dstar),
        "discrepancy_star_exact": str(dstar),
        "unnormalized": float(unnormalized),
        "et_rhs": erdos_turan_bound(seq, big_h),
        "H": big_h,
        "lemma6_rhs": rhs["rhs"],
        "rhs_pnt_term": rhs["rhs_pnt_term"],
        "rhs_poly_term": rhs["rhs_poly_term"],
        "c": c,
        "C": constant,
        "ratio": float(unnormalized) / rhs["rhs"],
        "expsum_err_bound": exp_sum_phase_error(n),
    }
    if substitute:
        gap = 0.0
        for num, li_val in zip(range(x, 2 * x + 1),
                               li_inverse_seq(range(x, 2 * x + 1), tol=li_tol)):
            exact = float(unipoly.evaluate(qcoeffs, Fraction(table.nth_prime(num), num)))
            approx = unipoly.evaluate(qcoeffs, li_val / num)
            gap = max(gap, abs(exact - approx))
        report["substitution_gap"] = gap
    return report
