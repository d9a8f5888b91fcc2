"""Integer-relation detection over certified high-precision values.

The detector either returns a candidate relation (with an exact residual
accounting against the certified radii) or an exclusion certificate: a bound
``B`` such that no integer vector of Euclidean norm at most ``B`` can be a
relation for any reals inside the certified intervals.  The bound comes from
the running invariant ``|m| >= 1 / max_j |H_jj|`` of the iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from . import series, unipoly
from .errors import IrratlabError, PrecisionError
from .exactnum import CertifiedReal


@dataclass(frozen=True)
class RealVector:
    """Certified constants sharing one working precision, with labels."""

    entries: tuple
    labels: tuple

    def __post_init__(self):
        if len(self.entries) < 2:
            raise ValueError("need at least two entries")
        if len(self.labels) != len(self.entries):
            raise ValueError("one label per entry")
        prec = self.prec
        cap = Fraction(1, 1 << max(1, prec - 8))
        for e in self.entries:
            if e.radius() > cap:
                raise ValueError("entry radius exceeds 2**-(prec-8)")

    @property
    def prec(self) -> int:
        return min(e.prec for e in self.entries)

    def __len__(self):
        return len(self.entries)

    @classmethod
    def from_fractions(cls, values, prec: int = 64, labels=None) -> "RealVector":
        values = [Fraction(v) for v in values]
        entries = tuple(CertifiedReal.from_fraction(v, prec) for v in values)
        labels = tuple(labels) if labels else tuple(str(v) for v in values)
        return cls(entries, labels)


@dataclass(frozen=True)
class RelationResult:
    outcome: str            # "relation" | "exclusion"
    coefficients: tuple | None
    bound: float | None
    residual: Fraction | None
    iterations: int
    partial: bool = False   # exclusion cut short by the iteration cap

    def to_json(self) -> dict:
        out = {"outcome": self.outcome, "iterations": self.iterations}
        if self.outcome == "relation":
            out["coefficients"] = list(self.coefficients)
            out["residual"] = (str(self.residual)
                               if self.residual is not None else None)
        else:
            out["bound"] = self.bound
            out["partial"] = self.partial
        return out


def _required_digits(n: int, max_norm: int) -> int:
    return int(math.ceil(1.2 * n * math.log10(max(2, max_norm)))) + 15


def pslq(vector: RealVector, max_norm: int = 10 ** 4,
         iter_cap: int = 20_000) -> RelationResult:
    """Run the relation search on the certified vector.

    Returns a relation branch with the exact midpoint residual, or an
    exclusion branch once the running lower bound on any relation's norm
    exceeds ``max_norm`` (a ``partial`` exclusion if the iteration cap
    strikes first).
    """
    if max_norm < 1:
        raise ValueError("max_norm must be >= 1")
    n = len(vector)
    prec_bits = vector.prec
    digits = int(prec_bits * 0.30103)
    need = _required_digits(n, max_norm)
    if digits < need:
        raise PrecisionError(
            f"{digits} digits insufficient for a norm-{max_norm} search on "
            f"{n} entries; need about {need} digits",
            required_bits=int(need / 0.30103) + 1)

    mids = [e.midpoint() for e in vector.entries]
    coeffs, bound, iters, hit_cap = _pslq_core(mids, digits, max_norm, iter_cap)

    if coeffs is not None:
        residual = abs(sum(Fraction(c) * m for c, m in zip(coeffs, mids)))
        slack = (sum(abs(c) * e.radius() for c, e in zip(coeffs, vector.entries))
                 + Fraction(1, 1 << (prec_bits // 2)))
        if residual <= slack:
            return RelationResult("relation", tuple(coeffs), None, residual,
                                  iters)
        # numerically plausible but not certified against the radii
        raise PrecisionError(
            "candidate relation failed the certified residual check; "
            "increase the working precision")
    # soundness of the exclusion for interval entries: the radii must be far
    # below the detection threshold at this norm
    max_rad = max(e.radius() for e in vector.entries)
    assert max_rad * max_norm * n < Fraction(1, 1 << (prec_bits // 2)), \
        "radii too large for an interval-level exclusion certificate"
    return RelationResult("exclusion", None, bound, None, iters,
                          partial=hit_cap)


def _pslq_core(values, digits, max_norm, iter_cap):
    """Classic relation-search iteration (Bailey-Ferguson scheme) on exact
    rationals converted to mpf at the working precision.

    Returns ``(coeffs | None, exclusion_bound, iterations, hit_cap)``.
    """
    n = len(values)
    with mp.workdps(digits + 15):
        x = [mp.mpf(v.numerator) / v.denominator for v in values]
        if any(xi == 0 for xi in x):
            raise IrratlabError("relation search requires nonzero entries")
        gamma = mp.sqrt(mp.mpf(4) / 3) + mp.mpf("1e-10")
        tol = mp.mpf(2) ** (-int(digits * 3.32193 * 0.70))

        # normalization and partial norms
        s = [mp.mpf(0)] * (n + 1)
        acc = mp.mpf(0)
        for k in range(n, 0, -1):
            acc += x[k - 1] ** 2
            s[k] = mp.sqrt(acc)
        t = 1 / s[1]
        y = [xi * t for xi in x]
        s = [sk * t for sk in s]

        # lower-triangular H (n x n-1)
        H = [[mp.mpf(0)] * (n - 1) for _ in range(n)]
        for j in range(1, n):
            H[j - 1][j - 1] = s[j + 1] / s[j]
        for i in range(1, n + 1):
            for j in range(1, i):
                H[i - 1][j - 1] = -y[i - 1] * y[j - 1] / (s[j] * s[j + 1])

        A = [[mp.mpf(1) if i == j else mp.mpf(0) for j in range(n)]
             for i in range(n)]
        B = [[mp.mpf(1) if i == j else mp.mpf(0) for j in range(n)]
             for i in range(n)]

        def reduce_row(i, upto):
            for j in range(min(i - 1, upto), 0, -1):
                if H[j - 1][j - 1] == 0:
                    continue
                q = mp.nint(H[i - 1][j - 1] / H[j - 1][j - 1])
                if q == 0:
                    continue
                y[j - 1] += q * y[i - 1]
                for k in range(1, j + 1):
                    H[i - 1][k - 1] -= q * H[j - 1][k - 1]
                for k in range(1, n + 1):
                    A[i - 1][k - 1] -= q * A[j - 1][k - 1]
                    B[k - 1][j - 1] += q * B[k - 1][i - 1]

        for i in range(2, n + 1):
            reduce_row(i, n - 1)

        best_bound = mp.mpf(0)
        powers = [gamma ** i for i in range(1, n)]

        for iteration in range(1, iter_cap + 1):
            # row with the gamma-weighted largest diagonal
            m = max(range(1, n), key=lambda i: powers[i - 1] * abs(H[i - 1][i - 1]))
            y[m - 1], y[m] = y[m], y[m - 1]
            H[m - 1], H[m] = H[m], H[m - 1]
            A[m - 1], A[m] = A[m], A[m - 1]
            for k in range(n):
                B[k][m - 1], B[k][m] = B[k][m], B[k][m - 1]

            if m <= n - 2:
                t0 = mp.sqrt(H[m - 1][m - 1] ** 2 + H[m - 1][m] ** 2)
                if t0 != 0:
                    t1, t2 = H[m - 1][m - 1] / t0, H[m - 1][m] / t0
                    for i in range(m, n + 1):
                        t3, t4 = H[i - 1][m - 1], H[i - 1][m]
                        H[i - 1][m - 1] = t1 * t3 + t2 * t4
                        H[i - 1][m] = -t2 * t3 + t1 * t4

            for i in range(m + 1, n + 1):
                reduce_row(i, min(i - 1, m + 1))

            diag = max(abs(H[j - 1][j - 1]) for j in range(1, n))
            if diag > 0:
                best_bound = max(best_bound, 1 / diag)
            if best_bound > max_norm:
                return None, float(best_bound), iteration, False

            j_min = min(range(1, n + 1), key=lambda j: abs(y[j - 1]))
            if abs(y[j_min - 1]) < tol:
                coeffs = [int(mp.nint(B[i][j_min - 1])) for i in range(n)]
                if any(coeffs):
                    return _normalize(coeffs), float(best_bound), iteration, False
        return None, float(best_bound), iter_cap, True


def _normalize(coeffs):
    g = 0
    for c in coeffs:
        g = math.gcd(g, abs(c))
    if g > 1:
        coeffs = [c // g for c in coeffs]
    for c in coeffs:
        if c != 0:
            if c < 0:
                coeffs = [-v for v in coeffs]
            break
    return coeffs


# ---------------------------------------------------------------------------
# Constant evaluation and the independence experiment
# ---------------------------------------------------------------------------

def _bits_for_digits(digits: int) -> int:
    return int(digits * 3.32193) + 8


def evaluate_constant(spec, prec_bits: int, table=None):
    """Evaluate a constant spec to a CertifiedReal with radius below
    ``2**-(prec_bits)`` (tail chosen accordingly).

    Specs: ``("one",)``, ``("e",)``, ``("s_lambda", lam)``,
    ``("prime_poly", coeffs)``.
    """
    target = Fraction(1, 1 << (prec_bits + 4))
    kind = spec[0]
    if kind == "one":
        return CertifiedReal.from_int(1, prec_bits + 8), "1", 0
    if kind == "e":
        ps = _grow_until(lambda n: series.euler_e_partial(n), target)
        label = "e"
    elif kind == "s_lambda":
        lam = Fraction(spec[1])
        ps = _grow_until(lambda n: series.s_lambda_partial(lam, n), target)
        label = f"S[{lam}]"
    elif kind == "prime_poly":
        coeffs = unipoly.normalize(spec[1])
        if table is None:
            raise ValueError("prime_poly constants need a prime table")
        ps = _grow_until(lambda n: series.prime_series_partial(coeffs, n, table),
                         target)
        label = f"Sum({unipoly.format_poly(coeffs)}(p_n)/n!)"
    else:
        raise ValueError(f"unknown constant spec {spec!r}")
    mid = CertifiedReal.from_fraction(ps.value, prec_bits + 8)
    extra = -((-ps.tail_bound.numerator << (prec_bits + 8))
              // ps.tail_bound.denominator)
    return (CertifiedReal(mid.mid, mid.rad + extra, prec_bits + 8),
            label, ps.n_terms)


def _grow_until(make_partial, target: Fraction):
    n = 8
    while True:
        ps = make_partial(n)
        if ps.tail_bound <= target:
            return ps
        n = max(n + 4, int(n * 1.5))
        if n > 100_000:
            raise IrratlabError("series truncation exploded; "
                                "precision target unreachable")


def independence_experiment(specs, digits: int, max_norm: int = 10 ** 4,
                            table=None, iter_cap: int = 20_000) -> dict:
    """Evaluate the given constants to ``digits`` decimal digits, run the
    relation search, and report the outcome with per-constant diagnostics."""
    prec_bits = _bits_for_digits(digits)
    entries, labels, meta = [], [], []
    for spec in specs:
        value, label, n_used = evaluate_constant(spec, prec_bits, table=table)
        entries.append(value)
        labels.append(label)
        meta.append({"label": label, "n_terms": n_used,
                     "radius": float(value.radius())})
    vector = RealVector(tuple(entries), tuple(labels))
    result = pslq(vector, max_norm=max_norm, iter_cap=iter_cap)
    report = {"constants": meta, "prec": digits, "max_norm": max_norm,
              "outcome": result.outcome}
    if result.outcome == "relation":
        report["coefficients"] = list(result.coefficients)
        report["residual"] = str(result.residual)
    else:
        report["bound"] = result.bound
        report["partial"] = result.partial
    return report
