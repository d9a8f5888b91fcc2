"""Sparse multivariate polynomial algebra over exact rationals, and the
pair-elimination engine that reduces a prime-polynomial remainder
``sum P_{vm}(gaps) * p_n**v / n**m`` to a relation with ``v = m`` everywhere.

Variables ``X_1..X_w`` stand for the window of consecutive prime gaps
``delta_n, ..., delta_{n+w-1}``.  A :class:`PairTable` maps index pairs
``(v, m)`` (power of ``p_n`` over power of ``n``) to gap polynomials; terms
whose growth index ``v - m`` falls below the table's threshold are treated
as negligible and dropped.

One elimination step forms
``shift(E) * F(n) - E * F(n+1)`` for the growth-maximal entry ``E``,
rewriting ``F(n+1)`` through ``p_{n+1} = p_n + delta_n``, variable shifting,
and truncated re-expansion of ``1/(n+1)**m`` in powers of ``1/n``.  The
maximal pair cancels exactly and every newly created pair has strictly
smaller growth index, which makes termination a finite total-order descent.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import unipoly
from .errors import EliminationError

#: Prime modulus for randomized identity testing (62 bits).
EVAL_PRIME = (1 << 62) - 57


def _trim(key: tuple) -> tuple:
    i = len(key)
    while i > 0 and key[i - 1] == 0:
        i -= 1
    return key[:i]


class MultiPoly:
    """Sparse polynomial in ``X_1..X_nvars`` with Fraction coefficients.

    Exponent keys are stored trailing-zero-trimmed so equality is window
    independent; ``nvars`` records the declared variable window.
    """

    __slots__ = ("terms", "nvars")

    def __init__(self, terms=None, nvars: int = 0):
        clean = {}
        width = nvars
        if terms:
            for key, coeff in terms.items():
                c = Fraction(coeff)
                if c == 0:
                    continue
                k = _trim(tuple(key))
                clean[k] = clean.get(k, Fraction(0)) + c
                if clean[k] == 0:
                    del clean[k]
                width = max(width, len(k))
        self.terms = clean
        self.nvars = width

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, value) -> "MultiPoly":
        return cls({(): Fraction(value)})

    @classmethod
    def var(cls, i: int) -> "MultiPoly":
        if i < 1:
            raise ValueError("variables are numbered from 1")
        key = tuple([0] * (i - 1) + [1])
        return cls({key: Fraction(1)}, nvars=i)

    @classmethod
    def random(cls, rng: random.Random, nvars: int, max_degree: int,
               coeff_bound: int = 9, n_terms: int = 4,
               nonzero: bool = False) -> "MultiPoly":
        while True:
            terms = {}
            for _ in range(n_terms):
                key = tuple(rng.randint(0, max_degree) for _ in range(nvars))
                c = rng.randint(-coeff_bound, coeff_bound)
                if c:
                    terms[key] = terms.get(key, 0) + c
            p = cls(terms, nvars=nvars)
            if not (nonzero and p.is_zero()):
                return p

    # -- structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(k) for k in self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def digest(self) -> str:
        items = sorted(self.terms.items())
        blob = repr(items).encode()
        return hashlib.blake2b(blob, digest_size=4).hexdigest()

    # -- ring operations -------------------------------------------------------

    def _as_poly(self, other):
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(other)
        return None

    def __add__(self, other):
        o = self._as_poly(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, c in o.terms.items():
            s = out.get(k, Fraction(0)) + c
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return MultiPoly(out, nvars=max(self.nvars, o.nvars))

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({k: -c for k, c in self.terms.items()}, nvars=self.nvars)

    def __sub__(self, other):
        o = self._as_poly(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._as_poly(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._as_poly(other)
        if o is None:
            return NotImplemented
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in o.terms.items():
                n = max(len(k1), len(k2))
                k = tuple((k1[i] if i < len(k1) else 0)
                          + (k2[i] if i < len(k2) else 0) for i in range(n))
                s = out.get(k, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(k, None)
                else:
                    out[k] = s
        return MultiPoly(out, nvars=max(self.nvars, o.nvars))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = MultiPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift_vars(self) -> "MultiPoly":
        """Substitute ``X_i -> X_{i+1}``; the window widens by one."""
        return MultiPoly({(0,) + k: c for k, c in self.terms.items()},
                         nvars=self.nvars + 1)

    def scale_denominators_cleared(self) -> "MultiPoly":
        lcm = 1
        for c in self.terms.values():
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        return self * lcm

    # -- evaluation --------------------------------------------------------------

    def eval(self, values):
        """Exact evaluation; ``values`` must cover the declared window."""
        vals = list(values)
        if len(vals) < self.nvars:
            raise ValueError(f"need {self.nvars} values, got {len(vals)}")
        acc = Fraction(0)
        for k, c in self.terms.items():
            t = c
            for i, e in enumerate(k):
                if e:
                    t *= Fraction(vals[i]) ** e
            acc += t
        return acc

    def eval_mod(self, values, p: int = EVAL_PRIME) -> int:
        """Evaluation over the prime field F_p (coefficients must clear to
        integers mod p)."""
        vals = [v % p for v in values]
        if len(vals) < self.nvars:
            raise ValueError(f"need {self.nvars} values, got {len(vals)}")
        acc = 0
        for k, c in self.terms.items():
            t = (c.numerator % p) * pow(c.denominator, -1, p) % p
            for i, e in enumerate(k):
                if e:
                    t = t * pow(vals[i], e, p) % p
            acc = (acc + t) % p
        return acc

    # -- rendering ------------------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in sorted(self.terms.items()):
            mono = "*".join(f"X{i+1}" + (f"^{e}" if e > 1 else "")
                            for i, e in enumerate(k) if e)
            if mono:
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{c}*{mono}")
            else:
                parts.append(str(c))
        return " + ".join(parts).replace("+ -", "- ")


def poly_ops(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    """Dispatch ``+ - *`` on two polynomials (windows widen as needed)."""
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def parse_multipoly(text: str) -> MultiPoly:
    """Parse expressions like ``X1^2*X2 - 2*X1 + 3`` (integer coefficients)."""
    import re
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise ValueError("empty polynomial")
    terms = {}
    for term in re.findall(r"[+-]?[^+-]+", s):
        sign = -1 if term.startswith("-") else 1
        body = term.lstrip("+-")
        coeff = sign
        expo = {}
        for factor in body.split("*"):
            if not factor:
                raise ValueError(f"bad term {term!r}")
            m = re.fullmatch(r"[Xx](\d+)(?:\^(\d+))?", factor)
            if m:
                i = int(m.group(1))
                expo[i] = expo.get(i, 0) + (int(m.group(2)) if m.group(2) else 1)
            elif factor.isdigit():
                coeff *= int(factor)
            else:
                raise ValueError(f"bad factor {factor!r} in {text!r}")
        width = max(expo) if expo else 0
        key = tuple(expo.get(i + 1, 0) for i in range(width))
        terms[key] = terms.get(key, 0) + coeff
    return MultiPoly(terms)


# ---------------------------------------------------------------------------
# Pair tables and the elimination recursion
# ---------------------------------------------------------------------------

def growth_key(pair: tuple) -> tuple:
    """Sort key for the growth order: larger ``v - m`` first, ties by ``v``."""
    v, m = pair
    return (v - m, v)


@dataclass
class PairTable:
    """Map ``(v, m) -> MultiPoly`` representing
    ``sum entries[(v, m)](gaps) * p_n**v / n**m`` up to negligible terms.

    ``min_growth`` is the retention threshold: pairs with
    ``v - m < min_growth`` are folded into the negligible remainder.
    """

    entries: dict
    window: int
    min_growth: int = 0

    def __post_init__(self):
        clean = {}
        for pair, poly in self.entries.items():
            v, m = pair
            if m < 1:
                raise ValueError("pair tables require m >= 1")
            if poly.is_zero():
                continue
            if v - m < self.min_growth:
                continue
            clean[pair] = poly
        self.entries = clean

    def is_empty(self) -> bool:
        return not self.entries

    def pairs(self):
        return sorted(self.entries, key=growth_key, reverse=True)

    def max_pair(self) -> tuple:
        if not self.entries:
            raise EliminationError("pair table is empty")
        return max(self.entries, key=growth_key)

    def is_reduced(self) -> bool:
        """True when every retained pair already has ``v == m`` (or, for a
        lowered threshold, no pair sits above it)."""
        if not self.entries:
            return True
        v, m = self.max_pair()
        return v - m <= max(self.min_growth, 0)

    def copy(self) -> "PairTable":
        return PairTable(dict(self.entries), self.window, self.min_growth)

    def sizes(self) -> dict:
        return {"pairs": len(self.entries),
                "terms": sum(len(p.terms) for p in self.entries.values())}


def pair_order_max(table: PairTable) -> tuple:
    return table.max_pair()


def _falling_denominator_series(v: int, max_u: int) -> list:
    """Coefficients ``h_u`` of ``1/((n+1)...(n+v)) = sum_u h_u / n**(v+u)``
    with alternating complete homogeneous sums of {1..v}, up to ``max_u``."""
    coeffs = [Fraction(1)] + [Fraction(0)] * max_u
    for t in range(1, v + 1):
        # multiply by 1/(1 + t/n) = sum_j (-t)**j n**-j, truncated
        out = [Fraction(0)] * (max_u + 1)
        for u in range(max_u + 1):
            if coeffs[u] == 0:
                continue
            power = Fraction(1)
            for j in range(0, max_u + 1 - u):
                out[u + j] += coeffs[u] * power
                power *= -t
        coeffs = out
    return coeffs


def initial_table(coeffs, depth: int | None = None,
                  min_growth: int = 0) -> PairTable:
    """Pair table of the truncated remainder
    ``sum_{v=1}^{depth} P(p_{n+v}) / ((n+1)...(n+v))``
    after substituting ``p_{n+v} = p_n + X_1 + ... + X_v`` and expanding each
    falling denominator in powers of ``1/n``.

    ``depth`` defaults to ``deg P``; a constant ``P`` yields an empty
    (degenerate) table since every term is negligible.
    """
    coeffs = unipoly.normalize(coeffs)
    if unipoly.is_zero(coeffs):
        raise ValueError("P must not vanish identically")
    k = unipoly.degree(coeffs)
    if depth is None:
        depth = max(k, 1)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    entries: dict = {}
    for v in range(1, depth + 1):
        s = MultiPoly({tuple([0] * (i - 1) + [1]): Fraction(1)
                       for i in range(1, v + 1)}, nvars=v)
        # gap-polynomial coefficient of p_n**i in P(p_n + s)
        a = {}
        for j, cj in enumerate(coeffs):
            if cj == 0:
                continue
            for i in range(j + 1):
                a[i] = a.get(i, MultiPoly.const(0)) + cj * math.comb(j, i) * s ** (j - i)
        max_i = max((i for i, p in a.items() if not p.is_zero()), default=-1)
        if max_i < 0:
            continue
        h = _falling_denominator_series(v, max(0, max_i - v - min_growth))
        for i, poly in a.items():
            if poly.is_zero():
                continue
            for u in range(0, i - v - min_growth + 1):
                pair = (i, v + u)
                entries[pair] = entries.get(pair, MultiPoly.const(0)) + poly * h[u]
    return PairTable(entries, window=depth, min_growth=min_growth)


def _table_at_next_index(table: PairTable) -> dict:
    """Rewrite ``F(n+1)`` on the basis ``p_n**v / n**m``: shift the gap
    variables, expand ``p_{n+1}**v = (p_n + X_1)**v`` and
    ``(n+1)**-m = sum_i (-1)**i C(m-1+i, i) n**-(m+i)`` (truncated at the
    retention threshold)."""
    theta = table.min_growth
    out: dict = {}
    for (v, m), poly in table.entries.items():
        shifted = poly.shift_vars()
        for j in range(v + 1):
            coeff_vj = shifted * math.comb(v, j)
            if j:
                coeff_vj = coeff_vj * MultiPoly.var(1) ** j
            vv = v - j
            for i in range(0, vv - m - theta + 1):
                pair = (vv, m + i)
                c = Fraction((-1) ** i * math.comb(m - 1 + i, i))
                out[pair] = out.get(pair, MultiPoly.const(0)) + coeff_vj * c
    return out


@dataclass
class StepRecord:
    index: int
    eliminated: tuple
    pivot: MultiPoly
    size_before: dict
    size_after: dict

    def to_json(self) -> dict:
        return {"step": self.index,
                "eliminated": list(self.eliminated),
                "pivot_digest": self.pivot.digest(),
                "before": self.size_before,
                "after": self.size_after}


def eliminate_step(table: PairTable, _index: int = 0) -> tuple:
    """One elimination step; returns ``(new_table, record)``.

    Raises :class:`EliminationError` when the table is already reduced.
    The growth-maximal pair is checked to cancel exactly, every new pair is
    checked to have strictly smaller growth, and the coefficient landing one
    ``p_n`` power below the pivot is verified term by term against its
    directly assembled three-term form (plus the single re-expansion
    correction that belongs to it).
    """
    if table.is_empty():
        raise EliminationError("pair table is empty")
    v0, m0 = table.max_pair()
    if v0 - m0 <= table.min_growth:
        raise EliminationError("table already reduced")
    pivot = table.entries[(v0, m0)]
    shifted_pivot = pivot.shift_vars()

    part_n = {pair: shifted_pivot * poly for pair, poly in table.entries.items()}
    part_n1 = {pair: pivot * poly
               for pair, poly in _table_at_next_index(table).items()}

    merged: dict = {}
    for src in (part_n, part_n1):
        sign = 1 if src is part_n else -1
        for pair, poly in src.items():
            merged[pair] = merged.get(pair, MultiPoly.const(0)) + sign * poly

    new_table = PairTable(merged, window=table.window + 1,
                          min_growth=table.min_growth)

    # structural postconditions
    assert (v0, m0) not in new_table.entries, "pivot pair failed to cancel"
    for (v, m) in new_table.entries:
        if (v, m) not in table.entries:
            assert v - m < v0 - m0, "new pair at non-decreasing growth"

    # three-term verification at (v0 - 1, m0): the directly assembled
    # combination plus the one denominator-expansion correction
    got = merged.get((v0 - 1, m0), MultiPoly.const(0))
    q_prev = table.entries.get((v0 - 1, m0), MultiPoly.const(0))
    expected = (-v0 * MultiPoly.var(1) * pivot * shifted_pivot
                + shifted_pivot * q_prev - pivot * q_prev.shift_vars())
    r_prev = table.entries.get((v0 - 1, m0 - 1), MultiPoly.const(0))
    if m0 >= 2 and not r_prev.is_zero():
        expected = expected + (m0 - 1) * pivot * r_prev.shift_vars()
    assert got == expected, "recursion coefficient mismatch at pivot-1"

    record = StepRecord(_index, (v0, m0), pivot,
                        table.sizes(), new_table.sizes())
    return new_table, record


@dataclass
class EliminationResult:
    """Final reduced relation: integer-coefficient gap polynomials ``qs[i]``
    multiplying ``p_n**i / n**i``, plus the full step trace."""

    qs: dict
    window: int
    steps: list = field(default_factory=list)
    tables: list = field(default_factory=list)
    depth: int = 0

    @property
    def step_count(self) -> int:
        return len(self.steps)

    def nonzero_indices(self):
        return sorted(i for i, q in self.qs.items() if not q.is_zero())

    def trace_json(self) -> list:
        return [s.to_json() for s in self.steps]

    def to_json(self) -> dict:
        return {"steps": self.trace_json(),
                "window": self.window,
                "relation": {str(i): repr(q) for i, q in sorted(self.qs.items())}}


def run_elimination(coeffs, depth: int | None = None,
                    keep_tables: bool = False) -> EliminationResult:
    """Iterate :func:`eliminate_step` until every retained pair has
    ``v == m``, then clear denominators to a primitive integer relation.

    Termination is guaranteed: the growth-maximal pair strictly decreases in
    the finite order on ``{(v, m): 1 <= m <= v <= deg P}``.
    """
    coeffs = unipoly.normalize(coeffs)
    if unipoly.degree(coeffs) < 1:
        raise ValueError("P must be nonconstant")
    table = initial_table(coeffs, depth)
    tables = [table.copy()] if keep_tables else []
    steps = []
    guard = 0
    last_key = None
    while not table.is_reduced():
        key = growth_key(table.max_pair())
        if last_key is not None:
            assert key < last_key, "growth order failed to decrease"
        last_key = key
        table, record = eliminate_step(table, _index=len(steps))
        steps.append(record)
        if keep_tables:
            tables.append(table.copy())
        guard += 1
        if guard > 10_000:
            raise EliminationError("elimination did not terminate",
                                   trace=[s.to_json() for s in steps])
    if table.is_empty():
        raise EliminationError(
            "all pairs vanished before reduction",
            trace=[s.to_json() for s in steps])

    # clear denominators, then divide by the integer content
    lcm = 1
    for poly in table.entries.values():
        for c in poly.terms.values():
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    qs = {}
    content = 0
    for (v, m), poly in table.entries.items():
        scaled = poly * lcm
        for c in scaled.terms.values():
            content = math.gcd(content, c.numerator)
        qs[v] = scaled
    if content > 1:
        qs = {i: p * Fraction(1, content) for i, p in qs.items()}
    result = EliminationResult(qs, table.window, steps, tables,
                               depth=depth or unipoly.degree(coeffs))
    return result


# ---------------------------------------------------------------------------
# Identity-vanishing test for the elimination's key combination
# ---------------------------------------------------------------------------

def cross_shift_combination(p: MultiPoly, q: MultiPoly, nu: int) -> MultiPoly:
    """``nu*X_1*P + P*shift(Q) - shift(P)*Q`` (the combination whose
    identical vanishing would force ``P = 0`` for ``nu != 0``)."""
    if nu == 0:
        raise ValueError("nu must be nonzero")
    return nu * MultiPoly.var(1) * p + p * q.shift_vars() - p.shift_vars() * q


def cross_shift_identity_test(p: MultiPoly, q: MultiPoly, nu: int,
                              rng: random.Random | None = None,
                              trials: int = 8) -> dict:
    """Test whether the cross-shift combination vanishes identically.

    Returns a dict with the canonical-form verdict, the randomized
    field-evaluation verdict (Schwartz-Zippel style over F_p), and a witness
    point when nonvanishing.
    """
    comb = cross_shift_combination(p, q, nu)
    symbolic_zero = comb.is_zero()
    rng = rng or random.Random(0)
    width = comb.nvars
    witness = None
    random_zero = True
    for _ in range(trials):
        point = [rng.randrange(EVAL_PRIME) for _ in range(width)]
        if comb.eval_mod(point) != 0:
            random_zero = False
            witness = tuple(point)
            break
    return {"vanishes": symbolic_zero,
            "random_vanishes": random_zero,
            "witness": witness,
            "combination_digest": comb.digest()}


# ---------------------------------------------------------------------------
# Semantic consistency of the elimination bookkeeping
# ---------------------------------------------------------------------------

def eval_pair_table(table: PairTable, n: int, prime_table) -> Fraction:
    """Exact value of the table's main part at ``n`` using true primes."""
    if table.is_empty():
        return Fraction(0)
    gaps = list(prime_table.gaps(n, table.window).gaps)
    pn = prime_table.nth_prime(n)
    acc = Fraction(0)
    for (v, m), poly in table.entries.items():
        acc += poly.eval(gaps) * Fraction(pn ** v, n ** m)
    return acc


def eval_remainder_exact(coeffs, depth: int, n: int, prime_table) -> Fraction:
    """Exact ``sum_{v=1}^{depth} P(p_{n+v}) / ((n+1)...(n+v))``."""
    acc = Fraction(0)
    denom = 1
    for v in range(1, depth + 1):
        denom *= n + v
        acc += Fraction(unipoly.evaluate(coeffs, prime_table.nth_prime(n + v)), denom)
    return acc


def eval_recursion_exact(coeffs, result: EliminationResult, level: int,
                         n: int, prime_table) -> Fraction:
    """Exact value of the level-th function of the recursion at ``n``
    (level 0 is the initial remainder)."""
    if level == 0:
        return eval_remainder_exact(coeffs, result.depth, n, prime_table)
    record = result.steps[level - 1]
    pivot = record.pivot
    w = pivot.nvars
    gaps_n = list(prime_table.gaps(n, max(w, 1)).gaps)
    gaps_n1 = list(prime_table.gaps(n + 1, max(w, 1)).gaps)
    f_n = eval_recursion_exact(coeffs, result, level - 1, n, prime_table)
    f_n1 = eval_recursion_exact(coeffs, result, level - 1, n + 1, prime_table)
    return pivot.eval(gaps_n1) * f_n - pivot.eval(gaps_n) * f_n1


def semantic_consistency(coeffs, n_values, prime_table,
                         depth: int | None = None,
                         budget_constant: float = 10.0) -> dict:
    """Compare, at each level of a full elimination run, the exact recursion
    value against the pair-table evaluation.

    Residuals come from the dropped negligible monomials, so they must stay
    within the declared remainder budget ``C * log(n)**c / n`` with
    ``c = deg P + 1`` and ``C = budget_constant``; the report records the
    smallest constant that would have sufficed.
    """
    result = run_elimination(coeffs, depth, keep_tables=True)
    c_exp = unipoly.degree(coeffs) + 1
    rows = []
    for level, table in enumerate(result.tables):
        for n in n_values:
            exact = eval_recursion_exact(coeffs, result, level, n, prime_table)
            approx = eval_pair_table(table, n, prime_table)
            resid = abs(float(exact - approx))
            rows.append({"level": level, "n": n, "residual": resid,
                         "scaled": resid * n / math.log(n) ** c_exp})
    fitted = max((r["scaled"] for r in rows), default=0.0)
    return {"rows": rows, "log_power": c_exp, "fitted_constant": fitted,
            "budget_constant": budget_constant,
            "within_budget": fitted <= budget_constant,
            "steps": result.step_count}
