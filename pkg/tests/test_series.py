import math
import random
from fractions import Fraction as F

import mpmath as mp
import pytest

from irratlab.errors import CapacityError, DominationError
from irratlab.exactnum import factorial
from irratlab.series import (cover_count, euler_e_partial, exceeds_by_one,
                             injectivity_witness, min_admissible_n,
                             prime_series_partial, residual_norm,
                             s_lambda_partial, tail_bound, tail_bound_total,
                             truncated_phase)


def test_partial_sum_examples():
    assert s_lambda_partial(F(1, 2), 4).value == F(7, 4)
    assert s_lambda_partial(F(3, 2), 1).value == 1
    assert s_lambda_partial(F(1, 2), 2).value == F(3, 2)


def test_lambda_zero_rejected():
    with pytest.raises(ValueError):
        s_lambda_partial(F(0), 5)


def test_tail_bound_examples():
    b = tail_bound(F(1, 2), 20)
    assert b == F(2 * 97, factorial(21))
    assert abs(float(b) - 3.797e-18) < 1e-20
    assert tail_bound(F(0), 10) == F(2 * 11, factorial(11))
    with pytest.raises(DominationError) as exc:
        tail_bound(F(3, 2), 3)
    assert exc.value.min_n == 4
    # brute-force validation far past the truncation point: sum of the
    # majorant terms n**(lam+1)/n! computed with exact power ceilings
    brute = sum(F(math.isqrt(n ** 3) + 1, factorial(n)) for n in range(21, 200))
    assert brute <= tail_bound(F(1, 2), 20)


def test_tail_bound_total_small_n():
    # below the admissible index the bound must still be valid
    b = tail_bound_total(F(3, 2), 1)
    longer = s_lambda_partial(F(3, 2), 60).value - s_lambda_partial(F(3, 2), 1).value
    assert longer <= b


@pytest.mark.parametrize("lam", [F(1, 2), F(3, 2), F(5, 2)])
@pytest.mark.parametrize("n", [20, 30, 40])
def test_tail_soundness(lam, n):
    wide = s_lambda_partial(lam, 4 * n).value
    base = s_lambda_partial(lam, n)
    assert abs(wide - base.value) <= base.tail_bound


def test_bracket_property():
    ps = s_lambda_partial(F(1, 2), 40)
    lo, hi = ps.bracket()
    for n2 in (60, 80, 120):
        v = s_lambda_partial(F(1, 2), n2).value
        assert lo <= v <= hi


def test_monotonicity_in_lambda():
    rng = random.Random(3)
    for _ in range(20):
        l1 = F(rng.randint(1, 40), 16)
        l2 = l1 + F(rng.randint(1, 16), 16)
        n = rng.randint(5, 40)
        assert s_lambda_partial(l1, n).value <= s_lambda_partial(l2, n).value


def test_prime_series_examples(small_table):
    assert prime_series_partial([0, 1], 4, small_table).value == F(37, 8)
    assert prime_series_partial([1], 3, small_table).value == F(5, 3)
    assert prime_series_partial([0, 0, 1], 2, small_table).value == F(17, 2)


def test_prime_series_capacity(small_table):
    with pytest.raises(CapacityError) as exc:
        prime_series_partial([0, 1], small_table.count + 5, small_table)
    assert exc.value.required == small_table.count + 5


def test_prime_series_tail_sound(small_table):
    base = prime_series_partial([0, 1], 10, small_table)
    wide = prime_series_partial([0, 1], 80, small_table)
    assert abs(wide.value - base.value) <= base.tail_bound


def test_euler_partial():
    ps = euler_e_partial(30)
    with mp.workdps(40):
        assert abs(float(ps.value) - float(mp.e)) < float(ps.tail_bound) + 1e-30


def test_injectivity_witness_examples():
    assert injectivity_witness(F(1, 2), F(3, 2)) == 2
    assert injectivity_witness(F(0), F(2)) == 2
    n0 = injectivity_witness(F(1, 2), F(1, 2) + F(1, 1000))
    assert exceeds_by_one(n0, F(1, 2), F(501, 1000))
    assert not exceeds_by_one(n0 - 1, F(1, 2), F(501, 1000))


def test_injectivity_gap_partial_sums():
    for l1, l2 in [(F(1, 2), F(3, 2)), (F(2, 3), F(7, 4))]:
        n0 = injectivity_witness(l1, l2)
        for n in (n0, n0 + 10, n0 + 25):
            s1 = s_lambda_partial(l1, n)
            s2 = s_lambda_partial(l2, n)
            slack = 2 * max(s1.tail_bound, s2.tail_bound)
            assert s2.value - s1.value >= F(1, factorial(n0)) - slack


def test_cover_count_examples():
    assert cover_count(F(0), 2) == 2
    assert cover_count(F(0), 3) == 5
    assert cover_count(F(1), 2) == 3


def test_cover_count_bound():
    for t in (F(0), F(1, 2), F(1), F(3, 2)):
        for n in (2, 5, 10, 25):
            c = cover_count(t, n)
            e = t + 2
            assert c ** e.denominator <= n ** e.numerator


def test_residual_norm_single_term():
    v = residual_norm([1], [F(1, 2)], 100)
    with mp.workdps(60):
        oracle = float(mp.sqrt(101) / 101)
    assert abs(float(v) - oracle) <= float(v.radius()) + 1e-12
    assert float(v.radius()) < 0.01


def test_residual_norm_zero_coeffs():
    v = residual_norm([0], [F(1, 2)], 50)
    assert v.is_exact and v.midpoint() == 0


def test_residual_norm_highprec_oracle():
    # cross-check the truncated part against a 200-digit evaluation
    v = residual_norm([1], [F(3, 2)], 10, include_tail=False, prec=128)
    with mp.workdps(200):
        m = 2  # truncation depth for lam = 3/2
        exact = sum((mp.mpf(10 + k) ** mp.mpf(1.5))
                    / mp.fprod(mp.mpf(10 + j) for j in range(1, k + 1))
                    for k in range(1, m + 1))
        dist = abs(exact - mp.nint(exact))
        assert abs(float(v) - float(dist)) <= float(v.radius()) + 1e-25


def test_residual_norm_tail_inclusion():
    # with the tail majorant the interval also covers the full remainder
    narrow = residual_norm([1], [F(1, 2)], 100, include_tail=False)
    wide = residual_norm([1], [F(1, 2)], 100, include_tail=True)
    assert wide.radius() > narrow.radius()


def test_truncated_phase_example():
    v = truncated_phase([1], [F(1, 2)], 1, 3)
    assert v.is_exact and v.midpoint() == F(1, 2)


def test_min_admissible():
    assert min_admissible_n(F(3, 2)) == 4
    for lam in (F(1, 2), F(5, 2), F(7, 3)):
        m = min_admissible_n(lam)
        with pytest.raises(DominationError):
            tail_bound(lam, m - 1)
        tail_bound(lam, m)
