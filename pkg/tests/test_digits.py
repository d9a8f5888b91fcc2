import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from irratlab.digits import (DigitStream, FSpec, build_stream,
                             base_is_proper_power, check_ratio_conclusion,
                             detect_period, digit_count, rational_digits,
                             reconstruct_rational)
from irratlab.errors import IrratlabError


def test_digit_count_examples():
    assert digit_count(999, 10) == 3
    assert digit_count(1000, 10) == 4
    assert digit_count(7, 2) == 3


def test_build_stream_examples():
    st1 = build_stream(FSpec.poly([0, 1]), 10, 11)
    assert st1.render()[:11] == "12345678910"
    st2 = build_stream(FSpec.repunit(10), 10, 6)
    assert st2.render()[:6] == "111111"
    st3 = build_stream(FSpec.power(2), 2, 9)
    assert st3.render()[:9] == "101001000"


def test_build_stream_nonpositive_error():
    with pytest.raises(IrratlabError):
        build_stream(FSpec.poly([-5, 1]), 10, 10)  # f(1) = -4


def test_block_starts_position_arithmetic():
    stream = build_stream(FSpec.poly([0, 1]), 10, 200)
    total = 1
    for idx, start in enumerate(stream.block_starts, start=1):
        assert start == total
        total += digit_count(stream.f(idx), 10)


def test_leading_zero_free_blocks():
    stream = build_stream(FSpec.poly([9, 7]), 10, 100)
    for idx, start in enumerate(stream.block_starts, start=1):
        assert stream.digit(start) != 0


def test_fspec_parse():
    assert FSpec.parse("repunit", 10)(3) == 111
    assert FSpec.parse("2^n", 2)(5) == 32
    assert FSpec.parse("n", 10)(7) == 7
    assert FSpec.parse("n^2+1", 10)(3) == 10
    assert FSpec.parse("table:4,5,6", 10)(2) == 5
    fib = FSpec.parse("linrec:1,1;1,1", 10)
    assert [fib(n) for n in range(1, 8)] == [1, 1, 2, 3, 5, 8, 13]


def test_detect_period_repunit():
    stream = build_stream(FSpec.repunit(10), 10, 300)
    report = detect_period(stream, 10, 10)
    assert (report.found, report.preperiod, report.period) == (True, 0, 1)
    assert report.reconstructed == F(1, 9)


def test_detect_period_constant_sevens():
    report = detect_period([7] * 200, 5, 5, base=10)
    assert (report.preperiod, report.period) == (0, 1)
    assert report.reconstructed == F(7, 9)


def test_detect_period_champernowne_negative():
    stream = build_stream(FSpec.poly([0, 1]), 10, 10_000)
    report = detect_period(stream, 50, 50)
    assert not report.found
    assert report.verified_digits >= 10_000


def test_detect_period_insufficient_digits():
    with pytest.raises(IrratlabError, match="need at least"):
        detect_period([1, 2, 3], 5, 5, base=10)


def test_detect_period_preperiod():
    digits = rational_digits(F(1, 6), 10, 200)  # 0.1666...
    report = detect_period(digits, 5, 5, base=10)
    assert (report.preperiod, report.period) == (1, 1)
    assert report.reconstructed == F(1, 6)


def test_reconstruction_soundness():
    with pytest.raises(ValueError):
        rational_digits(F(22, 7), 10, 5)  # not in [0, 1)
    value = reconstruct_rational([1, 2, 3, 4], 2, 2, 10)
    assert value == F(12, 100) + F(34, 100 * 99)


@given(q=st.integers(2, 50), a=st.integers(1, 49))
@settings(deadline=None, max_examples=120)
def test_round_trip_sampled(q, a):
    if a >= q or math.gcd(a, q) != 1 or math.gcd(q, 10) != 1:
        return
    order = 1
    power = 10 % q
    while power != 1:
        power = power * 10 % q
        order += 1
    digits = rational_digits(F(a, q), 10, max(4 * order, 200))
    report = detect_period(digits, 10, 50, base=10)
    assert report.found and report.reconstructed == F(a, q)


def test_check_ratio_repunit():
    rep = check_ratio_conclusion(FSpec.repunit(10), 10, 1, 30)
    assert rep["nearest_power_of_base"] == 10
    assert rep["relative_gap"] < 1e-9
    assert rep["max_abs_residual"] == "1"
    assert rep["residual_bounded_by_base"]


def test_check_ratio_power_of_two():
    rep = check_ratio_conclusion(FSpec.power(2), 2, 1, 40)
    assert rep["nearest_power_of_base"] == 2
    assert rep["max_abs_residual"] == "0"


def test_check_ratio_non_power():
    rep = check_ratio_conclusion(FSpec.power(3), 10, 1, 30, c_candidate=3)
    assert rep["ratio_limit_estimate"] == pytest.approx(3.0)
    assert rep["nearest_power_of_base"] == 1
    assert rep["relative_gap"] > 1.0
    assert rep["max_abs_residual"] == "0"  # candidate c = 3 matches exactly


def test_proper_power_flagging():
    assert base_is_proper_power(4)
    assert base_is_proper_power(27)
    assert not base_is_proper_power(10)
    stream = DigitStream(FSpec.power(2), 4)
    assert stream.base_flagged_proper_power


def test_detect_minimality():
    # 0.101010... has (s=0, p=2); no (s<=S, p=1) fits
    digits = [1, 0] * 100
    report = detect_period(digits, 5, 5, base=10)
    assert (report.preperiod, report.period) == (0, 2)
    assert report.reconstructed == F(10, 99)
