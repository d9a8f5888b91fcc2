"""
Digit-concatenation reals and periodicity detection
===================================================

Writing block values f(1), f(2), ... one after another in base b defines a
real number 0.f(1)f(2)f(3)...  A bounded-window detector finds eventual
periodicity and reconstructs the exact rational; block-ratio diagnostics
show when the growth constant is a power of the base.
"""

from fractions import Fraction as F

from irratlab import build_stream, check_ratio_conclusion, detect_period
from irratlab.digits import FSpec, rational_digits

print("repunit blocks 1, 11, 111, ... in base 10 give the rational 1/9:")
stream = build_stream(FSpec.repunit(10), 10, 300)
print("  digits:", stream.render()[:24], "...")
report = detect_period(stream, 10, 10)
print(f"  detected (s={report.preperiod}, p={report.period}) -> "
      f"{report.reconstructed} over {report.verified_digits} digits")

print("\nblocks 1, 2, 3, ... (no period within the window):")
stream = build_stream(FSpec.poly([0, 1]), 10, 5000)
report = detect_period(stream, 50, 50)
print(f"  found = {report.found} after checking {report.verified_digits} digits")

print("\nround trip through plain rational expansions:")
for a, q in [(1, 7), (3, 13), (22, 49)]:
    digits = rational_digits(F(a, q), 10, 250)
    rep = detect_period(digits, 10, 50, base=10)
    print(f"  {a}/{q}: digits {''.join(map(str, digits[:14]))}... -> "
          f"{rep.reconstructed}")

print("\nblock-ratio diagnostics:")
for f, base, label in [(FSpec.repunit(10), 10, "repunit base 10"),
                       (FSpec.power(2), 2, "2^n base 2"),
                       (FSpec.power(3), 10, "3^n base 10")]:
    rep = check_ratio_conclusion(f, base, 1, 30)
    print(f"  {label}: ratio -> {rep['ratio_limit_estimate']:.4f}, "
          f"nearest power of base = {rep['nearest_power_of_base']}, "
          f"max |f(n+1) - c f(n)| = {rep['max_abs_residual']}")
