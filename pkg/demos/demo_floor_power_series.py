"""
Certified evaluation of floor-power series
==========================================

The series ``sum [n**lam]/n!`` converges factorially fast, so short exact
partial sums plus a rigorous rational tail bound pin its value down to any
precision.  This script evaluates a few exponents, shows the tail bounds at
work, and exhibits the witness index that separates two exponents by a whole
``1/n0!``.
"""

from fractions import Fraction as F

from irratlab import (injectivity_witness, s_lambda_partial, tail_bound,
                      cover_count)
from irratlab.exactnum import factorial

print("partial sums with certified tails")
for lam in (F(1, 2), F(3, 2), F(5, 2)):
    ps = s_lambda_partial(lam, 25)
    print(f"  lam={lam}:  value = {float(ps.value):.15f}  "
          f"tail <= {float(ps.tail_bound):.3e}")

print("\nthe tail bound is already tiny at N=20:")
print("  ", tail_bound(F(1, 2), 20), "~", float(tail_bound(F(1, 2), 20)))

print("\nseparating two exponents: the witness index n0 satisfies")
print("n**lam2 > n**lam1 + 1 for all n >= n0, giving a gap >= 1/n0!:")
for l1, l2 in [(F(1, 2), F(3, 2)), (F(1, 2), F(51, 100))]:
    n0 = injectivity_witness(l1, l2)
    s1 = s_lambda_partial(l1, n0 + 30).value
    s2 = s_lambda_partial(l2, n0 + 30).value
    print(f"  {l1} vs {l2}: n0 = {n0}; observed gap {float(s2 - s1):.3e} "
          f">= 1/{n0}! = {float(F(1, factorial(n0))):.3e}")

print("\nhow many exponents in [t, t+1] make some n**lam integral (n <= N)?")
for t, n in [(F(0), 6), (F(1), 6), (F(3, 2), 8)]:
    print(f"  t={t}, N={n}: {cover_count(t, n)} (bound N**(t+2) = "
          f"{float(n ** (float(t) + 2)):.0f})")
