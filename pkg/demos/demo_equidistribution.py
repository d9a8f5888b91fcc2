"""
Exact discrepancy and exponential-sum bounds
============================================

Star discrepancy measures how far a finite sequence in [0,1) deviates from
uniform.  Here we compute it exactly (rational arithmetic) for a few
sequences, check the explicit exponential-sum bound that dominates it, and
watch a certified power-phase sequence equidistribute.
"""

import math
from fractions import Fraction as F

from irratlab import (Mod1Sequence, PhaseSpec, erdos_turan_bound, exp_sum,
                      frac_parts, power_phase_experiment, star_discrepancy,
                      weyl_vdc_bound)

print("exact star discrepancy of small sequences")
for entries in ([F(1, 2)], [0, F(1, 3), F(2, 3)], [0, 0, 0]):
    seq = Mod1Sequence.from_values(entries)
    print(f"  {[str(e) for e in seq.entries]} -> D* = {star_discrepancy(seq)}")

print("\ngolden-ratio sequence: D* vs the explicit bound")
phi = (1 + math.sqrt(5)) / 2
seq = Mod1Sequence.from_values(
    [F(int((k * phi % 1) * 10 ** 9), 10 ** 9) for k in range(1, 2001)])
d = star_discrepancy(seq)
for big_h in (4, 16, 64):
    print(f"  H={big_h:3d}: D* = {float(d):.5f} <= bound = "
          f"{erdos_turan_bound(seq, big_h):.5f}")

print("\n|sum e(h x_n)| for the same sequence stays far below N:")
for h in (1, 2, 3):
    print(f"  h={h}: {exp_sum(seq, h):8.2f}  (N = {len(seq)})")

print("\nsecond-derivative-test bound for phase 0.01 * t**1.5, q=0:")
n = 10 ** 4
lam = 0.75 * 0.01 / math.sqrt(n)
print(f"  bound = {weyl_vdc_bound(n, lam, math.sqrt(n), 0):.1f}")

print("\ncertified power-phase sequence (exponent 3/2) equidistributes:")
rep = power_phase_experiment([1], [F(3, 2)], 1000, 20_000, checkpoints=4)
for row in rep["rows"]:
    print(f"  N = {row['N']:6d}: D*_N = {row['dstar']:.5f}")
