"""
Prime gaps, constellations, and the inverse logarithmic integral
================================================================

A segmented sieve provides indexed primes p_n and gap windows; twin-prime
counts are compared against the sieve-shape bound, gap polynomials are
tested for nonvanishing along the gap sequence, and the inverse of
``li(t) = integral_2^t dx/log x`` is computed by quadrature plus Newton.
"""

import math

from irratlab import (OffsetTuple, PrimeTable, constellation_count,
                      gap_poly_nonvanish_rate, li, li_inverse, nu,
                      selberg_bound)
from irratlab.polyelim import parse_multipoly

table = PrimeTable.build(2_100_000)
print(f"sieved to {table.limit}: {table.count} primes; "
      f"p_100 = {table.nth_prime(100)}")
print("first gaps:", table.gaps(1, 10).gaps)

print("\ntwin-prime counts on [x, 2x] against x*(loglog x)^3/(log x)^2:")
twins = OffsetTuple.of([0, 2])
print("  distinct residues nu(p) for p = 2, 3, 5:",
      [nu(p, twins) for p in (2, 3, 5)])
for x in (10 ** 4, 10 ** 5, 10 ** 6):
    count = constellation_count(table, x, twins)
    shape = selberg_bound(x, k=1)
    print(f"  x = {x:7d}: count = {count:5d}, count/shape = {count / shape:.4f}")

print("\ngap-polynomial nonvanishing rates for X1 - X2 (consecutive equal gaps):")
for start in (10 ** 3, 10 ** 4, 10 ** 5):
    r = gap_poly_nonvanish_rate(table, parse_multipoly("X1-X2"), start, 4000)
    print(f"  window at n = {start:6d}: rate = {float(r):.4f}")

print("\ninverse logarithmic integral:")
print(f"  li(10) = {li(10.0):.6f}; li_inverse(li(10)) = "
      f"{li_inverse(li(10.0)):.6f}")
for t in (10 ** 3, 10 ** 4, 10 ** 5):
    y = li_inverse(float(t))
    print(f"  li_inverse({t}) = {y:12.1f}   vs p_t = {table.nth_prime(t):9d}  "
          f"ratio to t*log t = {y / (t * math.log(t)):.4f}")
