"""
Gap-polynomial elimination
==========================

The remainder of the prime-polynomial series, written on the basis
``p_n**v / n**m`` with gap-polynomial coefficients, can be reduced: each
step multiplies by the growth-maximal coefficient at two consecutive
indices and subtracts, cancelling that pair exactly while every new pair
has strictly smaller growth.  The run ends with a relation supported on
``v = m`` only.
"""

from irratlab import PrimeTable, run_elimination, semantic_consistency
from irratlab.polyelim import (MultiPoly, cross_shift_identity_test,
                               eval_pair_table, initial_table)

for poly, name in ([(0, 1), "x"], [(0, 0, 1), "x^2"], [(0, 0, 0, 1), "x^3"]):
    result = run_elimination(poly)
    rel = {i: repr(q) for i, q in sorted(result.qs.items())}
    print(f"P = {name}: {result.step_count} steps, window {result.window}, "
          f"relation {rel}")

print("\nstep trace for P = x^3:")
result = run_elimination((0, 0, 0, 1), keep_tables=True)
for step in result.steps:
    print(f"  step {step.index}: eliminated {step.eliminated}, "
          f"table {step.size_before['pairs']} -> {step.size_after['pairs']} pairs")

print("\nnumerical consistency of the bookkeeping (true primes vs tables):")
table = PrimeTable.build(200_000)
report = semantic_consistency((0, 0, 1), [1000, 10000], table)
for row in report["rows"]:
    print(f"  level {row['level']} at n = {row['n']:6d}: "
          f"residual = {row['residual']:.3e} "
          f"(scaled {row['scaled']:.3f})")
print(f"  declared budget C = {report['budget_constant']}, "
      f"log power c = {report['log_power']}; "
      f"max scaled residual = {report['fitted_constant']:.3f}")

print("\nthe combination nu*X1*P + P*shift(Q) - shift(P)*Q never vanishes "
      "for P != 0:")
import random
rng = random.Random(1)
for _ in range(3):
    p = MultiPoly.random(rng, 2, 2, nonzero=True)
    q = MultiPoly.random(rng, 2, 2)
    v = cross_shift_identity_test(p, q, 1, rng=rng)
    print(f"  P = {p!r}; Q = {q!r}: vanishes = {v['vanishes']}")
