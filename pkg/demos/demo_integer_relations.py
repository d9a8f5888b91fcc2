"""
Integer-relation search with exclusion certificates
===================================================

Given certified high-precision constants, the relation search either finds
an integer vector (a_1, ..., a_k) with sum a_i x_i = 0 (up to the certified
radii) or certifies that no relation of Euclidean norm below a bound exists.
Series constants are evaluated with automatic truncation so their tails sit
far below the working precision.
"""

from fractions import Fraction as F

from irratlab import PrimeTable
from irratlab.relations import RealVector, independence_experiment, pslq

print("an exact planted relation: (1, 1/2) -> coefficients (1, -2)")
vec = RealVector.from_fractions([1, F(1, 2)], prec=256)
res = pslq(vec, max_norm=100)
print(f"  {res.outcome}: {res.coefficients}, residual {res.residual}")

table = PrimeTable.build(50_000)

print("\npositive control: 1 + sum(1/n!) - e = 0 (at 120 digits)")
rep = independence_experiment([("one",), ("prime_poly", (1,)), ("e",)],
                              120, max_norm=10 ** 4, table=table)
print(f"  {rep['outcome']}: {rep.get('coefficients')}, "
      f"residual {rep.get('residual')}")

print("\nexclusion runs at 160 digits (norm bound 10**4):")
for specs, label in [
        ([("one",), ("e",), ("s_lambda", F(3, 2))], "1, e, sum([n^(3/2)]/n!)"),
        ([("one",), ("prime_poly", (1,)), ("prime_poly", (0, 1))],
         "1, sum(1/n!), sum(p_n/n!)")]:
    rep = independence_experiment(specs, 160, max_norm=10 ** 4, table=table)
    print(f"  {label}:")
    print(f"    {rep['outcome']} with bound {rep.get('bound', 0):.0f} "
          f"(truncations: {[c['n_terms'] for c in rep['constants']]})")
