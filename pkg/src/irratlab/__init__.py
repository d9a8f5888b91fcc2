"""irratlab: certified series evaluation, equidistribution and sieve
experiments, gap-polynomial elimination, and integer-relation search."""

__version__ = "0.1.0"

from .exactnum import (CertifiedReal, Rational, certified_floor,
                       nearest_int_dist, pow_rational)
from .series import (PartialSum, cover_count, injectivity_witness,
                     prime_series_partial, residual_norm, s_lambda_partial,
                     tail_bound)
from .primes import (GapSequence, OffsetTuple, PrimeTable,
                     constellation_count, gap_poly_nonvanish_rate, li,
                     li_inverse, nu, selberg_bound)
from .equidist import (Mod1Sequence, PhaseSpec, erdos_turan_bound, exp_sum,
                       frac_parts, power_phase_experiment,
                       prime_ratio_experiment, star_discrepancy,
                       weyl_vdc_bound)
from .polyelim import (MultiPoly, PairTable, cross_shift_identity_test,
                       eliminate_step, initial_table, pair_order_max,
                       run_elimination, semantic_consistency)
from .digits import (DigitStream, FSpec, PeriodReport, build_stream,
                     check_ratio_conclusion, detect_period, digit_count)
from .relations import (RealVector, RelationResult, independence_experiment,
                        pslq)

__all__ = [name for name in dir() if not name.startswith("_")]
