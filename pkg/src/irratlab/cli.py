"""Command-line surface: every experiment behind one subcommand tree with
machine-readable output.

Exit codes: 0 on success, 2 on usage or precondition errors (one-line
``error: ...`` message on stderr).  All stdout payloads are JSON by default;
``--format text`` gives compact human lines and ``--format csv`` emits plot
data for report types that carry rows.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from fractions import Fraction

from . import digits as digits_mod
from . import equidist, polyelim, primes, relations, series, unipoly
from .errors import IrratlabError


def emit_plot_data(rows, columns) -> str:
    """CSV text (RFC-4180 quoting) from a list of row dicts; missing
    columns raise an error naming the first absent one."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        for col in columns:
            if col not in row:
                raise IrratlabError(f"column {col!r} missing from report row")
        writer.writerow([row[col] for col in columns])
    return buf.getvalue()


def _table_for(limit, args):
    cache = args.sieve_cache or os.environ.get("IRRATLAB_SIEVE_CACHE")
    return primes.PrimeTable.load_or_build(limit, cache_path=cache)


def _print(payload, args, text_fn=None, csv_fn=None):
    fmt = args.format
    if fmt == "json":
        out = json.dumps(payload, indent=None, sort_keys=True)
    elif fmt == "csv":
        if csv_fn is None:
            raise IrratlabError("this subcommand has no CSV representation")
        out = csv_fn(payload)
    else:
        out = text_fn(payload) if text_fn else json.dumps(payload, sort_keys=True)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out if out.endswith("\n") else out + "\n")
    else:
        print(out)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _int_list(text: str):
    return [int(v) for v in text.split(",") if v != ""]


# -- handlers ----------------------------------------------------------------

def _series_eval(args):
    ps = series.s_lambda_partial(args.lam, args.n)
    return ps.to_json(), lambda p: f"value {p['value']} tail <= {p['tail_bound']}"


def _series_tail(args):
    b = series.tail_bound(args.lam, args.n)
    return ({"tail_bound": str(b), "n": args.n, "float": float(b)},
            lambda p: f"tail <= {p['tail_bound']} (~{p['float']:.3g})")


def _series_witness(args):
    n0 = series.injectivity_witness(args.lambda1, args.lambda2)
    return ({"n0": n0, "separation": f"1/{n0}!"},
            lambda p: f"witness index {p['n0']}")


def _series_cover(args):
    c = series.cover_count(args.t, args.n)
    return ({"count": c, "t": str(args.t), "n": args.n},
            lambda p: str(p["count"]))


def _primes_nth(args):
    table = _table_for(primes.PrimeTable.limit_for_count(args.n), args)
    return ({"n": args.n, "prime": table.nth_prime(args.n)},
            lambda p: str(p["prime"]))


def _primes_gaps(args):
    limit = primes.PrimeTable.limit_for_count(args.start + args.count + 1)
    table = _table_for(limit, args)
    gs = table.gaps(args.start, args.count)
    return ({"start": args.start, "gaps": list(gs.gaps)},
            lambda p: ",".join(str(g) for g in p["gaps"]))


def _primes_constellation(args):
    offsets = primes.OffsetTuple.of(_int_list(args.offsets))
    table = _table_for(2 * args.x + max(offsets.offsets) + 1, args)
    count = primes.constellation_count(table, args.x, offsets)
    payload = {"x": args.x, "offsets": list(offsets.offsets), "count": count}
    if args.selberg_constant is not None:
        k = len(offsets.offsets) - 1
        payload["selberg_rhs"] = primes.selberg_bound(args.x, k,
                                                      args.selberg_constant)
    return payload, lambda p: str(p["count"])


def _primes_li_inverse(args):
    y = primes.li_inverse(args.t, tol=args.tol)
    return ({"t": args.t, "value": y, "tol": args.tol},
            lambda p: f"{p['value']:.9g}")


def _primes_gap_poly(args):
    poly = polyelim.parse_multipoly(args.poly)
    limit = primes.PrimeTable.limit_for_count(
        args.start + args.count + poly.nvars + 1)
    table = _table_for(limit, args)
    report = primes.gap_poly_experiment(table, poly, args.start, args.count)
    return report, lambda p: f"rate {p['rate']} ({p['rate_float']:.4f})"


def _parse_entries(args):
    if args.file:
        with open(args.file) as fh:
            values = [Fraction(line.strip()) for line in fh if line.strip()]
    elif args.entries:
        values = [Fraction(v) for v in args.entries.split(",")]
    else:
        raise IrratlabError("provide --entries or --file")
    return equidist.Mod1Sequence.from_values(values)


def _equidist_disc(args):
    seq = _parse_entries(args)
    d = equidist.star_discrepancy(seq)
    return ({"N": len(seq), "discrepancy_star": float(d),
             "discrepancy_star_exact": str(d)},
            lambda p: p["discrepancy_star_exact"])


def _equidist_expsum(args):
    seq = _parse_entries(args)
    v = equidist.exp_sum(seq, args.h)
    return ({"N": len(seq), "h": args.h, "magnitude": v,
             "err_bound": equidist.exp_sum_phase_error(len(seq))},
            lambda p: f"{p['magnitude']:.9g}")


def _equidist_et(args):
    seq = _parse_entries(args)
    rhs = equidist.erdos_turan_bound(seq, args.big_h)
    d = equidist.star_discrepancy(seq)
    return ({"N": len(seq), "H": args.big_h, "et_rhs": rhs,
             "discrepancy_star": float(d),
             "dominates": rhs >= float(d)},
            lambda p: f"D* {p['discrepancy_star']:.6g} <= bound {p['et_rhs']:.6g}")


def _equidist_weyl(args):
    v = equidist.weyl_vdc_bound(args.n, args.lam, args.alpha, args.q)
    return ({"n": args.n, "lam": args.lam, "alpha": args.alpha, "q": args.q,
             "bound": v},
            lambda p: f"{p['bound']:.9g}")


def _equidist_thm1(args):
    lams = [Fraction(v) for v in args.lambdas.split(",")]
    a = _int_list(args.a)
    report = equidist.power_phase_experiment(a, lams, args.n1, args.n2,
                                             checkpoints=args.checkpoints)
    return (report,
            lambda p: f"D*_N = {p['discrepancy_star']:.6g} (N={p['N']})",
            lambda p: emit_plot_data(p["rows"], ["N", "dstar"]))


def _equidist_lemma6(args):
    xs = _int_list(args.x)
    rows = []
    for x in xs:
        limit = primes.PrimeTable.limit_for_count(2 * x + 1)
        table = _table_for(limit, args)
        rows.append(equidist.prime_ratio_experiment(
            table, unipoly.parse(args.poly), x, big_h=args.big_h,
            c=args.c, constant=args.constant, substitute=args.substitute))
    payload = rows[0] if len(rows) == 1 else {"rows": rows}
    return (payload,
            lambda p: json.dumps(p, sort_keys=True),
            lambda p: emit_plot_data(
                p.get("rows", [p]),
                ["x", "discrepancy_star", "lemma6_rhs", "ratio"]))


def _elim_run(args):
    coeffs = unipoly.parse(args.poly)
    result = polyelim.run_elimination(coeffs, depth=args.depth)
    payload = {"steps": result.step_count, "window": result.window,
               "relation": {str(i): repr(q) for i, q in sorted(result.qs.items())}}
    if args.trace:
        payload["trace"] = result.trace_json()
    return payload, lambda p: f"{p['steps']} steps -> {p['relation']}"


def _elim_lemma5(args):
    rng = random.Random(args.seed)
    if args.random:
        agree = True
        nonvanishing = 0
        for _ in range(args.random):
            p = polyelim.MultiPoly.random(rng, 3, 3, nonzero=True)
            q = polyelim.MultiPoly.random(rng, 3, 3)
            nu = rng.choice([1, -2, 3])
            verdict = polyelim.cross_shift_identity_test(p, q, nu, rng=rng)
            agree &= (verdict["vanishes"] == verdict["random_vanishes"])
            nonvanishing += not verdict["vanishes"]
        return ({"instances": args.random, "nonvanishing": nonvanishing,
                 "verdicts_agree": agree},
                lambda p: f"{p['nonvanishing']}/{p['instances']} nonvanishing")
    if not args.p or not args.q:
        raise IrratlabError("provide --p and --q, or use --random N")
    p = polyelim.parse_multipoly(args.p)
    q = polyelim.parse_multipoly(args.q)
    verdict = polyelim.cross_shift_identity_test(p, q, args.nu, rng=rng)
    verdict["witness"] = list(verdict["witness"]) if verdict["witness"] else None
    return verdict, lambda v: "vanishes" if v["vanishes"] else "nonvanishing"


def _digits_build(args):
    f = digits_mod.FSpec.parse(args.f, args.base)
    stream = digits_mod.build_stream(f, args.base, args.digits)
    return ({"base": args.base, "digits": stream.render(blocks=args.blocks),
             "blocks_flagged_proper_power_base": stream.base_flagged_proper_power},
            lambda p: p["digits"])


def _digits_detect(args):
    f = digits_mod.FSpec.parse(args.f, args.base)
    need = max(args.digits, args.max_preperiod + 3 * args.max_period)
    stream = digits_mod.build_stream(f, args.base, need)
    report = digits_mod.detect_period(stream, args.max_preperiod,
                                      args.max_period)
    return (report.to_json(),
            lambda p: (f"period {p['p']} after {p['s']} digits = "
                       f"{p['num']}/{p['den']}") if p["found"] else "no period found")


def _digits_check(args):
    f = digits_mod.FSpec.parse(args.f, args.base)
    report = digits_mod.check_ratio_conclusion(f, args.base, args.n1, args.n2,
                                               c_candidate=args.c)
    return report, lambda p: (f"ratio -> {p['ratio_limit_estimate']:.6g}, "
                              f"nearest power {p['nearest_power_of_base']}")


def _relations_pslq(args):
    values = [Fraction(v) for v in args.values.split(",")]
    vec = relations.RealVector.from_fractions(values, prec=args.prec)
    result = relations.pslq(vec, max_norm=args.max_norm,
                            iter_cap=args.iter_cap)
    return result.to_json(), lambda p: json.dumps(p, sort_keys=True)


def _parse_const_spec(token: str):
    t = token.strip()
    if t == "1":
        return ("one",)
    if t == "e":
        return ("e",)
    if t.startswith("s:"):
        return ("s_lambda", Fraction(t[2:]))
    if t.startswith("pk:"):
        k = int(t[3:])
        return ("prime_poly", tuple([0] * k + [1]))
    raise IrratlabError(f"unknown constant spec {token!r} "
                        "(use 1, e, s:<lam>, pk:<k>)")


def _relations_independence(args):
    specs = [_parse_const_spec(t) for t in args.constants.split(",")]
    table = None
    if any(s[0] == "prime_poly" for s in specs):
        table = _table_for(primes.PrimeTable.limit_for_count(4000), args)
    report = relations.independence_experiment(
        specs, args.digits, max_norm=args.max_norm, table=table,
        iter_cap=args.iter_cap)
    return report, lambda p: p["outcome"]


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irratlab",
        description="number-theoretic series, discrepancy, sieve, "
                    "elimination, and integer-relation experiments")
    parser.add_argument("--format", choices=("json", "text", "csv"),
                        default="json")
    parser.add_argument("--output", default=None, help="write stdout payload here")
    parser.add_argument("--sieve-cache", default=None,
                        help="path for the sieve bitmap cache "
                             "(or IRRATLAB_SIEVE_CACHE)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for all randomized subcommands")
    top = parser.add_subparsers(dest="group", required=True)

    g = top.add_parser("series").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("eval"); p.add_argument("--lambda", dest="lam", type=_fraction, required=True)
    p.add_argument("--n", type=int, required=True); p.set_defaults(fn=_series_eval)
    p = g.add_parser("tail"); p.add_argument("--lambda", dest="lam", type=_fraction, required=True)
    p.add_argument("--n", type=int, required=True); p.set_defaults(fn=_series_tail)
    p = g.add_parser("witness")
    p.add_argument("--lambda1", type=_fraction, required=True)
    p.add_argument("--lambda2", type=_fraction, required=True)
    p.set_defaults(fn=_series_witness)
    p = g.add_parser("cover"); p.add_argument("--t", type=_fraction, required=True)
    p.add_argument("--n", type=int, required=True); p.set_defaults(fn=_series_cover)

    g = top.add_parser("primes").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("nth"); p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=_primes_nth)
    p = g.add_parser("gaps"); p.add_argument("--start", type=int, required=True)
    p.add_argument("--count", type=int, required=True); p.set_defaults(fn=_primes_gaps)
    p = g.add_parser("constellation")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--offsets", required=True)
    p.add_argument("--selberg-constant", type=float, default=None)
    p.set_defaults(fn=_primes_constellation)
    p = g.add_parser("li-inverse")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(fn=_primes_li_inverse)
    p = g.add_parser("gap-poly")
    p.add_argument("--poly", required=True, help="e.g. X1-X2")
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.set_defaults(fn=_primes_gap_poly)

    g = top.add_parser("equidist").add_subparsers(dest="cmd", required=True)
    for name, fn, extra in (
            ("disc", _equidist_disc, ()),
            ("expsum", _equidist_expsum, ("h",)),
            ("et", _equidist_et, ("H",))):
        p = g.add_parser(name)
        p.add_argument("--entries", default=None, help="comma-separated rationals")
        p.add_argument("--file", default=None)
        if "h" in extra:
            p.add_argument("--h", type=int, default=1)
        if "H" in extra:
            p.add_argument("--H", dest="big_h", type=int, default=4)
        p.set_defaults(fn=fn)
    p = g.add_parser("weyl")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--q", type=int, default=0)
    p.set_defaults(fn=_equidist_weyl)
    p = g.add_parser("thm1")
    p.add_argument("--a", default="1", help="comma-separated coefficients")
    p.add_argument("--lambdas", required=True, help="comma-separated rationals")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--checkpoints", type=int, default=0)
    p.set_defaults(fn=_equidist_thm1)
    p = g.add_parser("lemma6")
    p.add_argument("--poly", default="x", help="integer polynomial in x")
    p.add_argument("--x", required=True, help="window start (comma list sweeps)")
    p.add_argument("--H", dest="big_h", type=int, default=16)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--C", dest="constant", type=float, default=1.0)
    p.add_argument("--substitute", action="store_true")
    p.set_defaults(fn=_equidist_lemma6)

    g = top.add_parser("elim").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("run")
    p.add_argument("--poly", required=True, help="integer polynomial in x")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(fn=_elim_run)
    p = g.add_parser("lemma5")
    p.add_argument("--p", default=None)
    p.add_argument("--q", default=None)
    p.add_argument("--nu", type=int, default=1)
    p.add_argument("--random", type=int, default=0,
                   help="run this many random instances instead")
    p.set_defaults(fn=_elim_lemma5)

    g = top.add_parser("digits").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("build")
    p.add_argument("--f", required=True)
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--digits", type=int, required=True)
    p.add_argument("--blocks", action="store_true")
    p.set_defaults(fn=_digits_build)
    p = g.add_parser("detect")
    p.add_argument("--f", required=True)
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--digits", type=int, default=1000)
    p.add_argument("--max-preperiod", type=int, default=50)
    p.add_argument("--max-period", type=int, default=50)
    p.set_defaults(fn=_digits_detect)
    p = g.add_parser("check")
    p.add_argument("--f", required=True)
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--n1", type=int, default=1)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--c", type=int, default=None)
    p.set_defaults(fn=_digits_check)

    g = top.add_parser("relations").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("pslq")
    p.add_argument("--values", required=True, help="comma-separated rationals")
    p.add_argument("--prec", type=int, default=256, help="bits")
    p.add_argument("--max-norm", type=int, default=100)
    p.add_argument("--iter-cap", type=int, default=20000)
    p.set_defaults(fn=_relations_pslq)
    p = g.add_parser("independence")
    p.add_argument("--constants", required=True,
                   help="comma list of: 1, e, s:<lam>, pk:<k>")
    p.add_argument("--digits", type=int, default=120)
    p.add_argument("--max-norm", type=int, default=10000)
    p.add_argument("--iter-cap", type=int, default=20000)
    p.set_defaults(fn=_relations_independence)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.fn(args)
    except IrratlabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    payload, text_fn = result[0], result[1]
    csv_fn = result[2] if len(result) > 2 else None
    _print(payload, args, text_fn=text_fn, csv_fn=csv_fn)
    return 0


if __name__ == "__main__":
    sys.exit(main())
