"""Reproducible command-line front end.

Every stochastic command requires an explicit --seed; identical invocations
produce byte-identical output.  Exit codes: 0 success / all properties hold,
1 a verified property was falsified, 2 usage or input-format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from . import selftest
from .cbrank import (
    build_approach_sequence,
    cb_levels,
    classify_limit,
    level_closed_form,
    truncation,
)
from .errors import ConsistencyError, FormatError, LampirsError
from .formats import (
    canonical_json,
    distribution_to_json,
    format_submodule,
    format_triple,
    fraction_str,
    measure_from_json,
    parse_triple,
    triple_to_json,
)
from .irs import (
    SubgroupMeasure,
    block_average_marginal,
    convergence_report,
    splice_measures,
)
from .lamplighter import certify_convergence
from .rng import derive_seed
from .submodules import (
    Submodule,
    construct_with_invariants,
    count_submodules,
    submodules_of_codimension,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def _emit(args, payload, csv_rows=None, csv_header=None):
    if getattr(args, "format", "json") == "csv" and csv_rows is not None:
        lines = [",".join(csv_header)] + [",".join(str(c) for c in r) for r in csv_rows]
        out = "\n".join(lines) + "\n"
    elif getattr(args, "format", "json") == "text":
        out = "\n".join(f"{k}: {v}" for k, v in payload.items()) + "\n"
    else:
        out = canonical_json(payload)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def cmd_count(args):
    formula = count_submodules(args.p, args.k, args.a)
    payload = {
        "schema": "lampirs.count.v1",
        "p": args.p,
        "k": args.k,
        "a": args.a,
        "formula": str(formula),
    }
    exit_code = EXIT_OK
    if args.enumerate:
        subs = submodules_of_codimension(args.p, args.k, args.a)
        payload["enumerated"] = len(subs)
        payload["match"] = len(subs) == formula
        if not payload["match"]:
            payload["violation"] = "enumeration disagrees with the closed form"
            exit_code = EXIT_VIOLATION
    _emit(args, payload)
    return exit_code


def cmd_invariants(args):
    with open(args.triple) as fh:
        triple = parse_triple(fh.read())
    payload = {"schema": "lampirs.invariants.v1", **triple.invariants()}
    _emit(args, payload)
    return EXIT_OK


def cmd_construct(args):
    U = construct_with_invariants(args.n, args.p, args.b, args.r)
    text = format_submodule(U)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_cb(args):
    poset = truncation(args.tmax, args.prodmax)
    levels = cb_levels(poset)
    rows = [
        (t, r, levels[(t, r)], level_closed_form((t, r)))
        for (t, r) in sorted(levels)
    ]
    mismatch = [row for row in rows if row[2] != row[3]]
    payload = {
        "schema": "lampirs.cb.v1",
        "tmax": args.tmax,
        "prodmax": args.prodmax,
        "levels": [
            {"t": t, "r": r, "level": lvl, "closed_form": cf} for t, r, lvl, cf in rows
        ],
        "closed_form_matches": not mismatch,
    }
    if mismatch:
        payload["violation"] = {
            "kind": "level-closed-form-mismatch",
            "witness": {"t": mismatch[0][0], "r": mismatch[0][1]},
        }
    _emit(args, payload, csv_rows=[r[:3] for r in rows], csv_header=("t", "r", "level"))
    return EXIT_OK if not mismatch else EXIT_VIOLATION


def cmd_approach(args):
    with open(args.triple) as fh:
        triple = parse_triple(fh.read())
    t_target, r_target = (int(tok) for tok in args.target.split(","))
    radius, shift_bound, horizon = (int(tok) for tok in args.ball.split(","))
    seq = build_approach_sequence(triple, (t_target, r_target), args.count)
    cert = certify_convergence(
        lambda m: seq[m - 1], triple, radius, shift_bound, min(horizon, args.count)
    )
    encodings_ok = all(W.poset_encoding() == (t_target, r_target) for W in seq)
    classification = classify_limit(seq, triple)
    payload = {
        "schema": "lampirs.approach.v1",
        "target": [t_target, r_target],
        "count": args.count,
        "encodings_exact": encodings_ok,
        "convergence": cert.to_json(),
        "classification": classification,
        "terms": [triple_to_json(W) for W in seq],
    }
    if args.outdir:
        import os

        os.makedirs(args.outdir, exist_ok=True)
        for idx, W in enumerate(seq, start=1):
            with open(os.path.join(args.outdir, f"term_{idx:03d}.triple"), "w") as fh:
                fh.write(format_triple(W))
        payload["outdir"] = args.outdir
    _emit(args, payload)
    ok = encodings_ok and cert.stabilized
    return EXIT_OK if ok else EXIT_VIOLATION


def _load_measure(path):
    with open(path) as fh:
        return measure_from_json(json.load(fh))


def _trend_grid(m):
    grid = []
    step = 1
    while step < m:
        grid.append(step)
        step *= 2
    grid.append(m)
    return grid


def cmd_irs(args):
    mu = _load_measure(args.mu)
    report = convergence_report(mu, args.m, args.j)
    trend = [convergence_report(mu, m, args.j) for m in _trend_grid(args.m)]
    payload = {
        "schema": "lampirs.irs.v1",
        "m": report["m"],
        "j": report["j"],
        "tv": fraction_str(report["tv"]),
        "literal_bound": fraction_str(report["literal_bound"]),
        "conservative_bound": fraction_str(report["conservative_bound"]),
        "pass": report["pass"],
        "literal_bound_held": report["literal_bound_held"],
        "trend": [
            {
                "m": row["m"],
                "tv": fraction_str(row["tv"]),
                "pass": row["pass"],
                "literal_bound_held": row["literal_bound_held"],
            }
            for row in trend
        ],
        "marginal": distribution_to_json(block_average_marginal(mu, args.m, 0, args.j)),
    }
    csv_rows = [
        (
            row["m"],
            args.j,
            fraction_str(row["tv"]),
            fraction_str(row["literal_bound"]),
            fraction_str(row["conservative_bound"]),
            row["pass"],
        )
        for row in trend
    ]
    _emit(
        args,
        payload,
        csv_rows=csv_rows,
        csv_header=("m", "j", "tv", "literal_bound", "conservative_bound", "pass"),
    )
    return EXIT_OK if report["pass"] else EXIT_VIOLATION


def cmd_mix(args):
    if args.mu1:
        mu1 = _load_measure(args.mu1)
    else:
        mu1 = SubgroupMeasure.point(Submodule.full(args.n, args.p))
    if args.mu2:
        mu2 = _load_measure(args.mu2)
    else:
        mu2 = SubgroupMeasure.point(Submodule.zero(args.n, args.p))
    lo, hi = (int(tok) for tok in args.window.split(","))
    nai_values = [int(tok) for tok in args.nai.split(",")]
    runs = []
    all_within = True
    for n_ai in nai_values:
        empirical, target, report = splice_measures(
            mu1, mu2, n_ai, lo, hi, args.trials, derive_seed(args.seed, n_ai)
        )
        all_within = all_within and report["within_bound"]
        runs.append(
            {
                "n_ai": n_ai,
                "tv": fraction_str(report["tv"]),
                "lambda_all_first": fraction_str(report["lambda_all_first"]),
                "lambda_all_second": fraction_str(report["lambda_all_second"]),
                "boundary_defect_bound": fraction_str(report["boundary_defect_bound"]),
                "within_bound": report["within_bound"],
                "majority_sym_diff_exact": fraction_str(
                    report["majority_sym_diff_exact"]
                ),
                "empirical": distribution_to_json(empirical),
                "target": distribution_to_json(target),
            }
        )
    payload = {
        "schema": "lampirs.mix.v1",
        "trials": args.trials,
        "seed": args.seed,
        "window": [lo, hi],
        "runs": runs,
    }
    csv_rows = [
        (
            run["n_ai"],
            run["tv"],
            run["lambda_all_first"],
            run["boundary_defect_bound"],
            run["within_bound"],
            run["majority_sym_diff_exact"],
        )
        for run in runs
    ]
    _emit(
        args,
        payload,
        csv_rows=csv_rows,
        csv_header=(
            "n_ai",
            "tv",
            "lambda_all_first",
            "boundary_defect_bound",
            "within_bound",
            "majority_sym_diff_exact",
        ),
    )
    return EXIT_OK if all_within else EXIT_VIOLATION


def cmd_selftest(args):
    report, timings = selftest.run_criteria(args.seed)
    if args.timings:
        sys.stderr.write(
            "".join(f"{name}: {secs:.2f}s\n" for name, secs in timings.items())
        )
    out = canonical_json(report)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    for entry in report["criteria"]:
        sys.stderr.write(
            f"criterion {entry['criterion']:2d} {entry['name']}: "
            f"{'PASS' if entry['passed'] else 'FAIL'}\n"
        )
    return EXIT_OK if report["all_passed"] else EXIT_VIOLATION


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lampirs",
        description="Exact computations in the subgroup space of lamplighter groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--format", choices=("json", "csv", "text"), default="json")
        sp.add_argument("-o", "--output", default=None)

    sp = sub.add_parser("count", help="closed-form submodule count, optionally checked")
    sp.add_argument("p", type=int)
    sp.add_argument("k", type=int)
    sp.add_argument("a", type=int)
    sp.add_argument("--enumerate", action="store_true")
    add_common(sp)
    sp.set_defaults(fn=cmd_count)

    sp = sub.add_parser("invariants", help="invariants of a subgroup triple file")
    sp.add_argument("--triple", required=True)
    add_common(sp)
    sp.set_defaults(fn=cmd_invariants)

    sp = sub.add_parser("construct", help="subgroup with prescribed period and rank")
    sp.add_argument("n", type=int)
    sp.add_argument("b", type=int)
    sp.add_argument("r", type=int)
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(fn=cmd_construct)

    sp = sub.add_parser("cb", help="derivative levels of the encoding order")
    sp.add_argument("--tmax", type=int, required=True)
    sp.add_argument("--prodmax", type=int, required=True)
    add_common(sp)
    sp.set_defaults(fn=cmd_cb)

    sp = sub.add_parser("approach", help="convergent sequence toward a triple")
    sp.add_argument("--triple", required=True)
    sp.add_argument("--target", required=True, metavar="t,r")
    sp.add_argument("--count", type=int, default=25)
    sp.add_argument("--ball", default="4,4,25", metavar="R,S,H")
    sp.add_argument("--outdir", default=None)
    add_common(sp)
    sp.set_defaults(fn=cmd_approach)

    sp = sub.add_parser("irs", help="block-average approximant distance report")
    sp.add_argument("--mu", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--j", type=int, required=True)
    add_common(sp)
    sp.set_defaults(fn=cmd_irs)

    sp = sub.add_parser("mix", help="splice two measures along majority sets")
    sp.add_argument("--nai", required=True, metavar="N[,N...]")
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--window", default="0,0", metavar="LO,HI")
    sp.add_argument("--mu1", default=None)
    sp.add_argument("--mu2", default=None)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--p", type=int, default=2)
    add_common(sp)
    sp.set_defaults(fn=cmd_mix)

    sp = sub.add_parser("selftest", help="run the full acceptance suite")
    sp.add_argument("--seed", type=int, default=selftest.DEFAULT_SEED)
    sp.add_argument("--timings", action="store_true")
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(fn=cmd_selftest)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except FormatError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_USAGE
    except FileNotFoundError as exc:
        sys.stderr.write(f"missing file: {exc}\n")
        return EXIT_USAGE
    except ConsistencyError as exc:
        sys.stdout.write(
            canonical_json({"schema": "lampirs.violation.v1", "violation": str(exc)})
        )
        return EXIT_VIOLATION
    except LampirsError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
