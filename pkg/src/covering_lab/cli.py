"""Command-line entry point: ``covering-lab <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import analytic, fullscale
from .congruence import (
    DEFAULT_SCAN_BUDGET,
    CoveringSystem,
    ScanBudgetError,
    SystemFormatError,
    covered_density,
    delta,
    is_covering,
    is_distinct,
    is_exact,
    is_smooth,
    lcm_moduli,
    min_modulus,
    reciprocal_sum,
    smooth_reciprocal_mass,
)
from .constructions import CLASSIC, build_small_min_modulus_covering, greedy_power2_covering
from .distortion import (
    DeltaSchedule,
    PrimePowerProfile,
    measure,
    moment_bound_chain_check,
    run,
)
from .primes import loglog_lemma_check, sieve_for_count
from .report import FAIL, TOO_WIDE, LemmaReport, jsonable
from .rigorous import MIN_PRECISION, PRECISION_ENV, default_precision

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
LEMMA_GROUPS = ("tail", "m1", "difference", "smooth", "loglog")
DEFAULT_DIFFERENCE_DELTAS = ("1/12", "1/13", "1/100", "1/1000")
DEFAULT_SMOOTH_DELTAS = ("1/12", "1/100")


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _precision(text: str) -> int:
    bits = int(text)
    if bits < MIN_PRECISION:
        raise argparse.ArgumentTypeError(f"precision must be at least {MIN_PRECISION} bits")
    return bits


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _load_system(path: str) -> CoveringSystem:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return CoveringSystem.from_json(text)
    except SystemFormatError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _config(args: argparse.Namespace) -> dict:
    skip = {"func"}
    cfg = {k: v for k, v in vars(args).items() if k not in skip}
    cfg["precision"] = args.precision if getattr(args, "precision", None) else default_precision()
    cfg["mode"] = "full" if getattr(args, "full", False) else "desk"
    return cfg


def _write_report(args, payload: dict) -> None:
    path = getattr(args, "report", None)
    if not path:
        return
    doc = {"config": _config(args), **payload}
    Path(path).write_text(json.dumps(jsonable(doc), indent=2) + "\n")


def _verdict_code(reports: list[LemmaReport], strict: bool) -> int:
    verdicts = {r.verdict for r in reports}
    if FAIL in verdicts or (strict and TOO_WIDE in verdicts):
        return EXIT_FAIL
    return EXIT_OK


def _print_reports(reports: list[LemmaReport], verbose: bool) -> None:
    for r in reports:
        if verbose:
            print("\n".join(r.summary_lines()))
        else:
            print(f"[{r.verdict}] {r.name}: {r.claim}")
            for bad in r.failures():
                print(f"    [{bad.verdict}] {bad.name}: {bad.claim}")


# ---------------------------------------------------------------------------
# subcommands

def cmd_verify(args) -> int:
    system = _load_system(args.file)
    covering = is_covering(system, args.budget)
    exact = is_exact(system, args.budget) if covering else False
    distinct = is_distinct(system)
    total = reciprocal_sum(system)
    print(f"covering: {str(covering).lower()}, distinct: {str(distinct).lower()}, "
          f"exact: {str(exact).lower()}, sum: {total}")
    _write_report(args, {"covering": covering, "distinct": distinct, "exact": exact, "sum": total,
                         "lcm": lcm_moduli(system), "min_modulus": min_modulus(system)})
    return EXIT_FAIL if args.strict and not covering else EXIT_OK


def cmd_density(args) -> int:
    system = _load_system(args.file)
    dens = covered_density(system, args.budget)
    out = {"density": dens, "sum": reciprocal_sum(system)}
    print(f"density: {dens}")
    if args.smooth_bound is not None:
        P = args.smooth_bound
        part = [c for c in system if is_smooth(c.modulus, P)]
        out["smooth_density"] = covered_density(part, args.budget)
        out["smooth_mass"] = smooth_reciprocal_mass(P, min_modulus(system))
        print(f"density of {P}-smooth classes: {out['smooth_density']}")
        print(f"sum of 1/m over {P}-smooth m >= {min_modulus(system)}: {out['smooth_mass']}")
    _write_report(args, out)
    return EXIT_OK


def cmd_delta(args) -> int:
    system = _load_system(args.file)
    value = delta(system, args.budget)
    print(f"delta: {value}")
    _write_report(args, {"delta": value})
    return EXIT_OK


def cmd_distort(args) -> int:
    system = _load_system(args.file)
    profile = (PrimePowerProfile.parse(args.profile) if args.profile
               else PrimePowerProfile.for_modulus(lcm_moduli(system)))
    schedule = DeltaSchedule.parse(args.delta) if args.delta else DeltaSchedule.zeros(profile.r)
    if is_distinct(system):
        report = moment_bound_chain_check(system, profile, schedule, budget=args.state_budget)
    else:
        report = LemmaReport(name="distortion", claim="total mass stays 1 at every level",
                             inputs={"profile": str(profile), "deltas": list(schedule.deltas)})
        report.notes.append("moduli repeat, so the moment-bound chain is not applicable")
        levels = []
        for state, bad in run(system, profile, schedule, args.state_budget):
            if bad is None:
                continue
            report.fact(f"mass@{state.level}", state.mass == 1, "total mass is exactly 1")
            levels.append({"level": state.level, "mass": state.mass, "measure": measure(state, bad)})
        report.enclosures["levels"] = levels
    for row in report.enclosures["levels"]:
        extra = "".join(f", {k}: {row[k]}" for k in ("moment_bound", "secondbound") if k in row)
        print(f"level {row['level']}: mass {row['mass']}, P(B) {row['measure']}{extra}")
    print(f"[{report.verdict}] {report.name}")
    _write_report(args, {"reports": [report]})
    return _verdict_code([report], args.strict)


def _lemma_reports(args) -> list[LemmaReport]:
    prec = args.precision or default_precision()
    groups = [args.only] if args.only else list(LEMMA_GROUPS)
    full_values = {}
    reports: list[LemmaReport] = []
    if args.full and any(g in ("tail", "m1") for g in groups):
        def progress(index, prime):
            print(f"  ... {index} primes folded (last {prime})", file=sys.stderr, flush=True)

        full = fullscale.full_scale_report(args.full_target, args.checkpoint, args.checkpoint_stride, prec,
                                           progress=progress)
        reports.append(full)
        if full.enclosures["primes_folded"] == analytic.BILLION - 1:
            full_values = full.enclosures
    table = None
    for group in groups:
        if group == "loglog":
            reports.append(loglog_lemma_check(args.loglog_max))
        elif group == "tail":
            if table is None:
                table = sieve_for_count(10 * 10**4)
            reports.append(analytic.sigma_bounds(10**4, table, prec))
            reports.append(analytic.tail_estimate_report(analytic.BILLION, prec=prec,
                                                         m0_value=full_values.get("m0")))
            reports.append(analytic.auxiliary_monotonicity_report())
        elif group == "m1":
            reports.append(analytic.m1_bound_report(analytic.BILLION, prec=prec,
                                                    product_value=full_values.get("m1prod"),
                                                    logp_value=full_values.get("logp_over_p")))
        elif group == "difference":
            for d in ([args.delta] if args.delta else [Fraction(x) for x in DEFAULT_DIFFERENCE_DELTAS]):
                reports.append(analytic.difference_bound(d, prec=prec))
        elif group == "smooth":
            for d in ([args.delta] if args.delta else [Fraction(x) for x in DEFAULT_SMOOTH_DELTAS]):
                reports.append(analytic.smooth_tail_bound(d, prec=prec))
    return reports


def cmd_lemmas(args) -> int:
    if args.delta is not None and not 0 < args.delta <= Fraction(1, 12):
        raise UsageError(f"--delta {args.delta} is outside (0, 1/12]")
    reports = _lemma_reports(args)
    _print_reports(reports, args.verbose)
    _write_report(args, {"reports": reports})
    return _verdict_code(reports, args.strict)


def cmd_construct(args) -> int:
    if args.greedy:
        if args.t is None or args.steps is None:
            raise UsageError("--greedy needs --t and --steps")
        system = greedy_power2_covering(args.t, args.steps)
    else:
        if args.min_modulus is None or args.epsilon is None:
            raise UsageError("construct needs --min-modulus and --epsilon (or --greedy)")
        system = build_small_min_modulus_covering(args.min_modulus, args.epsilon, args.budget)
    text = system.to_json()
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    print(f"classes: {len(system)}, sum: {reciprocal_sum(system)}, lcm: {lcm_moduli(system)}", file=sys.stderr)
    return EXIT_OK


def cmd_report(args) -> int:
    classic = CoveringSystem.from_pairs(CLASSIC)
    summary = LemmaReport(name="constructions", claim="built coverings verify by exhaustive scan")
    summary.fact("classic", is_covering(classic) and is_distinct(classic) and not is_exact(classic)
                 and reciprocal_sum(classic) == Fraction(4, 3), "classic system: covering, distinct, not exact, sum 4/3")
    for m0, eps in ((2, Fraction(1, 4)), (3, Fraction(1, 4)), (4, Fraction(1, 10))):
        s = build_small_min_modulus_covering(m0, eps, args.budget)
        summary.fact(f"min-modulus-{m0}", is_covering(s, args.budget) and reciprocal_sum(s) < 1 + eps,
                     f"covering with minimum modulus {m0} and sum < 1 + {eps}", sum=reciprocal_sum(s))
    args.only, args.delta = None, None
    reports = [summary] + _lemma_reports(args)
    _print_reports(reports, args.verbose)
    _write_report(args, {"reports": reports})
    return _verdict_code(reports, args.strict)


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="covering-lab", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", metavar="OUT.json", help="write a machine-readable report")
    common.add_argument("--strict", action="store_true",
                        help="exit 1 on any negative or undecided verdict, not only on definite failures")
    common.add_argument("--budget", type=_positive, default=DEFAULT_SCAN_BUDGET, help="largest lcm to scan")
    common.add_argument("--precision", type=_precision, default=None,
                        help=f"working precision in bits (default from ${PRECISION_ENV}, else 256)")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="covering / distinct / exact / reciprocal sum")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("density", parents=[common], help="exact density of the union of the classes")
    p.add_argument("file")
    p.add_argument("--smooth-bound", type=_positive, metavar="P")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("delta", parents=[common], help="density missed by the 3-smooth classes")
    p.add_argument("file")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("distort", parents=[common], help="run the distortion reweighting")
    p.add_argument("file")
    p.add_argument("--profile", help="prime powers of the lcm, e.g. 2^3,3,5")
    p.add_argument("--delta", help="comma-separated damping levels, e.g. 0,1/4,1/4")
    p.add_argument("--state-budget", type=_positive, default=10**7)
    p.set_defaults(func=cmd_distort)

    lemma_opts = argparse.ArgumentParser(add_help=False)
    lemma_opts.add_argument("--full", action="store_true", help="fold the first 10^9 primes (hours)")
    lemma_opts.add_argument("--full-target", type=_positive, default=analytic.BILLION, help=argparse.SUPPRESS)
    lemma_opts.add_argument("--checkpoint", default="covering-lab-full.ckpt")
    lemma_opts.add_argument("--checkpoint-stride", type=_positive, default=fullscale.DEFAULT_STRIDE)
    lemma_opts.add_argument("--loglog-max", type=_positive, default=10**5)

    p = sub.add_parser("lemmas", parents=[common, lemma_opts], help="reproduce the explicit analytic bounds")
    p.add_argument("--only", choices=LEMMA_GROUPS)
    p.add_argument("--delta", type=_fraction, help="a single Delta in (0, 1/12]")
    p.set_defaults(func=cmd_lemmas)

    p = sub.add_parser("construct", parents=[common], help="build a verified covering")
    p.add_argument("--min-modulus", type=int, choices=(2, 3, 4))
    p.add_argument("--epsilon", type=_fraction)
    p.add_argument("--greedy", action="store_true")
    p.add_argument("--t", type=int)
    p.add_argument("--steps", type=_positive)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("report", parents=[common, lemma_opts], help="constructions plus every lemma check")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ScanBudgetError, ValueError) as exc:
        print(f"covering-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
