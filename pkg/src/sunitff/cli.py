"""Command-line front end: reproducible batch runs with JSON/TSV reports.

Every report echoes the effective configuration, embeds the bound values it
checked, and keeps a stable field order, so runs are self-describing and
byte-reproducible (a single generated_at timestamp field is excluded from
comparisons).  Exit status: 0 for success/PASS, 1 for a verified-claim
failure (an artifact bug, not bad input), 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction

from . import fermat
from .calculus import log_derivative
from .field import DEFAULT_DEGREE_CAP, FieldContext, RatFunc, is_prime, \
    ratfunc_from_term_text
from .places import (height, height_from_valuations, omega, parse_place,
                     parse_place_set, valuation)
from .uniteq import (BudgetExceeded, FamilyRejected, FrobeniusFamily,
                     MasonBoundViolation, SUnitGroup, Solution3,
                     count_bound_report, decompose_solution, family_contains,
                     gap_cover_check, height_caps, mason_bound,
                     solution_points, solve_three_term, solve_two_term,
                     verify_family, window_reports)

REPORT_VERSION = 1
TSV_HEADER = "#sunitff-report v1"

USAGE_ERROR = 2
CLAIM_FAILURE = 1


class UsageError(Exception):
    pass


def _rat(ctx, text):
    try:
        return ratfunc_from_term_text(ctx, text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational function literal {text!r}: {exc}")


def _triple_text(sol):
    return [sol[0].to_term_text(), sol[1].to_term_text(), sol[2].to_term_text()]


def _family_record(fam_id, family, canonical=None):
    record = {
        "id": fam_id,
        "dimension": family.dimension,
        "step": family.step,
        "u": [c.to_coeff_text() for c in family.u],
        "u_display": [c.to_term_text() for c in family.u],
    }
    if family.dimension == 2:
        record["v"] = [c.to_coeff_text() for c in family.v]
        record["v_display"] = [c.to_term_text() for c in family.v]
    if canonical is not None:
        record["canonical_form"] = {
            "alpha": list(canonical.alpha),
            "lambda": list(canonical.lam),
            "step": canonical.step,
            "subfield_size": canonical.subfield_size,
        }
    return record


def _bounds_block(group):
    caps = height_caps(group.S, group.ctx)
    return {
        "mason_bound": mason_bound(group.S, group.ctx),
        "coefficient_cap": caps.coefficient_cap,
        "solution_cap": caps.solution_cap,
    }


def _context(args):
    p = args.p
    if p is None:
        raise UsageError("--p is required")
    if not is_prime(p):
        raise UsageError(f"--p {p} is not prime")
    m = args.m or 1
    cap = args.max_degree or DEFAULT_DEGREE_CAP
    return FieldContext(p, m, max_degree=cap)


def _group(ctx, args):
    if not args.S:
        raise UsageError("--S is required")
    try:
        S = parse_place_set(ctx, args.S)
    except ValueError as exc:
        raise UsageError(f"bad place set {args.S!r}: {exc}")
    if len(S) < 2:
        raise UsageError("|S| >= 2 is required")
    return SUnitGroup(ctx, S)


# -- command handlers ----------------------------------------------------------


def _cmd_height(args):
    ctx = _context(args)
    x = _rat(ctx, args.x)
    report = {
        "x": x.to_term_text(),
        "height": height(x),
        "height_from_valuations": height_from_valuations(x),
    }
    if not x.is_zero:
        report["omega"] = omega(x)
    return 0, report, None


def _cmd_valuation(args):
    ctx = _context(args)
    try:
        place = parse_place(ctx, args.place)
    except ValueError as exc:
        raise UsageError(f"bad place literal {args.place!r}: {exc}")
    x = _rat(ctx, args.x)
    if x.is_zero:
        raise UsageError("valuation of zero is undefined")
    return 0, {
        "place": place.literal(),
        "deg": place.deg,
        "x": x.to_term_text(),
        "valuation": valuation(place, x),
    }, None


def _cmd_dlog(args):
    ctx = _context(args)
    x = _rat(ctx, args.x)
    if x.is_zero:
        raise UsageError("logarithmic derivative of zero is undefined")
    result = log_derivative(x)
    bound = omega(x) + 2 * ctx.genus - 2 + 2 * ctx.gonality
    h = height(result)
    ok = result.is_zero or h <= bound
    report = {
        "x": x.to_term_text(),
        "log_derivative": result.to_term_text(),
        "height": h,
        "omega": omega(x),
        "bound": bound,
        "pass": ok,
    }
    return (0 if ok else CLAIM_FAILURE), report, None


def _cmd_solve2(args):
    ctx = _context(args)
    group = _group(ctx, args)
    try:
        solutions = solve_two_term(group, primitive_only=not args.all,
                                   height_cap=args.height_cap)
    except MasonBoundViolation as exc:
        return CLAIM_FAILURE, {"error": str(exc)}, None
    rows = [{"x": x.to_term_text(), "y": y.to_term_text(),
             "height": height(x)} for x, y in solutions]
    report = {
        "bounds": _bounds_block(group),
        "primitive_only": not args.all,
        "count": len(rows),
        "solutions": rows,
    }
    tsv = [("x", "y", "height")] + [(r["x"], r["y"], str(r["height"]))
                                    for r in rows]
    return 0, report, tsv


def _resolve_budget(args):
    budget = args.budget
    if budget is None:
        budget = 10 ** 12 if args.long else None
    return budget


def _cmd_solve3(args):
    ctx = _context(args)
    group = _group(ctx, args)
    if args.hcap is None:
        raise UsageError("--hcap is required")
    kwargs = {}
    budget = _resolve_budget(args)
    if budget is not None:
        kwargs["pair_budget"] = budget
    n = group.candidate_count(args.hcap)
    if args.long:
        print(f"estimated candidate pairs: {n} * {n} = {n * n}",
              file=sys.stderr)
    try:
        solutions = solve_three_term(group, args.hcap, **kwargs)
    except BudgetExceeded as exc:
        raise UsageError(str(exc) + " (pass --long or --budget)")
    rows = [{"x": s.x.to_term_text(), "y": s.y.to_term_text(),
             "z": s.z.to_term_text(),
             "heights": [height(s.x), height(s.y), height(s.z)]}
            for s in solutions]
    report = {
        "bounds": _bounds_block(group),
        "hcap": args.hcap,
        "count": len(rows),
        "solutions": rows,
    }
    tsv = [("x", "y", "z", "hx", "hy", "hz")]
    for r in rows:
        tsv.append((r["x"], r["y"], r["z"], *map(str, r["heights"])))
    return 0, report, tsv


def _decompose_batch(group, solutions):
    reports = []
    rows = []
    families = {}
    records = []
    for sol in solutions:
        if any(c.is_constant for c in sol):
            rows.append({"solution": _triple_text(sol),
                         "skipped": "constant coordinate"})
            continue
        report = decompose_solution(sol, group)
        reports.append(report)
        key = report.family.key()
        if key not in families:
            canonical = None
            if report.family.dimension == 2:
                canonical = verify_family(report.family, group)
            families[key] = len(families)
            records.append(_family_record(families[key], report.family,
                                          canonical))
        e, f = report.exponents
        rows.append({
            "solution": _triple_text(sol),
            "depth": report.depth,
            "case": report.case,
            "set_tag": report.set_tag,
            "family_id": families[key],
            "exponents": [e, f],
            "detail": report.detail,
        })
    return reports, rows, records


def _cmd_decompose(args):
    ctx = _context(args)
    group = _group(ctx, args)
    if args.x or args.y or args.z:
        if not (args.x and args.y and args.z):
            raise UsageError("--x, --y and --z must be given together")
        sol = Solution3(_rat(ctx, args.x), _rat(ctx, args.y),
                        _rat(ctx, args.z))
        solutions = [sol]
    elif args.hcap is not None:
        solutions = solve_three_term(group, args.hcap)
    else:
        raise UsageError("give either --x/--y/--z or --hcap")
    reports, rows, records = _decompose_batch(group, solutions)
    report = {
        "bounds": _bounds_block(group),
        "count": len(rows),
        "decompositions": rows,
        "families": records,
    }
    tsv = [("x", "y", "z", "depth", "case", "set_tag", "family_id")]
    for r in rows:
        if "skipped" in r:
            continue
        tsv.append((*r["solution"], str(r["depth"]), r["case"],
                    r["set_tag"], str(r["family_id"])))
    return 0, report, tsv


def _cmd_verify_family(args):
    ctx = _context(args)
    group = _group(ctx, args)

    def parse_triple(text):
        parts = text.split(";")
        if len(parts) != 3:
            raise UsageError("triples are semicolon-separated: 'a;b;c'")
        return tuple(_rat(ctx, part) for part in parts)

    u = parse_triple(args.u)
    v = parse_triple(args.v)
    step = args.step or 1
    try:
        family = FrobeniusFamily(2, u, v, step=step)
    except ValueError as exc:
        raise UsageError(f"not a valid family base point: {exc}")
    try:
        canonical = verify_family(family, group)
    except FamilyRejected as exc:
        return 0, {"verified": False, "reason": exc.reason,
                   "failing_f": exc.failing_f}, None
    return 0, {"verified": True,
               "family": _family_record(0, family, canonical)}, None


def _cmd_gap_check(args):
    ctx = _context(args)
    group = _group(ctx, args)
    if args.hcap is None:
        raise UsageError("--hcap is required")
    B = Fraction(args.B)
    solutions = solve_three_term(group, args.hcap)
    reports = window_reports(solutions, group.S, B,
                             max_points=args.point_cap)
    rows = []
    all_pass = True
    for rep in reports:
        all_pass &= rep.passed
        rows.append({
            "window": [str(rep.window_lo), str(rep.window_hi)],
            "points": rep.point_count,
            "cover": rep.cover_size,
            "bound": rep.bound,
            "pass": rep.passed,
            "note": rep.note,
        })
    report = {
        "bounds": _bounds_block(group),
        "B": str(B),
        "window_factor": str(1 + (4 * B - 3) / 2),
        "solutions": len(solutions),
        "windows": rows,
        "pass": all_pass,
    }
    return (0 if all_pass else CLAIM_FAILURE), report, None


def _cmd_counts(args):
    ctx = _context(args)
    group = _group(ctx, args)
    if args.hcap is None:
        raise UsageError("--hcap is required")
    solutions = solve_three_term(group, args.hcap)
    reports, rows, records = _decompose_batch(group, solutions)
    counts = count_bound_report(group, reports)
    report = {
        "bounds": _bounds_block(group),
        "hcap": args.hcap,
        "solutions": len(solutions),
        "families": records,
        "counts": {
            "bounded": counts.bounded_count,
            "two_dim_step_p": counts.step_p_count,
            "two_dim_step_q": counts.step_q_count,
        },
        "count_bounds": {
            "bounded": counts.bounded_bound,
            "bounded_per_case": counts.bounded_per_case_bound,
            "two_dim_step_p": counts.step_p_bound,
            "two_dim_step_q": counts.step_q_bound,
        },
        "pass": counts.passed,
    }
    return (0 if counts.passed else CLAIM_FAILURE), report, None


def _cmd_good(args):
    if args.N is None or args.x_bound is None or args.p is None:
        raise UsageError("--N, --x and --p are required")
    try:
        result = fermat.is_good(args.N, args.x_bound, args.p)
    except ValueError as exc:
        raise UsageError(str(exc))
    report = {
        "N": result.N, "x": result.x, "p": result.p,
        "good": result.good,
        "witness": list(result.witness) if result.witness else None,
        "gcd_N_p": result.gcd_N_p,
    }
    return 0, report, None


def _cmd_good_primes(args):
    if args.x_bound is None or args.p is None or args.limit is None:
        raise UsageError("--x, --p and --limit are required")
    try:
        primes = fermat.sufficient_good_primes(args.x_bound, args.p,
                                               args.limit)
    except ValueError as exc:
        raise UsageError(str(exc))
    return 0, {"x": args.x_bound, "p": args.p, "limit": args.limit,
               "primes": primes, "count": len(primes)}, None


def _cmd_curve(args):
    ctx = _context(args)
    if args.N is None or args.k is None:
        raise UsageError("--N and --k are required")
    x = _rat(ctx, args.x)
    try:
        curve = fermat.build_curve(args.p, args.N, args.k, x)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc))
    report = {
        "p": curve.p, "N": curve.N, "k": curve.k,
        "exponent": curve.exponent,
        "minus_one_root": curve.minus_one_root,
        "licensed_by": curve.licensed_by,
        "x": curve.x.to_term_text(),
        "y": curve.y.to_term_text(),
        "z": curve.z.to_term_text(),
        "identity": "exact",
        "y_over_z_in_Kp": True,
    }
    return 0, report, None


def _cmd_curve_xp(args):
    ctx = _context(args)
    if args.N is None or args.k is None:
        raise UsageError("--N and --k are required")
    z_input = _rat(ctx, args.z)
    try:
        triple = fermat.build_curve_xp(args.p, args.N, args.k, z_input)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc))
    report = {
        "p": args.p, "N": args.N, "k": args.k,
        "x": triple[0].to_term_text(),
        "y": triple[1].to_term_text(),
        "z": triple[2].to_term_text(),
        "first_coordinate_in_Kp": True,
    }
    return 0, report, None


def _cmd_line(args):
    if args.p is None:
        raise UsageError("--p is required")
    try:
        line = fermat.build_line(args.p, args.s_max)
    except ValueError as exc:
        raise UsageError(str(exc))
    if line is None:
        return 0, {"p": args.p, "found": False,
                   "note": "no admissible nonzero coefficient pair exists"}, None
    report = {
        "p": line.p, "found": True,
        "i": line.i, "alpha1": line.alpha1, "alpha2": line.alpha2,
        "lambda1": line.lambda1, "lambda2": line.lambda2,
        "line": [c.to_term_text() for c in line.line],
        "s_verified": line.s_verified,
    }
    return 0, report, None


def _cmd_probe(args):
    if args.N is None or args.hcap is None:
        raise UsageError("--N and --hcap are required")
    if args.p is None or not is_prime(args.p):
        raise UsageError("--p must be prime")
    try:
        probe = fermat.fermat_probe(args.p, args.N, args.hcap)
    except ValueError as exc:
        raise UsageError(str(exc))
    rows = [{
        "x": hit.x.to_term_text(), "y": hit.y.to_term_text(),
        "z": hit.z.to_term_text(),
        "heights": list(hit.heights),
        "flags": hit.flags,
        "violated": list(hit.violated),
        "counterexample": hit.counterexample,
    } for hit in probe.hits]
    failed = bool(probe.counterexamples)
    report = {
        "p": probe.p, "N": probe.N, "hcap": probe.height_cap,
        "gcd_N_p": probe.gcd_N_p, "good_480": probe.good_480,
        "hit_count": len(rows),
        "counterexamples": len(probe.counterexamples),
        "hits": rows,
    }
    tsv = [("x", "y", "z", "violated")]
    for r in rows:
        tsv.append((r["x"], r["y"], r["z"], ",".join(r["violated"])))
    return (CLAIM_FAILURE if failed else 0), report, tsv


_COMMANDS = {
    "height": _cmd_height,
    "valuation": _cmd_valuation,
    "dlog": _cmd_dlog,
    "solve2": _cmd_solve2,
    "solve3": _cmd_solve3,
    "decompose": _cmd_decompose,
    "verify-family": _cmd_verify_family,
    "gap-check": _cmd_gap_check,
    "counts": _cmd_counts,
    "good": _cmd_good,
    "good-primes": _cmd_good_primes,
    "curve": _cmd_curve,
    "curve-xp": _cmd_curve_xp,
    "line": _cmd_line,
    "probe": _cmd_probe,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sunitff",
        description="S-unit equations over F_q(t) and Fermat-surface tools")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--p", type=int, help="prime characteristic")
        sp.add_argument("--m", type=int, help="extension degree (default 1)")
        sp.add_argument("--max-degree", type=int,
                        help="polynomial degree cap (default 512)")
        sp.add_argument("--config", help="JSON config file; flags win")
        sp.add_argument("--out", help="write the JSON report to this path")
        sp.add_argument("--tsv", help="write the TSV mirror to this path")

    for name, help_text in (
            ("height", "height and support weight of a rational function"),
            ("valuation", "valuation of x at one place"),
            ("dlog", "logarithmic derivative with its height bound check"),
            ("solve2", "solve x + y = 1 in S-units"),
            ("solve3", "solve x + y + z = 1 in S-units"),
            ("decompose", "decompose solutions into Frobenius families"),
            ("verify-family", "certify a two-dimensional family"),
            ("gap-check", "line-cover check per height window"),
            ("counts", "family counts against the printed ceilings"),
            ("good", "goodness sieve for one modulus"),
            ("good-primes", "sufficient-condition prime scan"),
            ("curve", "explicit curve with y/z in K^p"),
            ("curve-xp", "explicit triple with x in K^p"),
            ("line", "line on all surfaces with N = p^s + 1"),
            ("probe", "bounded-height solution probe")):
        sp = sub.add_parser(name, help=help_text)
        common(sp)
        if name in ("height", "valuation", "dlog"):
            sp.add_argument("--x", help="rational function literal")
        if name == "valuation":
            sp.add_argument("--place", help="place literal ('inf' or poly)")
        if name in ("solve2", "solve3", "decompose", "verify-family",
                    "gap-check", "counts"):
            sp.add_argument("--S", help="comma-separated place literals")
        if name == "solve2":
            sp.add_argument("--all", action="store_true",
                            help="include non-primitive solutions")
            sp.add_argument("--height-cap", type=int)
        if name in ("solve3", "decompose", "gap-check", "counts", "probe"):
            sp.add_argument("--hcap", type=int, help="height cap")
        if name == "solve3":
            sp.add_argument("--budget", type=int,
                            help="pair budget override")
            sp.add_argument("--long", action="store_true",
                            help="lift the pair budget for long sweeps")
        if name == "decompose":
            sp.add_argument("--x")
            sp.add_argument("--y")
            sp.add_argument("--z")
        if name == "verify-family":
            sp.add_argument("--u", help="semicolon-separated triple")
            sp.add_argument("--v", help="semicolon-separated triple")
            sp.add_argument("--step", type=int, help="step exponent a")
        if name == "gap-check":
            sp.add_argument("--B", default="7/8",
                            help="window parameter in (3/4, 1)")
            sp.add_argument("--point-cap", type=int, default=40)
        if name in ("good", "good-primes"):
            sp.add_argument("--x", dest="x_bound", type=int,
                            help="coefficient bound x")
        if name == "good":
            sp.add_argument("--N", type=int)
        if name == "good-primes":
            sp.add_argument("--limit", type=int)
        if name in ("curve", "curve-xp", "probe"):
            sp.add_argument("--N", type=int)
        if name in ("curve", "curve-xp"):
            sp.add_argument("--k", type=int)
        if name == "curve":
            sp.add_argument("--x", default="t")
        if name == "curve-xp":
            sp.add_argument("--z", default="t")
        if name == "line":
            sp.add_argument("--s-max", type=int, default=2)
    return parser


def _apply_config(args):
    if not getattr(args, "config", None):
        return
    with open(args.config) as fh:
        config = json.load(fh)
    for key, value in config.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise UsageError(f"unknown config key {key!r}")
        if getattr(args, attr) in (None, False):
            setattr(args, attr, value)


def _write_report(args, report, tsv_rows):
    report = {
        "format_version": REPORT_VERSION,
        "command": args.command,
        "config": {
            "p": getattr(args, "p", None),
            "m": getattr(args, "m", None) or 1,
            "S": getattr(args, "S", None),
            "threads": os.environ.get("SUNITFF_THREADS"),
        },
        **report,
        "generated_at": datetime.now(timezone.utc).isoformat(),
    }
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if tsv_rows and args.tsv:
        with open(args.tsv, "w") as fh:
            fh.write(TSV_HEADER + "\n")
            for row in tsv_rows:
                fh.write("\t".join(row) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        code, report, tsv_rows = _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    _write_report(args, report, tsv_rows)
    return code


if __name__ == "__main__":
    sys.exit(main())
