"""Command-line interface.

Exit codes: 0 success / all checks pass, 1 a bound was violated,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Sequence

from . import bounds as B
from .distributions import load
from .errors import PreconditionError, UniboundError, UnsupportedRegimeError
from .verify import TrialConfig, audit, compare, run_suite

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

SHAPES = ("non-increasing", "non-decreasing", "unimodal", "discrete-window", "lattice")


class UsageError(Exception):
    pass


def _fmt(x: Any) -> str:
    return f"{float(x):.6g}"


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"--shape {args.shape} requires {', '.join(missing)}")


# --------------------------------------------------------------------------
# bound
# --------------------------------------------------------------------------

def _collect_bounds(args: argparse.Namespace) -> tuple[list[B.BoundResult], list[str]]:
    out: list[B.BoundResult] = []
    skipped: list[str] = []

    def attempt(fn, *a):
        try:
            out.append(fn(*a))
        except UnsupportedRegimeError as exc:
            skipped.append(str(exc))

    shape, r = args.shape, args.r
    if shape in ("non-increasing", "non-decreasing"):
        _require(args, "a", "b", "mean")
        a, b, mean = args.a, args.b, args.mean
        out.append(B.variance_lb_monotone(a, b, mean, shape))
        order = r if r is not None else 2
        if shape == "non-increasing":
            attempt(_raw_monotone_with_witness, a, mean, order)
        else:
            attempt(B.raw_moment_lb_unimodal, b, mean, order)
        if order % 2 == 0 or a >= 0:
            out.append(_tangent(mean, order))
        out.append(B.variance_ub_jacobson(a, b))
    elif shape == "unimodal":
        _require(args, "mean", "mode")
        mean, mode = args.mean, args.mode
        order = r if r is not None else 1
        if args.a is not None and args.b is not None:
            if not args.a <= mode <= args.b:
                raise PreconditionError(f"mode {mode} outside [{args.a}, {args.b}]")
            lo, hi = (args.a + mode) / 2, (args.b + mode) / 2
            if not lo <= mean <= hi:
                raise PreconditionError(
                    f"mean {mean} outside [(a+M)/2, (b+M)/2] = [{lo}, {hi}]")
        out.append(B.variance_lb_unimodal(mean, mode))
        out.append(B.central_even_lb_unimodal(mean, mode, order))
        attempt(B.raw_moment_lb_unimodal, mode, mean, order)
        if args.a is not None and args.b is not None:
            out.append(B.variance_ub_jacobson(args.a, args.b))
    elif shape == "discrete-window":
        _require(args, "xlo", "xhi", "mean")
        out.append(B.discrete_central_lb(args.xlo, args.xhi, args.mean,
                                         r if r is not None else 1))
    elif shape == "lattice":
        _require(args, "mean", "mode")
        if not float(args.mode).is_integer():
            skipped.append(f"warning: mode {args.mode} is not an integer; "
                           "the lattice bound assumes integer support")
        out.append(B.lattice_variance_lb(args.mean, args.mode))

    if args.which:
        wanted = B.Source.from_tag(args.which)
        out = [b for b in out if b.source is wanted]
    return out, skipped


def _tangent(mean: float, r: int) -> B.BoundResult:
    return B.BoundResult(B.tangent_raw_lb(mean, mean, r), B.BoundKind.LOWER,
                         B.Source.TANGENT_RAW, "raw", r)


def _raw_monotone_with_witness(a: float, mean: float, r: int) -> B.BoundResult:
    res = B.raw_moment_lb_monotone(a, mean, r)
    if r >= 2 and mean > a:
        res = B.BoundResult(res.value, res.kind, res.source, res.moment, res.order,
                            B.raw_moment_witness(a, mean, r))
    return res


def cmd_bound(args: argparse.Namespace) -> int:
    results, notes = _collect_bounds(args)
    for note in notes:
        print(note, file=sys.stderr)
    if args.json:
        print(_dump([b.to_json() for b in results]))
        return EXIT_OK
    for b in results:
        rel = ">=" if b.kind is B.BoundKind.LOWER else "<="
        line = f"{b.moment:>8} order {b.order}  {rel} {_fmt(b.value):>12}   [{b.source.tag}] {b.source.label}"
        if b.witness is not None:
            line += f"  (witness alpha={_fmt(b.witness.alpha)}, beta={_fmt(b.witness.beta)})"
        print(line)
    return EXIT_OK


# --------------------------------------------------------------------------
# audit / verify / compare
# --------------------------------------------------------------------------

def _config(args: argparse.Namespace, **extra) -> TrialConfig:
    fields = {k: getattr(args, k) for k in ("max_points", "max_pieces", "r_max")
              if getattr(args, k, None) is not None}
    return TrialConfig(**fields, **extra)


def cmd_audit(args: argparse.Namespace) -> int:
    report = audit(load(args.input), _config(args))
    if args.json:
        print(_dump(report.to_json()))
    else:
        s = report.shape
        print(f"distribution {report.dist_id}: {s.shape.value}"
              + (f", modes [{_fmt(s.mode_lo)}, {_fmt(s.mode_hi)}]" if s.is_unimodal else ""))
        print(f"mean {_fmt(report.mean)}  variance {_fmt(report.variance)}")
        for c in report.checks:
            if c.status == "n/a":
                print(f"  n/a   {c.source.tag:<28} order {c.order}: {c.note}")
                continue
            rel = ">=" if c.kind is B.BoundKind.LOWER else "<="
            mode = "" if c.mode is None else f"  (M={_fmt(c.mode)})"
            print(f"  {c.status:<5} {c.source.tag:<28} order {c.order}: "
                  f"{_fmt(c.actual)} {rel} {_fmt(c.bound)}  margin {_fmt(c.margin)}{mode}")
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _config(args, master_seed=args.seed, n_trials=args.trials)
    summary = run_suite(cfg)
    if args.json:
        print(_dump(summary))
    else:
        print(f"seed {cfg.master_seed}, {cfg.n_trials} pmfs + {cfg.n_trials} densities")
        for fam in ("discrete", "density"):
            print(f"{fam}: {summary[fam]['violations']} violations")
            for tag, c in summary[fam]["checks"].items():
                mm = "" if c["min_margin"] is None else f", min margin {_fmt(c['min_margin'])}"
                print(f"  {tag:<28} {c['passed']}/{c['checked']} pass, "
                      f"{c['not_applicable']} n/a{mm}")
        for part, key in (("tightness", "max_rel_gap"), ("factorization", "max_residual"),
                          ("consistency", "max_rel_error")):
            p = summary[part]
            print(f"{part}: {p['violations']} violations, {key} {_fmt(p[key])}")
        print(f"total violations: {summary['violations']}")
    counter = summary["minimal_counterexample"]
    if counter is not None:
        text = json.dumps(counter, sort_keys=True)
        print(f"counterexample: {text}", file=sys.stderr)
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            path = os.path.join(args.out, f"counterexample-seed{cfg.master_seed}.json")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
            print(f"written to {path}", file=sys.stderr)
    return EXIT_OK if summary["violations"] == 0 else EXIT_VIOLATION


def cmd_compare(args: argparse.Namespace) -> int:
    cfg = _config(args, master_seed=args.seed, n_trials=args.trials)
    summary = compare(cfg)
    if args.json:
        print(_dump(summary))
        return EXIT_OK
    print(f"{summary['trials']} lattice unimodal pmfs (seed {cfg.master_seed})")
    print(f"window bound > lattice bound: {summary['wins']}  "
          f"ties: {summary['ties']}  lattice better: {summary['losses']}  "
          f"win fraction {_fmt(summary['win_fraction'])}")
    if summary["mean_ratio"] is not None:
        print(f"mean ratio window/lattice {_fmt(summary['mean_ratio'])} "
              f"(range {_fmt(summary['min_ratio']['ratio'])} .. "
              f"{_fmt(summary['max_ratio']['ratio'])})")
    for name, case in summary["builtin"].items():
        ratio = case.get("ratio_exact") or (_fmt(case["ratio"]) if "ratio" in case else "-")
        print(f"  {name}: window {_fmt(case['window_bound'])}, lattice "
              f"{_fmt(case['lattice_bound'])}, {case['verdict']}, ratio {ratio}")
    return EXIT_OK


# --------------------------------------------------------------------------

def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unibound",
        description="Moment bounds for monotone, unimodal and discrete distributions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("bound", help="evaluate bounds from parameters")
    p.add_argument("--shape", required=True, choices=SHAPES)
    for name in ("a", "b", "mode", "mean", "xlo", "xhi"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--r", type=int, help="moment order (half order for even central bounds)")
    p.add_argument("--which", metavar="TAG", help="only print the bound with this tag")
    common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("audit", help="check every bound on a distribution JSON file")
    p.add_argument("input")
    p.add_argument("--r-max", type=int)
    common(p)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("verify", help="run the randomized soundness suite")
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--trials", type=_nonneg_int, default=1000)
    p.add_argument("--max-points", type=int)
    p.add_argument("--max-pieces", type=int)
    p.add_argument("--r-max", type=int)
    p.add_argument("--out", metavar="DIR", help="directory for counterexample JSON")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compare", help="compare the window and lattice variance bounds")
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--trials", type=_nonneg_int, default=10000)
    p.add_argument("--max-points", type=int)
    common(p)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UniboundError, UsageError) as exc:
        print(f"unibound {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
