"""Command-line entry point.

Subcommands: simulate, sweep, scan, oracle, sets, verify, report.  Every
subcommand takes --seed and is bit-reproducible; --workers (default from
MAJLAB_WORKERS) bounds parallelism, with 1 forcing sequential execution.
Exit codes: 0 success, 1 runtime failure, 2 bad arguments, 3 when verify
finds an asserted inequality violated.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .appendix_a import default_grid, small_grid, verify_appendix_a
from .dynamics import UpdateRule, default_cap, run
from .graphs import (ColoredGraph, FixedGap, GraphParams, RandomBiased,
                     RandomHalf, sample_gnp)
from .harness import ExperimentConfig, run_sweep, threshold_scan
from .oracle import (ExpectedCount, FourierCoeff, MomentZ, OracleQuery,
                     SetStat, VarCount, WinProb, oracle_eval)
from .stats import lemma_report
from .structure import compute_r_hat, compute_s_sets, day2_identity_sides


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _parse_prob(text: str) -> Fraction:
    """Probabilities given as 'a/b' or decimal strings parse exactly."""
    return Fraction(text)


def _rule(name: str) -> UpdateRule:
    return UpdateRule(name)


def _scheme_from_args(args) -> object:
    if args.scheme == "fixed-gap":
        if args.delta is None:
            raise ValueError("--delta is required with the fixed-gap scheme")
        return FixedGap.from_delta(args.delta)
    if args.scheme == "random-half":
        return RandomHalf()
    return RandomBiased(args.q1)


def _add_common(sp, *, seed=True, workers=False, fmt=False):
    sp.add_argument("--config", type=str, default=None,
                    help="JSON file of flag defaults; explicit flags win")
    if seed:
        sp.add_argument("--seed", type=int, default=0)
    if workers:
        sp.add_argument("--workers", type=int,
                        default=int(os.environ.get("MAJLAB_WORKERS", "1")))
    if fmt:
        sp.add_argument("--format", choices=("json", "csv"), default="json")


def _apply_config_file(parser, argv):
    """Pre-parse --config and install its entries as subcommand defaults.

    Keys are flag names without the leading dashes; explicitly given flags
    still win because they are parsed after the defaults are replaced.
    """
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config", type=str, default=None)
    known, rest = probe.parse_known_args(argv)
    if not known.config:
        return
    command = next((tok for tok in rest if not tok.startswith("-")), None)
    sub = parser._majlab_subparsers.get(command)
    if sub is None:
        raise ValueError(f"--config given but no subcommand recognized")
    dest_of = {}
    for action in sub._actions:
        for opt in action.option_strings:
            dest_of[opt.lstrip("-")] = action.dest
    with open(known.config) as fh:
        defaults = json.load(fh)
    unknown = [k for k in defaults if k not in dest_of]
    if unknown:
        raise ValueError(f"unknown config keys for '{command}': {unknown}")
    sub.set_defaults(**{dest_of[k]: v for k, v in defaults.items()})


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(","))


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="majlab",
        description="Majority dynamics on G(n,p): simulation, exact small-n "
                    "oracle, structural sets, and verification reports.")
    ap.add_argument("--version", action="version", version=f"majlab {__version__}")
    subactions = ap.add_subparsers(dest="command", required=True)
    ap._majlab_subparsers = {}

    class _Sub:
        def add_parser(self, name, **kw):
            sp = subactions.add_parser(name, **kw)
            ap._majlab_subparsers[name] = sp
            return sp

    sub = _Sub()

    sp = sub.add_parser("simulate", help="run one trajectory, write its trace")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--delta", type=float, default=None)
    sp.add_argument("--scheme", choices=("fixed-gap", "random-half", "random-biased"),
                    default="fixed-gap")
    sp.add_argument("--q1", type=float, default=0.5)
    sp.add_argument("--rule", choices=("standard", "biased"), default="standard")
    sp.add_argument("--cap", type=int, default=None)
    sp.add_argument("--trace", type=str, default=None, help="trace output path")
    _add_common(sp, fmt=True)
    sp.set_defaults(func=_cmd_simulate)

    sp = sub.add_parser("sweep", help="Monte Carlo sweep over (n, p, gap) cells")
    sp.add_argument("--n", type=_ints, default=(100,), dest="n_values")
    sp.add_argument("--p", type=_floats, default=(0.1,), dest="p_values")
    sp.add_argument("--delta", type=_floats, default=None, dest="delta_values")
    sp.add_argument("--scheme", choices=("random-half", "random-biased"),
                    default=None)
    sp.add_argument("--q1", type=float, default=0.5)
    sp.add_argument("--rule", choices=("standard", "biased"), default="standard")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--cap", type=int, default=None)
    sp.add_argument("--results", type=str, default=None,
                    help="results.jsonl path (appended; enables resume)")
    sp.add_argument("--summary", type=str, default=None, help="summary.csv path")
    _add_common(sp, workers=True, fmt=True)
    sp.set_defaults(func=_cmd_sweep)

    sp = sub.add_parser("scan", help="bisect for the smallest winning gap")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--rule", choices=("standard", "biased"), default="standard")
    sp.add_argument("--trials", type=int, default=400)
    sp.add_argument("--target", type=float, default=0.9)
    _add_common(sp, workers=True)
    sp.set_defaults(func=_cmd_scan)

    sp = sub.add_parser("oracle", help="exact small-n statistics by enumeration")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--colors", type=str, required=True,
                    help="per-vertex colors, e.g. 112")
    sp.add_argument("--p", type=str, required=True,
                    help="probability; fractions like 1/3 stay exact")
    sp.add_argument("--stat", required=True,
                    choices=("winprob", "expcount", "varcount", "momentz",
                             "setstat", "fourier"))
    sp.add_argument("--color", type=int, default=1)
    sp.add_argument("--day", type=int, default=1)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--which", default="s_star",
                    choices=("s1", "s2", "s_star", "i_g", "r_hat"))
    sp.add_argument("--moment", type=int, default=1)
    sp.add_argument("--u", type=int, default=None)
    sp.add_argument("--v", type=int, default=None)
    sp.add_argument("--w", type=int, default=None)
    sp.add_argument("--edges", type=str, default="",
                    help="edge set for fourier, e.g. 0-1,0-2")
    sp.add_argument("--rule", choices=("standard", "biased"), default="standard")
    sp.add_argument("--cap", type=int, default=None)
    sp.add_argument("--float", action="store_true", dest="as_float",
                    help="force float evaluation")
    _add_common(sp, seed=False)
    sp.set_defaults(func=_cmd_oracle)

    sp = sub.add_parser("sets", help="structural sets of a colored graph")
    sp.add_argument("--graph", type=str, default=None,
                    help="graph JSON path; otherwise a graph is sampled")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--p", type=float, default=None)
    sp.add_argument("--delta", type=float, default=None)
    sp.add_argument("--u", type=int, default=None)
    sp.add_argument("--v", type=int, default=None)
    sp.add_argument("--w", type=int, default=None)
    _add_common(sp)
    sp.set_defaults(func=_cmd_sets)

    sp = sub.add_parser("verify", help="run an inequality verification suite")
    sp.add_argument("target", choices=("appendix-a",))
    sp.add_argument("--grid", choices=("default", "small"), default="default")
    sp.add_argument("--out", type=str, default=None)
    _add_common(sp)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("report", help="quantitative-bound report")
    sp.add_argument("target", choices=("lemmas",))
    sp.add_argument("--n", type=int, default=200)
    sp.add_argument("--p", type=float, default=0.2)
    sp.add_argument("--delta", type=float, default=5)
    sp.add_argument("--trials", type=int, default=400)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--d-const", type=float, default=1.0,
                    help="deviation scale of the day-1 tail record")
    sp.add_argument("--dd-const", type=float, default=1.0,
                    help="slack scale of the day-1 tail record")
    sp.add_argument("--out", type=str, default=None)
    _add_common(sp, fmt=True)
    sp.set_defaults(func=_cmd_report)
    return ap


def _cmd_simulate(args) -> int:
    scheme = _scheme_from_args(args)
    g = sample_gnp(GraphParams(args.n, args.p, args.seed), scheme)
    cap = args.cap if args.cap is not None else default_cap(args.n, args.p)
    trace = run(g, _rule(args.rule), cap)
    if args.trace:
        with open(args.trace, "w") as fh:
            if args.format == "csv":
                trace.write_csv(fh)
            else:
                json.dump({"counts": [[d, c, trace.n - c] for d, c in trace.counts],
                           "termination": trace.termination_record()}, fh,
                          sort_keys=True)
                fh.write("\n")
    print(json.dumps(trace.termination_record(), sort_keys=True))
    return 0


def _cmd_sweep(args) -> int:
    scheme = None
    if args.scheme == "random-half":
        scheme = RandomHalf()
    elif args.scheme == "random-biased":
        scheme = RandomBiased(args.q1)
    cfg = ExperimentConfig(
        n_values=tuple(args.n_values), p_values=tuple(args.p_values),
        delta_values=None if scheme else tuple(args.delta_values or ()) or None,
        scheme=scheme, rule=_rule(args.rule), trials=args.trials,
        master_seed=args.seed, cap=args.cap, workers=args.workers,
        results_path=args.results, summary_path=args.summary)
    result = run_sweep(cfg)
    if args.format == "csv":
        print("cell_id,n,p,delta,trials,win1,win2,cycles,cap_hits,p_hat,"
              "wilson_lo,wilson_hi,mean_days")
        for c in result.cells:
            print(",".join(str(x) if x is not None else "" for x in (
                c.cell_id, c.n, c.p, c.delta, c.trials, c.wins1, c.wins2,
                c.cycles, c.cap_hits, c.p_hat, c.wilson_lo, c.wilson_hi,
                c.mean_days)))
    else:
        for cell in result.cells:
            print(json.dumps(cell.to_record(), sort_keys=True))
    return 0


def _cmd_scan(args) -> int:
    res = threshold_scan(args.n, args.p, _rule(args.rule), args.trials,
                         args.target, master_seed=args.seed,
                         workers=args.workers)
    print(json.dumps({
        "delta_lo": res.delta_lo, "delta_hi": res.delta_hi,
        "target": res.target_prob, "widened": res.widened,
        "evaluations": {str(k): v for k, v in res.evaluations.items()},
    }, sort_keys=True))
    return 0


def _parse_edges(text: str) -> tuple[tuple[int, int], ...]:
    if not text:
        return ()
    out = []
    for part in text.split(","):
        a, b = part.split("-")
        out.append((int(a), int(b)))
    return tuple(out)


def _cmd_oracle(args) -> int:
    colors = tuple(int(c) for c in args.colors)
    p = float(_parse_prob(args.p)) if args.as_float else _parse_prob(args.p)
    rule = _rule(args.rule)
    if args.stat == "winprob":
        stat = WinProb(color=args.color, rule=rule, cap=args.cap)
    elif args.stat == "expcount":
        stat = ExpectedCount(day=args.day, color=args.color, rule=rule)
    elif args.stat == "varcount":
        stat = VarCount(day=args.day, color=args.color, rule=rule)
    elif args.stat == "momentz":
        stat = MomentZ(k=args.k)
    elif args.stat == "setstat":
        stat = SetStat(which=args.which, moment=args.moment,
                       u=args.u, v=args.v, w=args.w)
    else:
        stat = FourierCoeff(v=args.v if args.v is not None else 0,
                            s=_parse_edges(args.edges))
    res = oracle_eval(OracleQuery(args.n, p, colors, stat))
    if isinstance(res.value, Fraction):
        print(f"{res.value.numerator}/{res.value.denominator}")
        print(f"# = {_fmt(float(res.value))}")
    else:
        print(_fmt(float(res.value)))
    return 0


def _cmd_sets(args) -> int:
    if args.graph:
        g = ColoredGraph.from_json(Path(args.graph).read_text())
    else:
        if args.n is None or args.p is None or args.delta is None:
            raise ValueError("need --graph or all of --n/--p/--delta")
        g = sample_gnp(GraphParams(args.n, args.p, args.seed),
                       FixedGap.from_delta(args.delta))
    ones = [i for i, c in enumerate(g.colors) if c == 1]
    u = args.u if args.u is not None else ones[0]
    v = args.v if args.v is not None else ones[1]
    rep = compute_s_sets(g, u, v)
    if args.w is not None:
        rep.w = args.w
        rep.r_hat = tuple(compute_r_hat(g, args.w).tolist())
    out = json.loads(rep.to_json())
    if not g.is_edge(u, v):
        lhs, rhs = day2_identity_sides(g, u, v)
        out["day2_identity"] = {"lhs": lhs, "rhs": rhs, "holds": lhs == rhs}
    print(json.dumps(out, sort_keys=True))
    return 0


def _cmd_verify(args) -> int:
    grid = default_grid(args.seed) if args.grid == "default" else small_grid(args.seed)
    report = verify_appendix_a(grid)
    summary = report.summary()
    if args.out:
        Path(args.out).write_text(report.to_json())
    print(json.dumps(summary, sort_keys=True))
    if not report.all_pass:
        print("verification FAILED", file=sys.stderr)
        return 3
    return 0


def _cmd_report(args) -> int:
    rep = lemma_report(args.n, args.p, args.delta, args.trials,
                       master_seed=args.seed, k=args.k,
                       d_const=args.d_const, dd_const=args.dd_const)
    payload = rep.to_json_dict()
    if args.out:
        Path(args.out).write_text(json.dumps(payload, sort_keys=True))
    if args.format == "csv":
        print("lemma_id,lhs,rhs,direction,mode,hypotheses_met,asserted,satisfied")
        for rec in rep.records:
            d = rec.to_dict()
            print(",".join("" if d[k] is None else str(d[k]) for k in (
                "lemma_id", "lhs", "rhs", "direction", "mode",
                "hypotheses_met", "asserted", "satisfied")))
    else:
        for rec in rep.records:
            line = {k: rec.to_dict()[k] for k in
                    ("lemma_id", "lhs", "rhs", "hypotheses_met", "asserted",
                     "satisfied")}
            print(json.dumps(line, sort_keys=True))
    return 0


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        _apply_config_file(parser, argv)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
