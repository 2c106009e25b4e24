"""Command-line entry points: learn one target, run a benchmark sweep,
and summarize sweep results.

Exit codes: 0 success, 2 parse/config error, 3 learner guard tripped.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import statistics
import sys
import time
from typing import List, Optional

from .algebra import Domain, IntervalAlgebra
from .automata import CapExceeded, Sfa, residual_profile, sfa_from_json, sfa_to_json
from .gen import GenParams, random_sfa
from .learner import GuardExceeded, RsfaLearner
from .matstar import DsfaLearner
from .table import StallError
from .teacher import Teacher

CSV_COLUMNS = [
    "trial", "seed", "residual_count", "prime_residual_count", "learner",
    "eqs", "mqs_raw", "mqs_distinct", "final_states", "table_u", "table_v",
    "wall_ms", "skipped",
]

LEARNERS = {"rsfa": RsfaLearner, "matstar": DsfaLearner}


def run_trial(target: Sfa, learner_kind: str, trial: int = 0, seed: int = 0,
              cap: int = 4096):
    """One learning run; returns (record dict, RunOutcome or None)."""
    rec = dict.fromkeys(CSV_COLUMNS, "")
    rec.update(trial=trial, seed=seed, learner=learner_kind, skipped=0)
    try:
        prof = residual_profile(target, cap)
    except CapExceeded:
        rec["skipped"] = 1
        return rec, None
    rec["residual_count"] = prof.dsfa.n_states
    rec["prime_residual_count"] = len(prof.primes)
    teacher = Teacher(target, cap)
    learner = LEARNERS[learner_kind](teacher, target.algebra)
    t0 = time.perf_counter()
    outcome = learner.learn()
    rec["wall_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    stats = outcome.stats
    rec.update(
        eqs=stats.eqs,
        mqs_raw=stats.mqs_raw,
        mqs_distinct=stats.mqs_distinct,
        final_states=outcome.sfa.n_states,
        table_u=outcome.table_u,
        table_v=outcome.table_v,
    )
    return rec, outcome


def cmd_learn(args) -> int:
    try:
        with open(args.target) as fh:
            target = sfa_from_json(json.load(fh))
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: cannot load target: {exc}", file=sys.stderr)
        return 2
    try:
        rec, outcome = run_trial(target, args.learner, seed=args.seed)
    except (GuardExceeded, StallError) as exc:
        print(f"error: learner guard tripped: {exc}", file=sys.stderr)
        return 3
    if rec["skipped"]:
        print("error: determinization cap exceeded on target", file=sys.stderr)
        return 3
    print(json.dumps({"record": rec, "automaton": sfa_to_json(outcome.sfa)}, indent=2))
    return 0


def bench_rows(params: GenParams, trials: int, learners: List[str], cap: int = 4096) -> List[dict]:
    rows = []
    for trial in range(trials):
        seed = params.seed + trial
        target = random_sfa(GenParams(
            n_q=params.n_q, n_delta=params.n_delta, p_i=params.p_i,
            p_f=params.p_f, domain=params.domain, seed=seed,
        ))
        for kind in learners:
            rec, _ = run_trial(target, kind, trial=trial, seed=seed, cap=cap)
            rows.append(rec)
    return rows


def write_csv(rows: List[dict], path: str):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


def cmd_bench(args) -> int:
    learners = [s.strip() for s in args.learner.split(",") if s.strip()]
    for kind in learners:
        if kind not in LEARNERS:
            print(f"error: unknown learner {kind!r}", file=sys.stderr)
            return 2
    try:
        params = GenParams(
            n_q=args.nq, n_delta=args.ndelta, p_i=args.pi, p_f=args.pf,
            domain=Domain(args.domain_min, args.domain_max), seed=args.seed,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        rows = bench_rows(params, args.trials, learners)
    except (GuardExceeded, StallError) as exc:
        print(f"error: learner guard tripped: {exc}", file=sys.stderr)
        return 3
    write_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def summarize(rows: List[dict], count_mode: str = "distinct") -> List[dict]:
    """Mean EQ/MQ/|U|/|V| per (learner, residual_count) with 95% normal
    half-widths (1.96 * s / sqrt(n)); empty where n < 2."""
    mq_col = "mqs_distinct" if count_mode == "distinct" else "mqs_raw"
    groups = {}
    for r in rows:
        if str(r["skipped"]) == "1":
            continue
        key = (r["learner"], int(r["residual_count"]))
        groups.setdefault(key, []).append(r)
    out = []
    for (learner, n_res) in sorted(groups):
        rs = groups[(learner, n_res)]
        entry = {"learner": learner, "residual_count": n_res, "samples": len(rs)}
        for label, col in [("eq", "eqs"), ("mq", mq_col),
                           ("table_u", "table_u"), ("table_v", "table_v")]:
            vals = [float(r[col]) for r in rs]
            entry[f"mean_{label}"] = statistics.fmean(vals)
            if len(vals) >= 2:
                hw = 1.96 * statistics.stdev(vals) / math.sqrt(len(vals))
                entry[f"ci95_{label}"] = hw
            else:
                entry[f"ci95_{label}"] = ""
        out.append(entry)
    return out


def cmd_report(args) -> int:
    try:
        with open(args.csv) as fh:
            rows = list(csv.DictReader(fh))
    except (OSError, csv.Error) as exc:
        print(f"error: cannot read CSV: {exc}", file=sys.stderr)
        return 2
    if not rows or any(c not in rows[0] for c in CSV_COLUMNS):
        print("error: malformed benchmark CSV", file=sys.stderr)
        return 2
    summary = summarize(rows, args.count_mode)
    cols = list(summary[0].keys()) if summary else []
    print("\t".join(cols))
    for entry in summary:
        print("\t".join(
            f"{v:.3f}" if isinstance(v, float) else str(v) for v in entry.values()
        ))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=cols)
            writer.writeheader()
            writer.writerows(summary)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsfalearn")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="learn one JSON-encoded target SFA")
    p.add_argument("target")
    p.add_argument("--learner", choices=sorted(LEARNERS), default="rsfa")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("bench", help="run a benchmark sweep over random targets")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--nq", type=int, default=8)
    p.add_argument("--ndelta", type=int, default=2)
    p.add_argument("--pi", type=float, default=0.5)
    p.add_argument("--pf", type=float, default=0.5)
    p.add_argument("--domain-min", type=int, default=-(2 ** 31))
    p.add_argument("--domain-max", type=int, default=2 ** 31 - 1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--learner", default="rsfa,matstar")
    p.add_argument("--count-mode", choices=["distinct", "raw"], default="distinct")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="summarize a benchmark CSV")
    p.add_argument("csv")
    p.add_argument("--count-mode", choices=["distinct", "raw"], default="distinct")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
