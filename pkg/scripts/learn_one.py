#!/usr/bin/env python3
"""Generate one random target, learn it with both learners, and print the
query counts side by side.  Usage: learn_one.py [seed]"""

import sys

from rsfalearn.automata import diff_witness
from rsfalearn.cli import run_trial
from rsfalearn.gen import GenParams, random_sfa

if __name__ == "__main__":
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
    target = random_sfa(GenParams(seed=seed))
    for kind in ["rsfa", "matstar"]:
        rec, outcome = run_trial(target, kind, seed=seed)
        if rec["skipped"]:
            print(f"{kind}: skipped (determinization cap)")
            continue
        ok = diff_witness(outcome.sfa, target) is None
        print(
            f"{kind:8s} states={rec['final_states']:<4d} eqs={rec['eqs']:<6d} "
            f"mqs_distinct={rec['mqs_distinct']:<8d} wall_ms={rec['wall_ms']:<10} "
            f"language_equal={ok}"
        )
