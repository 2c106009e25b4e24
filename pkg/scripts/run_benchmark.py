#!/usr/bin/env python3
"""Run the full benchmark sweep and print the per-bucket summary.

Equivalent to:
    rsfalearn bench --trials 500 --out bench.csv
    rsfalearn report bench.csv --out summary.csv
"""

import sys

from rsfalearn.cli import main

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "bench.csv"
    trials = sys.argv[2] if len(sys.argv) > 2 else "500"
    code = main(["bench", "--trials", trials, "--out", out])
    if code == 0:
        code = main(["report", out, "--out", out.replace(".csv", "_summary.csv")])
    sys.exit(code)
