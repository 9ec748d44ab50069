"""Reproduce the benchmark table: max alpha_min over seeds for each family.

    python3 scripts/run_table1.py --runs 100 --out results/table1.csv
"""

import argparse
import sys
import time

from lewis_ermp.cli import dumps_csv, dumps_json
from lewis_ermp.experiments import table1

ap = argparse.ArgumentParser()
ap.add_argument("--runs", type=int, default=100)
ap.add_argument("--eps", type=float, default=0.01)
ap.add_argument("--workers", type=int, default=1)
ap.add_argument("--only", default="")
ap.add_argument("--out", default="")
args = ap.parse_args()

t0 = time.time()
rows = table1(
    runs=args.runs,
    eps=args.eps,
    workers=args.workers,
    only=[s for s in args.only.split(",") if s] or None,
)
for r in rows:
    flag = "ok " if r["within_tolerance"] else "OFF"
    print(
        f"{flag} {r['label']:<22} n={r['n']:<5} m={r['m']:<6} alpha_min={r['alpha_min']:.4f} "
        f"(mean {r['alpha_min_mean']:.4f}) target {r['target']} +- {r['tolerance']} "
        f"converged {r['converged_runs']}/{r['runs']}",
        file=sys.stderr,
    )
print(f"{time.time() - t0:.0f}s", file=sys.stderr)
if args.out:
    with open(args.out, "w") as f:
        f.write(dumps_csv(rows) if args.out.endswith(".csv") else dumps_json(rows))
