"""Size sweeps: alpha_min of random d-regular graphs and of lollipops.

    python3 scripts/run_sweep.py --runs 20 --out results/
"""

import argparse
from pathlib import Path

from lewis_ermp.cli import dumps_csv
from lewis_ermp.experiments import parse_range, sweep

ap = argparse.ArgumentParser()
ap.add_argument("--runs", type=int, default=20)
ap.add_argument("--eps", type=float, default=0.01)
ap.add_argument("--regular-n", default="50..400")
ap.add_argument("--lollipop-n", default="50..800")
ap.add_argument("--out", default="")
args = ap.parse_args()

reg = sweep("regular", parse_range(args.regular_n), [3, 4, 5, 6], runs=args.runs, eps=args.eps)
lol = sweep("lollipop", parse_range(args.lollipop_n), eps=args.eps)

print("d-regular, max alpha_min over seeds")
for r in reg:
    print(f"  d={r['d']} n={r['n']:<4} {r['alpha_min']:.4f}")
print("lollipop (clique and path of n/2 each)")
for r in lol:
    print(f"  n={r['n']:<4} {r['alpha_min']:.4f}")

if args.out:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "sweep_regular.csv").write_text(dumps_csv(reg))
    (out / "sweep_lollipop.csv").write_text(dumps_csv(lol))
