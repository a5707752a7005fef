"""How the reduction behaves as the wind strengthens.

For each wind speed the benchmark distribution is sampled with that speed
fixed; the reduced-regime share, numeric solves and word mix are written
as CSV.

    python scripts/wind_sweep.py --n 2000 --out results/wind_sweep.csv
"""

import argparse
import csv
import pathlib

import numpy as np

from trochoids.bench import BenchConfig, run_bench


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--speeds", default="0,2.5,5,7.5,10,12.5,15,17.5")
    ap.add_argument("--out", default="results/wind_sweep.csv")
    args = ap.parse_args()

    path = pathlib.Path(args.out)
    path.parent.mkdir(parents=True, exist_ok=True)
    fields = ["v_w", "pct_reduced", "numeric_solves", "candidates", "mismatches", "LSL", "LSR", "RSL", "RSR"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(fields)
        for vw in np.array(args.speeds.split(","), dtype=float):
            rep = run_bench(BenchConfig(n_samples=args.n, seed=args.seed, wind_range=(vw, vw), timing=False))
            d = rep.word_distribution
            row = [vw, rep.pct_d_gt_4R, rep.mean_numeric_solves, rep.mean_candidates, rep.mismatches,
                   d["LSL"], d["LSR"], d["RSL"], d["RSR"]]
            w.writerow(row)
            print(f"Vw={vw:5.1f}  reduced={100 * rep.pct_d_gt_4R:5.1f}%  solves={rep.mean_numeric_solves:.3f}  "
                  f"mismatches={rep.mismatches}")
    print(f"-> {path}")


if __name__ == "__main__":
    main()
