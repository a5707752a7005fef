"""Monte-Carlo comparison of the reduced planner against the exhaustive one.

    python scripts/run_benchmark.py --n 10000 --seed 42 --out results/bench.json
"""

import argparse
import json
import pathlib
import sys

from trochoids.bench import BenchConfig, run_bench


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--radius-sampling", choices=("curvature", "radius"), default="curvature")
    ap.add_argument("--out", default="results/bench.json")
    args = ap.parse_args()

    cfg = BenchConfig(n_samples=args.n, seed=args.seed, radius_sampling=args.radius_sampling)
    step = max(1, args.n // 20)

    def progress(i):
        if (i + 1) % step == 0:
            print(f"  {i + 1}/{args.n}", file=sys.stderr)

    rep = run_bench(cfg, progress).to_dict()
    out = pathlib.Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(rep, indent=2))

    print(f"samples            {rep['n_samples']}")
    print(f"reduced regime     {100 * rep['pct_d_gt_4R']:.2f}%")
    print(f"numeric solves     {rep['mean_numeric_solves']:.3f} (reduced subset)")
    print(f"mismatches         {rep['mismatches']}")
    print(f"speed ratio        {rep['speed_ratio']:.3f}  ({rep['speedup_pct']:.1f}% faster)")
    for w, v in rep["word_distribution"].items():
        print(f"  {w}  {100 * v:6.2f}%")
    print(f"report -> {out}")


if __name__ == "__main__":
    main()
