"""Optimal-word maps over one decision-table block, before and after the fix.

Writes plot-ready JSON: for each table variant, the grid of optimal word
indices over the block's (alpha, beta) box plus the list of violations.

    python scripts/block_region_map.py --block 1,2 --d 4.01 --grid-n 200
"""

import argparse
import json
import pathlib

from trochoids.dubins_core import WORD_ORDER, validate_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--block", default="1,2", help="quadrant pair l,m")
    ap.add_argument("--d", type=float, default=4.01)
    ap.add_argument("--grid-n", type=int, default=200)
    ap.add_argument("--out", default="results/block_region.json")
    args = ap.parse_args()
    pair = tuple(int(v) for v in args.block.split(","))

    out = {"d": args.d, "grid_n": args.grid_n, "block": f"a{pair[0]}{pair[1]}",
           "word_order": [w.value for w in WORD_ORDER]}
    for label, corrected in (("uncorrected", False), ("corrected", True)):
        rep = validate_table(args.d, args.grid_n, corrected=corrected, probes=[(0.36, 3.111)])
        blk = rep.blocks[pair]
        out[label] = blk.to_dict(include_region=True)
        out[label]["probe"] = rep.probes[0]
        print(f"{label:12s} candidates={[w.value for w in blk.candidates]} violations={blk.n_violations}")
        if blk.violations:
            a = [v["alpha"] for v in blk.violations]
            b = [v["beta"] for v in blk.violations]
            words = sorted({v["optimal"] for v in blk.violations})
            print(f"{'':12s} optimal={words} alpha=[{min(a):.3f}, {max(a):.3f}] beta=[{min(b):.3f}, {max(b):.3f}]")
    path = pathlib.Path(args.out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(out))
    print(f"region map -> {path}")


if __name__ == "__main__":
    main()
