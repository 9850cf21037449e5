"""Simplex heat-map data for the worked example: sign of the interaction and both forces.

    python scripts/figure1_grid.py --n 132 --out grid.csv
"""
import argparse
import sys
from collections import Counter

from voilab import paper_instance
from voilab.scanner import emit_csv, grid_scan

parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
parser.add_argument("--n", type=int, default=132, help="lattice denominator (132 puts b1, b2, b3 on the grid)")
parser.add_argument("--out", default="grid.csv")
args = parser.parse_args()

inst = paper_instance()
scan = grid_scan(inst.problem, inst.channel("i"), inst.channel("j"), args.n)
with open(args.out, "wb") as fh:
    emit_csv(scan, fh)

counts = Counter(r.regime for r in scan.rows)
boundary_subs = sum(r.regime == "substitute" and not r.stays_interior for r in scan.rows)
print(f"{len(scan.rows)} points -> {args.out}", file=sys.stderr)
print(f"regimes: {dict(counts)}; substitute points with a boundary crossing: {boundary_subs}", file=sys.stderr)
