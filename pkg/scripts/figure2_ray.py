"""Phase-transition data along b(t) = (1/4 + t, 1/6, 7/12 - t).

Writes the exact segment table plus a dense sample (for line plots) and
reports where the forces cross relative to the decision boundary.
"""
import argparse
import csv
from fractions import Fraction

from voilab import delta_voi, make_belief, paper_instance
from voilab.scanner import decimal_string, emit_csv, ray_scan

parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
parser.add_argument("--t-max", default="1/4")
parser.add_argument("--samples", type=int, default=200)
parser.add_argument("--segments-out", default="ray_segments.csv")
parser.add_argument("--samples-out", default="ray_samples.csv")
args = parser.parse_args()

inst = paper_instance()
prob, ch_i, ch_j = inst.problem, inst.channel("i"), inst.channel("j")
t_max = Fraction(args.t_max)
scan = ray_scan(prob, ch_i, ch_j, make_belief(["1/4", "1/6", "7/12"]), (1, 0, -1), t_max)

with open(args.segments_out, "wb") as fh:
    emit_csv(scan, fh)

with open(args.samples_out, "w", newline="") as fh:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t", "delta_voi", "complement_force", "substitute_force"])
    for k in range(args.samples + 1):
        t = t_max * k / args.samples
        rep = delta_voi(prob, ch_i, ch_j, scan.point(t))
        w.writerow([decimal_string(x) for x in (t, rep.delta_voi, rep.complement_force, rep.substitute_force)])

for t in scan.interaction_crossings:
    print(f"forces cross at t = {t} ~ {float(t):.4f}")
for t in scan.decision_boundary_ts:
    print(f"decision boundary at t = {t} ~ {float(t):.4f}")
