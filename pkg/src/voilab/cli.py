"""``voi-lab`` command line: demo, eval, scan, verify.

Exit codes: 0 success, 1 a check or theorem failed, 2 usage or validation error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .interaction import delta_voi
from .localization import TheoremViolation, classify
from .model import Belief, ValidationError, format_rational, load_instance, paper_instance, parse_belief, parse_rational
from .scanner import decimal_string, emit_csv, grid_scan, ray_scan, worker_count

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

F = Fraction
MARKED_BELIEFS = {
    "b1": (F(1, 11), F(2, 11), F(8, 11)),
    "b2": (F(1, 4), F(1, 6), F(7, 12)),
    "b3": (F(5, 12), F(5, 12), F(1, 6)),
}
# (VoI(i), VoI(j), VoI(j|i), E[D_g], E[D_h], dVoI); None marks a kink entry.
EXPECTED_TABLE = {
    "b1": (F(0), F(3, 44), F(15, 176), F(3, 176), F(0), F(3, 176)),
    "b2": (F(11, 16), F(1, 16), F(9, 64), F(49, 64), F(11, 16), F(5, 64)),
    "b3": (F(5, 2), F(5, 2), F(3, 32), None, None, F(-77, 32)),
}
ROW_LABELS = ("VoI(i)", "VoI(j)", "VoI(j|i)", "E[D_g]", "E[D_h]", "dVoI")


def _fr(x) -> str:
    return format_rational(x)


def _signed(x) -> str:
    return ("+" if x > 0 else "") + _fr(x)


def _report_dict(prob, rep, verdict=None) -> dict:
    names = prob.action_names
    out = {
        "belief": [_fr(p) for p in rep.belief],
        "value": _fr(rep.value),
        "argmax_actions": [names[a] for a in rep.argmax_actions],
        "prior_on_kink": rep.prior_on_kink,
        "voi_i": _fr(rep.voi_i),
        "voi_j": _fr(rep.voi_j),
        "voi_j_after_i": _fr(rep.voi_j_after_i),
        "complement_force": _fr(rep.complement_force),
        "substitute_force": _fr(rep.substitute_force),
        "delta_voi": _fr(rep.delta_voi),
        "regime": rep.regime,
        "per_outcome": [
            {
                "outcome": d.outcome,
                "marginal": _fr(d.marginal),
                "posterior": [_fr(p) for p in d.posterior],
                "value": _fr(d.value),
                "argmax_actions": [names[a] for a in d.argmax_actions],
                "voi_j": _fr(d.voi_j),
                "regret_of_prior_action": _fr(d.regret_of_prior_action),
            }
            for d in rep.per_outcome
        ],
    }
    if verdict is not None:
        out["localization"] = {
            "stays_interior": verdict.stays_interior,
            "common_actions": [names[a] for a in verdict.common_actions],
            "crossing_outcomes": list(verdict.crossing_outcomes),
            "disjoint_outcomes": list(verdict.disjoint_outcomes),
            "theorem2_applicable": verdict.theorem2_applicable,
            "theorem3_witness": verdict.theorem3_witness,
        }
    return out


def _dump(doc, stream):
    stream.write(json.dumps(doc, indent=2) + "\n")


# ------------------------------------------------------------------ demo


def demo_table():
    """Evaluate the three marked beliefs on the built-in instance."""
    inst = paper_instance()
    prob, ch_i, ch_j = inst.problem, inst.channel("i"), inst.channel("j")
    results = {}
    for label, probs in MARKED_BELIEFS.items():
        rep = delta_voi(prob, ch_i, ch_j, Belief(probs))
        forces = (None, None) if rep.prior_on_kink else (rep.complement_force, rep.substitute_force)
        results[label] = (rep, (rep.voi_i, rep.voi_j, rep.voi_j_after_i, *forces, rep.delta_voi))
    return prob, results


def cmd_demo(args, out) -> int:
    prob, results = demo_table()
    mismatches = [
        f"{label} {ROW_LABELS[k]}: got {row[k]}, expected {EXPECTED_TABLE[label][k]}"
        for label, (_, row) in results.items()
        for k in range(len(ROW_LABELS))
        if row[k] != EXPECTED_TABLE[label][k]
    ]
    if args.json:
        doc = {
            label: {
                "belief": [_fr(p) for p in rep.belief],
                "prior_on_kink": rep.prior_on_kink,
                **{
                    key: (None if val is None else _fr(val))
                    for key, val in zip(
                        ("voi_i", "voi_j", "voi_j_after_i", "complement_force", "substitute_force", "delta_voi"),
                        row,
                    )
                },
                "complement_force_jensen_gap": _fr(rep.complement_force),
                "substitute_force_jensen_gap": _fr(rep.substitute_force),
                "regime": rep.regime,
            }
            for label, (rep, row) in results.items()
        }
        doc["self_check"] = "ok" if not mismatches else mismatches
        _dump(doc, out)
    else:
        labels = list(results)
        header = [""] + [f"{lab} = {results[lab][0].belief}" for lab in labels]
        body = []
        for k, name in enumerate(ROW_LABELS):
            cells = []
            for lab in labels:
                v = results[lab][1][k]
                cells.append("---" if v is None else (_signed(v) if name == "dVoI" else _fr(v)))
            body.append([name] + cells)
        widths = [max(len(r[c]) for r in [header] + body) for c in range(len(header))]
        for r in [header] + body:
            out.write("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() + "\n")
        out.write("--- : forces are not separately defined where V has a kink\n")
        out.write("self-check: " + ("ok" if not mismatches else "MISMATCH") + "\n")
    for m in mismatches:
        sys.stderr.write(m + "\n")
    return EXIT_FAIL if mismatches else EXIT_OK


# ------------------------------------------------------------------ eval


def _load(path):
    return paper_instance() if path is None else load_instance(path)


def cmd_eval(args, out) -> int:
    inst = _load(args.instance)
    prob = inst.problem
    b = parse_belief(args.belief, prob.num_states)
    ch_i, ch_j = inst.channel(args.i), inst.channel(args.j)
    verdict = classify(prob, ch_i, ch_j, b)
    doc = _report_dict(prob, verdict.report, verdict)
    if args.json:
        _dump(doc, out)
        return EXIT_OK
    loc = doc["localization"]
    lines = [
        f"belief            {b}",
        f"V(b)              {doc['value']}  argmax {{{', '.join(doc['argmax_actions'])}}}"
        + ("  (kink)" if doc["prior_on_kink"] else ""),
        f"VoI({args.i})            {doc['voi_i']}",
        f"VoI({args.j})            {doc['voi_j']}",
        f"VoI({args.j}|{args.i})          {doc['voi_j_after_i']}",
        f"complement force  {doc['complement_force']}",
        f"substitute force  {doc['substitute_force']}",
        f"dVoI              {_signed(verdict.report.delta_voi)}  ({doc['regime']})",
        f"stays interior    {loc['stays_interior']}",
        f"crossing outcomes {loc['crossing_outcomes']}",
    ]
    if loc["theorem3_witness"] is not None:
        lines.append(f"converse witness  outcome {loc['theorem3_witness']}")
    for d in doc["per_outcome"]:
        lines.append(
            f"  o={d['outcome']}  P={d['marginal']}  posterior=({', '.join(d['posterior'])})"
            f"  argmax {{{', '.join(d['argmax_actions'])}}}  VoI({args.j})={d['voi_j']}"
            f"  regret={d['regret_of_prior_action']}"
        )
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


# ------------------------------------------------------------------ scan


def cmd_scan(args, out) -> int:
    inst = _load(args.instance)
    prob = inst.problem
    ch_i, ch_j = inst.channel(args.i), inst.channel(args.j)
    if args.mode == "grid":
        if args.n < 1:
            raise ValidationError(f"--n must be a positive integer, got {args.n}")
        scan = grid_scan(prob, ch_i, ch_j, args.n, workers=worker_count())
        subs = sum(r.regime == "substitute" for r in scan.rows)
        summary = f"grid N={args.n}: {len(scan.rows)} points, {subs} substitute"
    else:
        origin = parse_belief(args.origin, prob.num_states)
        direction = [parse_rational(x, "direction") for x in args.dir.split(",")]
        t_max = parse_rational(args.t_max, "t-max")
        scan = ray_scan(prob, ch_i, ch_j, origin, direction, t_max)

        def fmt(ts):
            return ", ".join(f"{_fr(t)} (~{decimal_string(t, 6)})" for t in ts) or "none"

        summary = (
            f"ray: decision boundary t = {fmt(scan.decision_boundary_ts)}; "
            f"interaction crossings t = {fmt(scan.interaction_crossings)}"
        )
    if args.out:
        with open(args.out, "wb") as fh:
            emit_csv(scan, fh)
    else:
        out.write(emit_csv(scan).decode("utf-8"))
    sys.stderr.write(summary + "\n")
    return EXIT_OK


# ------------------------------------------------------------------ verify


def cmd_verify(args, out) -> int:
    from .fuzz import FuzzConfig, run_verify

    cfg = FuzzConfig(
        seed=args.seed,
        cases=args.cases,
        max_states=args.max_states,
        max_actions=args.max_actions,
        max_outcomes=args.max_outcomes,
        denom_bound=args.denom_bound,
    )
    report = run_verify(cfg, workers=worker_count())
    doc = {"config": {k: getattr(cfg, k) for k in cfg.__dataclass_fields__}, **report.as_dict()}
    if args.json:
        _dump(doc, out)
    else:
        hist = report.regime_histogram
        out.write(
            f"cases {report.cases_run}  violations {report.violations}  "
            f"gap witnesses {report.gap_witnesses}  "
            f"complement {hist['complement']}  neutral {hist['neutral']}  substitute {hist['substitute']}\n"
        )
        for f in report.failures:
            out.write(f"case {f['case']} failed {', '.join(f['checks'])}\n")
            out.write(f"reproduce: seed {f['seed']} belief {f['belief']} shift {f['shift']}\n{f['instance']}")
    sys.stderr.write(f"elapsed {report.elapsed:.2f}s\n")
    return EXIT_FAIL if report.violations else EXIT_OK


# ------------------------------------------------------------------ entry


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voi-lab", description="Exact interaction analysis of information channels."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("demo", help="reproduce the three-belief worked example")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("eval", help="full interaction report at one belief")
    p.add_argument("instance")
    p.add_argument("--belief", required=True)
    p.add_argument("--i", default="i")
    p.add_argument("--j", default="j")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("scan", help="grid or ray scan, CSV output")
    p.add_argument("mode", choices=("grid", "ray"))
    p.add_argument("instance", nargs="?", help="instance file (default: built-in example)")
    p.add_argument("--i", default="i")
    p.add_argument("--j", default="j")
    p.add_argument("--n", type=int, default=120, help="grid denominator")
    p.add_argument("--origin", default="1/4,1/6,7/12")
    p.add_argument("--dir", default="1,0,-1")
    p.add_argument("--t-max", dest="t_max", default="1/4")
    p.add_argument("--out", help="write CSV here instead of stdout")

    p = sub.add_parser("verify", help="randomized search for counterexamples")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cases", type=int, default=10000)
    p.add_argument("--max-states", type=int, default=5)
    p.add_argument("--max-actions", type=int, default=5)
    p.add_argument("--max-outcomes", type=int, default=4)
    p.add_argument("--denom-bound", type=int, default=12)
    p.add_argument("--json", action="store_true")
    return parser


COMMANDS = {"demo": cmd_demo, "eval": cmd_eval, "scan": cmd_scan, "verify": cmd_verify}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except TheoremViolation as exc:
        sys.stderr.write(f"theorem violation: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
