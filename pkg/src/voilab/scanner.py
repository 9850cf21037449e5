"""Exact simplex grid scans and ray scans with breakpoint enumeration.

Along a ray ``b(t) = origin + t * direction`` every term of

    dVoI(t) = F_ij(t) - F_i(t) - F_j(t) + V(t)

is a sum over outcomes of maxima of affine functions of ``t``. Solving every
pairwise tie of those affine pieces gives all the points where the
interaction can bend, so no numeric root finding is needed anywhere.
"""
from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from itertools import combinations

from .bayes import product_channel
from .interaction import InteractionReport, delta_voi
from .localization import classify
from .model import Belief, Channel, DecisionProblem, ValidationError, format_rational, uninformative_channel

ZERO = Fraction(0)


def lattice(num_states: int, n: int):
    """All integer compositions of ``n`` into ``num_states`` parts, lexicographic."""
    if num_states == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in lattice(num_states - 1, n - first):
            yield (first,) + rest


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("VOI_LAB_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class GridRow:
    belief: Belief
    delta_voi: Fraction
    complement_force: Fraction
    substitute_force: Fraction
    regime: str
    argmax_actions: tuple[int, ...]
    on_kink: bool
    stays_interior: bool


@dataclass(frozen=True)
class GridScan:
    denominator: int
    action_names: tuple[str, ...]
    rows: tuple[GridRow, ...]

    def row_at(self, belief) -> GridRow:
        target = tuple(Fraction(p) for p in belief)
        for r in self.rows:
            if r.belief.probs == target:
                return r
        raise KeyError(belief)


def _grid_row(args) -> GridRow:
    prob, ch_i, ch_j, counts, n = args
    b = Belief(tuple(Fraction(c, n) for c in counts))
    verdict = classify(prob, ch_i, ch_j, b)
    rep = verdict.report
    return GridRow(
        belief=b,
        delta_voi=rep.delta_voi,
        complement_force=rep.complement_force,
        substitute_force=rep.substitute_force,
        regime=rep.regime,
        argmax_actions=rep.argmax_actions,
        on_kink=rep.prior_on_kink,
        stays_interior=verdict.stays_interior,
    )


def grid_scan(prob: DecisionProblem, ch_i: Channel, ch_j: Channel, n: int = 120, workers: int | None = None) -> GridScan:
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"grid denominator must be a positive integer, got {n!r}")
    jobs = [(prob, ch_i, ch_j, counts, n) for counts in lattice(prob.num_states, n)]
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_grid_row, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    else:
        rows = [_grid_row(job) for job in jobs]
    return GridScan(n, prob.action_names, tuple(rows))


# ---------------------------------------------------------------- ray scans


@dataclass(frozen=True)
class Segment:
    t_lo: Fraction
    t_hi: Fraction
    dvoi: tuple[Fraction, Fraction]  # (slope, intercept) in t
    comp: tuple[Fraction, Fraction]
    sub: tuple[Fraction, Fraction]
    boundary_kind_at_hi: str


@dataclass(frozen=True)
class RayScan:
    origin: Belief
    direction: tuple[Fraction, ...]
    t_max: Fraction
    breakpoints: tuple[Fraction, ...]
    segments: tuple[Segment, ...]
    decision_boundary_ts: tuple[Fraction, ...]
    interaction_crossings: tuple[Fraction, ...]

    def point(self, t) -> Belief:
        return Belief(tuple(o + Fraction(t) * d for o, d in zip(self.origin.probs, self.direction)))


def _affine_pieces(prob: DecisionProblem, ch: Channel, origin, direction):
    """Per outcome, the (intercept, slope) of every action's unnormalized payoff along the ray."""
    pieces = []
    for row in ch.kernel:
        forms = []
        for rewards in prob.rewards:
            w = [r * p for r, p in zip(rewards, row)]
            forms.append(
                (
                    sum((x * y for x, y in zip(w, origin)), ZERO),
                    sum((x * y for x, y in zip(w, direction)), ZERO),
                )
            )
        pieces.append(forms)
    return pieces


def _argmax_at(forms, t):
    vals = [a + b * t for a, b in forms]
    best = max(vals)
    return frozenset(k for k, v in enumerate(vals) if v == best)


def _tie_points(forms, t_max):
    """Points in (0, t_max) where two affine forms tie at the top of the envelope."""
    out = set()
    for (a1, b1), (a2, b2) in combinations(forms, 2):
        if b1 == b2:
            continue
        t = (a2 - a1) / (b1 - b2)
        if 0 < t < t_max:
            vals = [a + b * t for a, b in forms]
            if a1 + b1 * t == max(vals):
                out.add(t)
    return out


def _envelope_changes(forms, t_max, candidates):
    """Subset of candidate points where the argmax set differs from a neighbour."""
    nodes = sorted({ZERO, t_max} | set(candidates))
    out = []
    for k, t in enumerate(nodes):
        here = _argmax_at(forms, t)
        neighbours = []
        if k > 0:
            neighbours.append(_argmax_at(forms, (nodes[k - 1] + t) / 2))
        if k + 1 < len(nodes):
            neighbours.append(_argmax_at(forms, (t + nodes[k + 1]) / 2))
        if any(nb != here for nb in neighbours):
            out.append(t)
    return out


def _check_ray(origin: Belief, direction, t_max):
    if len(direction) != len(origin):
        raise ValidationError("direction and origin have different lengths")
    if all(d == 0 for d in direction):
        raise ValidationError("direction is the zero vector")
    if sum(direction, ZERO) != 0:
        raise ValidationError("direction entries must sum to 0")
    if t_max < 0:
        raise ValidationError("t_max must be nonnegative")
    end = [o + t_max * d for o, d in zip(origin.probs, direction)]
    if any(x < 0 for x in end):
        raise ValidationError(f"ray exits the simplex before t = {format_rational(t_max)}")


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def ray_scan(
    prob: DecisionProblem, ch_i: Channel, ch_j: Channel, origin: Belief, direction, t_max
) -> RayScan:
    direction = tuple(Fraction(d) for d in direction)
    t_max = Fraction(t_max)
    _check_ray(origin, direction, t_max)

    null = uninformative_channel(prob.num_states)
    joint = product_channel(ch_i, ch_j)
    decision_ts: list[Fraction] = []
    breakpoints: set[Fraction] = set()
    for k, ch in enumerate((null, ch_i, ch_j, joint)):
        for forms in _affine_pieces(prob, ch, origin.probs, direction):
            changes = _envelope_changes(forms, t_max, _tie_points(forms, t_max))
            if k == 0:
                decision_ts = changes
            breakpoints.update(t for t in changes if 0 < t < t_max)

    def point(t):
        return Belief(tuple(o + t * d for o, d in zip(origin.probs, direction)))

    cache: dict[Fraction, InteractionReport] = {}

    def report(t) -> InteractionReport:
        if t not in cache:
            cache[t] = delta_voi(prob, ch_i, ch_j, point(t))
        return cache[t]

    # split the pieces further at interior roots of the interaction
    nodes = sorted({ZERO, t_max} | breakpoints)
    refined = [nodes[0]]
    for lo, hi in zip(nodes, nodes[1:]):
        f_lo, f_hi = report(lo).delta_voi, report(hi).delta_voi
        if _sign(f_lo) * _sign(f_hi) < 0:
            refined.append(lo - f_lo * (hi - lo) / (f_hi - f_lo))
        refined.append(hi)

    crossings = []
    for k in range(1, len(refined) - 1):
        t = refined[k]
        if report(t).delta_voi != 0:
            continue
        left = report((refined[k - 1] + t) / 2).delta_voi
        right = report((t + refined[k + 1]) / 2).delta_voi
        if _sign(left) * _sign(right) < 0:
            crossings.append(t)

    decision_set, crossing_set = set(decision_ts), set(crossings)
    segments = []
    pairs = list(zip(refined, refined[1:])) or [(refined[0], refined[0])]
    for lo, hi in pairs:
        r_lo, r_hi = report(lo), report(hi)

        def affine(f):
            y_lo, y_hi = f(r_lo), f(r_hi)
            slope = (y_hi - y_lo) / (hi - lo) if hi != lo else ZERO
            return slope, y_lo - slope * lo

        if hi == t_max:
            kind = "end"
            if hi in decision_set:
                kind = "decision+end"
        elif hi in decision_set and hi in crossing_set:
            kind = "decision+interaction"
        elif hi in decision_set:
            kind = "decision"
        elif hi in crossing_set:
            kind = "interaction"
        else:
            kind = "breakpoint"
        segments.append(
            Segment(
                t_lo=lo,
                t_hi=hi,
                dvoi=affine(lambda r: r.delta_voi),
                comp=affine(lambda r: r.complement_force),
                sub=affine(lambda r: r.substitute_force),
                boundary_kind_at_hi=kind,
            )
        )
    return RayScan(
        origin=origin,
        direction=direction,
        t_max=t_max,
        breakpoints=tuple(sorted(breakpoints)),
        segments=tuple(segments),
        decision_boundary_ts=tuple(decision_ts),
        interaction_crossings=tuple(crossings),
    )


def certify_segments(prob, ch_i, ch_j, scan: RayScan) -> list[str]:
    """Exact midpoint affinity test on every segment; returns a list of failures."""
    failures = []
    for seg in scan.segments:
        mid = (seg.t_lo + seg.t_hi) / 2
        rep = delta_voi(prob, ch_i, ch_j, scan.point(mid))
        for label, (slope, icpt), got in (
            ("dvoi", seg.dvoi, rep.delta_voi),
            ("comp", seg.comp, rep.complement_force),
            ("sub", seg.sub, rep.substitute_force),
        ):
            if slope * mid + icpt != got:
                failures.append(f"{label} not affine on [{seg.t_lo}, {seg.t_hi}]")
    return failures


# ---------------------------------------------------------------- CSV output


def decimal_string(x: Fraction, digits: int = 12) -> str:
    """Render to ``digits`` significant digits, round-half-even."""
    x = Fraction(x)
    if x == 0:
        return "0"
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = ROUND_HALF_EVEN
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return format(d, "f")


GRID_TAIL = [
    "delta_voi_frac",
    "delta_voi_dec",
    "comp_force_frac",
    "comp_force_dec",
    "sub_force_frac",
    "sub_force_dec",
    "regime",
    "argmax_actions",
    "on_kink",
]

RAY_HEADER = [
    "t_lo_frac",
    "t_hi_frac",
    "dvoi_slope_frac",
    "dvoi_intercept_frac",
    "comp_slope_frac",
    "comp_intercept_frac",
    "sub_slope_frac",
    "sub_intercept_frac",
    "boundary_kind_at_hi",
]


def _grid_rows(scan: GridScan):
    k = len(scan.rows[0].belief) if scan.rows else 0
    yield (
        [f"b{s + 1}_frac" for s in range(k)] + [f"b{s + 1}_dec" for s in range(k)] + GRID_TAIL
    )
    for r in scan.rows:
        yield (
            [format_rational(p) for p in r.belief]
            + [decimal_string(p) for p in r.belief]
            + [
                format_rational(r.delta_voi),
                decimal_string(r.delta_voi),
                format_rational(r.complement_force),
                decimal_string(r.complement_force),
                format_rational(r.substitute_force),
                decimal_string(r.substitute_force),
                r.regime,
                "|".join(scan.action_names[a] for a in r.argmax_actions),
                "true" if r.on_kink else "false",
            ]
        )


def _ray_rows(scan: RayScan):
    yield RAY_HEADER
    for s in scan.segments:
        yield [
            format_rational(s.t_lo),
            format_rational(s.t_hi),
            *(format_rational(x) for x in (*s.dvoi, *s.comp, *s.sub)),
            s.boundary_kind_at_hi,
        ]


def emit_csv(scan, sink=None) -> bytes:
    """Write ``scan`` as CSV to ``sink`` (a binary or text stream) and return the bytes."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    rows = _grid_rows(scan) if isinstance(scan, GridScan) else _ray_rows(scan)
    writer.writerows(rows)
    data = buf.getvalue().encode("utf-8")
    if sink is not None:
        if isinstance(sink, io.TextIOBase):
            sink.write(data.decode("utf-8"))
        else:
            sink.write(data)
    return data
