"""Boundary-crossing diagnostics and executable checks of the localization results.

``classify`` raises :class:`TheoremViolation` rather than returning a verdict
that contradicts interior complementarity or its converse. With exact
arithmetic such an error can only mean an implementation bug.
"""
from __future__ import annotations

from dataclasses import dataclass

from .interaction import InteractionReport, delta_voi, voi
from .model import Belief, Channel, DecisionProblem, ProblemInstance, serialize_instance


class TheoremViolation(AssertionError):
    """A computed verdict contradicts a proven property. Carries a reproducer."""

    def __init__(self, message: str, reproducer: str | None = None):
        super().__init__(message if reproducer is None else f"{message}\n{reproducer}")
        self.reproducer = reproducer


@dataclass(frozen=True)
class LocalizationVerdict:
    stays_interior: bool
    common_actions: tuple[int, ...]
    crossing_outcomes: tuple[int, ...]
    disjoint_outcomes: tuple[int, ...]
    regime: str
    theorem2_applicable: bool
    theorem3_witness: int | None
    report: InteractionReport


def _reproducer(prob, ch_i, ch_j, b) -> str:
    inst = ProblemInstance(prob, {"i": ch_i, "j": ch_j})
    return f"instance:\n{serialize_instance(inst)}belief: {','.join(str(p) for p in b)}"


def classify(
    prob: DecisionProblem, ch_i: Channel, ch_j: Channel, b: Belief, report: InteractionReport | None = None
) -> LocalizationVerdict:
    """Locate ``ch_i``'s posteriors relative to the decision regions at ``b``.

    ``crossing_outcomes`` are outcomes whose posterior no longer has the
    canonical prior action (lowest-index optimal action at ``b``) among its
    optimal actions. ``disjoint_outcomes`` is the stricter set whose posterior
    shares no optimal action with ``b`` at all; at a kink of ``V`` it can be
    empty even though the posteriors straddle the boundary.
    """
    rep = report if report is not None else delta_voi(prob, ch_i, ch_j, b)
    prior_set = set(rep.argmax_actions)
    canonical = rep.argmax_actions[0]

    common = set(prior_set)
    crossing, disjoint = [], []
    for d in rep.per_outcome:
        post_set = set(d.argmax_actions)
        common &= post_set
        if canonical not in post_set:
            crossing.append(d.outcome)
        if not (post_set & prior_set):
            disjoint.append(d.outcome)
    stays = bool(common)
    regime = rep.regime
    witness = crossing[0] if regime == "substitute" and crossing else None

    if stays and rep.delta_voi < 0:
        raise TheoremViolation(
            f"posteriors stay in a common region yet interaction is {rep.delta_voi}",
            _reproducer(prob, ch_i, ch_j, b),
        )
    if regime == "substitute" and witness is None:
        raise TheoremViolation(
            f"substitution ({rep.delta_voi}) without any posterior leaving the prior's region",
            _reproducer(prob, ch_i, ch_j, b),
        )
    return LocalizationVerdict(
        stays_interior=stays,
        common_actions=tuple(sorted(common)),
        crossing_outcomes=tuple(crossing),
        disjoint_outcomes=tuple(disjoint),
        regime=regime,
        theorem2_applicable=stays,
        theorem3_witness=witness,
        report=rep,
    )


def decision_irrelevant(prob: DecisionProblem, ch: Channel, b: Belief) -> bool:
    return voi(prob, ch, b) == 0
