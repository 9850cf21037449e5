"""The piecewise-linear convex value function and its decision regions."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import Belief, Channel, DecisionProblem, ValidationError

ZERO = Fraction(0)


def _dot(row, vec) -> Fraction:
    return sum((r * x for r, x in zip(row, vec)), ZERO)


def _check(prob: DecisionProblem, b: Belief):
    if len(b) != prob.num_states:
        raise ValidationError(
            f"belief has {len(b)} entries but the problem has {prob.num_states} states"
        )


def _envelope(rows, vec) -> tuple[Fraction, tuple[int, ...]]:
    scores = [_dot(row, vec) for row in rows]
    best = max(scores)
    return best, tuple(a for a, v in enumerate(scores) if v == best)


@dataclass(frozen=True)
class ValueResult:
    value: Fraction
    argmax_actions: tuple[int, ...]

    @property
    def on_kink(self) -> bool:
        return len(self.argmax_actions) > 1

    @property
    def canonical_action(self) -> int:
        """Lowest-index optimal action; used wherever one representative is needed."""
        return self.argmax_actions[0]


def value(prob: DecisionProblem, b: Belief) -> ValueResult:
    """``V(b)`` together with the full set of optimal actions (ties kept)."""
    _check(prob, b)
    v, arg = _envelope(prob.rewards, b.probs)
    return ValueResult(v, arg)


def same_region(prob: DecisionProblem, b: Belief, b2: Belief) -> bool:
    """True iff the two beliefs share a closed decision region."""
    return bool(set(value(prob, b).argmax_actions) & set(value(prob, b2).argmax_actions))


def regret(prob: DecisionProblem, a, b: Belief) -> Fraction:
    a = prob.action_index(a)
    return value(prob, b).value - _dot(prob.rewards[a], b.probs)


def unnorm_posterior_value(prob: DecisionProblem, ch: Channel, b: Belief, o: int) -> Fraction:
    """``max_a sum_s R(a,s) P(o|s) b(s)``, which equals ``P(o|b) V(posterior)``.

    Working with the unnormalized posterior avoids dividing by ``P(o|b)``,
    so the expression stays well defined when that probability is zero.
    """
    _check(prob, b)
    if ch.num_states != prob.num_states:
        raise ValidationError(f"channel {ch.name!r} does not match the problem's states")
    weighted = [p * q for p, q in zip(ch.kernel[o], b.probs)]
    return max(_dot(row, weighted) for row in prob.rewards)


def expected_posterior_value(prob: DecisionProblem, ch: Channel, b: Belief) -> Fraction:
    """``E_o[V(posterior)]`` as a sum of per-outcome maxima of linear forms."""
    return sum((unnorm_posterior_value(prob, ch, b, o) for o in range(ch.num_outcomes)), ZERO)
