"""Value of information and the complement/substitute split of channel interaction.

Both forces are reported as Jensen gaps ``E[phi(posterior)] - phi(prior)``.
Under the exact Bayesian mixture identity this equals the expected Bregman
divergence for *any* subgradient choice, so the numbers stay well defined at
kinks of ``V`` where the per-outcome divergences do not.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bayes import posterior_family
from .model import Belief, Channel, DecisionProblem, ValidationError
from .value import _dot, expected_posterior_value, value

ZERO = Fraction(0)


def voi(prob: DecisionProblem, ch: Channel, b: Belief) -> Fraction:
    return expected_posterior_value(prob, ch, b) - value(prob, b).value


def g_value(prob: DecisionProblem, ch_j: Channel, b: Belief) -> Fraction:
    """Expected value after observing ``ch_j`` from belief ``b``."""
    return expected_posterior_value(prob, ch_j, b)


@dataclass(frozen=True)
class OutcomeDetail:
    outcome: int
    marginal: Fraction
    posterior: Belief
    value: Fraction
    argmax_actions: tuple[int, ...]
    voi_j: Fraction
    regret_of_prior_action: Fraction


@dataclass(frozen=True)
class InteractionReport:
    belief: Belief
    value: Fraction
    argmax_actions: tuple[int, ...]
    voi_i: Fraction
    voi_j: Fraction
    voi_j_after_i: Fraction
    delta_voi: Fraction
    complement_force: Fraction
    substitute_force: Fraction
    prior_on_kink: bool
    per_outcome: tuple[OutcomeDetail, ...]

    @property
    def regime(self) -> str:
        return regime_of(self.delta_voi)


def regime_of(delta: Fraction) -> str:
    if delta > 0:
        return "complement"
    if delta < 0:
        return "substitute"
    return "neutral"


def delta_voi(prob: DecisionProblem, ch_i: Channel, ch_j: Channel, b: Belief) -> InteractionReport:
    """Change in ``ch_j``'s value of information caused by first observing ``ch_i``."""
    if ch_i.num_states != ch_j.num_states:
        raise ValidationError("channels disagree on the number of states")
    prior = value(prob, b)
    g_prior = g_value(prob, ch_j, b)
    voi_j = g_prior - prior.value
    prior_action = prior.canonical_action

    details = []
    e_g = e_h = after = ZERO
    for e in posterior_family(b, ch_i):
        post = value(prob, e.posterior)
        g_post = g_value(prob, ch_j, e.posterior)
        vj = g_post - post.value
        e_g += e.marginal * g_post
        e_h += e.marginal * post.value
        after += e.marginal * vj
        details.append(
            OutcomeDetail(
                outcome=e.outcome,
                marginal=e.marginal,
                posterior=e.posterior,
                value=post.value,
                argmax_actions=post.argmax_actions,
                voi_j=vj,
                regret_of_prior_action=post.value
                - _dot(prob.rewards[prior_action], e.posterior.probs),
            )
        )
    return InteractionReport(
        belief=b,
        value=prior.value,
        argmax_actions=prior.argmax_actions,
        voi_i=e_h - prior.value,
        voi_j=voi_j,
        voi_j_after_i=after,
        delta_voi=after - voi_j,
        complement_force=e_g - g_prior,
        substitute_force=e_h - prior.value,
        prior_on_kink=prior.on_kink,
        per_outcome=tuple(details),
    )


def bregman_divergence_h(prob: DecisionProblem, b2: Belief, b: Belief, a_sel) -> Fraction:
    """``V(b2) - V(b) - r_a . (b2 - b)`` with ``r_a`` a subgradient of ``V`` at ``b``."""
    a = prob.action_index(a_sel)
    prior = value(prob, b)
    if a not in prior.argmax_actions:
        raise ValidationError(
            f"action {prob.action_names[a]!r} is not optimal at {b}, so its reward "
            "vector is not a subgradient there"
        )
    diff = [x - y for x, y in zip(b2.probs, b.probs)]
    return value(prob, b2).value - prior.value - _dot(prob.rewards[a], diff)


def shift_rewards(prob: DecisionProblem, c) -> DecisionProblem:
    c = Fraction(c)
    return DecisionProblem(
        num_states=prob.num_states,
        action_names=prob.action_names,
        rewards=tuple(tuple(r + c for r in row) for row in prob.rewards),
        state_names=prob.state_names,
    )
