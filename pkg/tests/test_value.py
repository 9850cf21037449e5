from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

import oracle
from strategies import beliefs, problems, scenarios
from voilab import (
    ValidationError,
    expected_posterior_value,
    make_belief,
    marginal,
    posterior_family,
    regret,
    same_region,
    unnorm_posterior_value,
    value,
)
from voilab.model import Belief, DecisionProblem, uninformative_channel


def test_value_b1(paper, b1):
    prob, _, _ = paper
    res = value(prob, b1)
    assert res.value == F(81, 11) == oracle.V(oracle.PAPER_R, b1.probs)
    assert res.argmax_actions == (2,)


def test_value_b3_is_a_kink(paper, b3):
    prob, _, _ = paper
    res = value(prob, b3)
    assert res.value == F(11, 2)
    assert res.argmax_actions == (0, 1)
    assert res.on_kink and res.canonical_action == 0


def test_constant_rewards():
    prob = DecisionProblem(3, ("x", "y"), ((5, 5, 5), (5, 5, 5)))
    res = value(prob, make_belief(["1/3", "1/3", "1/3"]))
    assert res.value == 5 and res.argmax_actions == (0, 1)


def test_same_region(paper, b1, b3):
    prob, ch_i, _ = paper
    assert same_region(prob, b1, make_belief(["3/13", "2/13", "8/13"]))
    fam = posterior_family(b3, ch_i)
    assert not same_region(prob, fam.by_outcome(0).posterior, fam.by_outcome(1).posterior)
    assert same_region(prob, b3, b3)


def test_regret(paper):
    prob, _, _ = paper
    assert regret(prob, "a3", make_belief(["3/13", "2/13", "8/13"])) == 0
    assert regret(prob, 2, make_belief(["15/22", "5/22", "2/22"])) == F(54, 11)
    with pytest.raises(ValidationError):
        regret(prob, "a9", make_belief(["1", "0", "0"]))


def test_unnorm_posterior_value_cancellation(paper, b1):
    prob, ch_i, _ = paper
    post = posterior_family(b1, ch_i).by_outcome(1)
    assert unnorm_posterior_value(prob, ch_i, b1, 1) == F(31, 44) * value(prob, post.posterior).value


def test_unnorm_posterior_value_zero_row(paper):
    prob, ch_i, _ = paper
    # outcome 0 of a perfect s1-detector has zero likelihood away from s1
    from voilab.model import Channel

    det = Channel("d", ((1, 0, 0), (0, 1, 1)))
    assert unnorm_posterior_value(prob, det, make_belief(["0", "1/2", "1/2"]), 0) == 0


def test_unnorm_constant_rewards(paper, b2):
    _, ch_i, _ = paper
    prob = DecisionProblem(3, ("x", "y"), ((4, 4, 4), (4, 4, 4)))
    assert unnorm_posterior_value(prob, ch_i, b2, 0) == 4 * marginal(b2, ch_i)[0]


def test_expected_posterior_value(paper, b1, b3):
    prob, ch_i, _ = paper
    assert expected_posterior_value(prob, ch_i, b3) == 8
    assert expected_posterior_value(prob, ch_i, b1) == F(81, 11)
    assert expected_posterior_value(prob, uninformative_channel(3), b3) == value(prob, b3).value


def test_dimension_mismatch(paper):
    prob, _, _ = paper
    with pytest.raises(ValidationError):
        value(prob, make_belief(["1/2", "1/2"]))


@given(st.integers(2, 4).flatmap(lambda k: st.tuples(problems(k), beliefs(k))))
def test_envelope_dominance(args):
    prob, b = args
    res = value(prob, b)
    for a, row in enumerate(prob.rewards):
        score = sum(r * p for r, p in zip(row, b))
        assert res.value >= score
        assert (score == res.value) == (a in res.argmax_actions)
        assert regret(prob, a, b) >= 0


@given(scenarios())
def test_jensen_and_cancellation(sc):
    prob, ch, _, b = sc
    assert expected_posterior_value(prob, ch, b) >= value(prob, b).value
    for e in posterior_family(b, ch):
        assert unnorm_posterior_value(prob, ch, b, e.outcome) == e.marginal * value(prob, e.posterior).value


@given(
    st.integers(2, 4).flatmap(lambda k: st.tuples(problems(k), beliefs(k), beliefs(k))),
    st.fractions(0, 1, max_denominator=20),
)
def test_linear_inside_a_region(args, lam):
    prob, b, b2 = args
    common = set(value(prob, b).argmax_actions) & set(value(prob, b2).argmax_actions)
    mix = Belief(tuple(lam * x + (1 - lam) * y for x, y in zip(b, b2)))
    lhs = value(prob, mix).value
    rhs = lam * value(prob, b).value + (1 - lam) * value(prob, b2).value
    if common:
        assert lhs == rhs
    else:
        assert lhs <= rhs
