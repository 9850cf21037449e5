"""Hypothesis strategies for small exact decision problems."""
from fractions import Fraction

from hypothesis import strategies as st

from voilab import Belief, Channel, DecisionProblem


def rationals(lo=-6, hi=6, max_den=6):
    return st.builds(
        lambda q, p: Fraction(p, q),
        st.integers(1, max_den),
        st.integers(lo, hi),
    ).filter(lambda x: lo <= x <= hi)


@st.composite
def beliefs(draw, k, max_den=12):
    n = draw(st.integers(1, max_den))
    cuts = sorted(draw(st.lists(st.integers(0, n), min_size=k - 1, max_size=k - 1)))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [n])]
    return Belief(tuple(Fraction(p, n) for p in parts))


@st.composite
def channels(draw, k, name="c", max_outcomes=3):
    n_out = draw(st.integers(1, max_outcomes))
    cols = []
    for _ in range(k):
        col = draw(
            st.lists(st.integers(0, 6), min_size=n_out, max_size=n_out).filter(lambda c: sum(c) > 0)
        )
        cols.append([Fraction(c, sum(col)) for c in col])
    return Channel(name, tuple(tuple(col[o] for col in cols) for o in range(n_out)))


@st.composite
def problems(draw, k, max_actions=4):
    n_a = draw(st.integers(2, max_actions))
    rows = draw(st.lists(st.lists(rationals(), min_size=k, max_size=k), min_size=n_a, max_size=n_a))
    return DecisionProblem(k, tuple(f"a{a}" for a in range(n_a)), tuple(map(tuple, rows)))


@st.composite
def scenarios(draw, max_states=4):
    """(problem, ch_i, ch_j, belief) sharing one state count."""
    k = draw(st.integers(2, max_states))
    return (
        draw(problems(k)),
        draw(channels(k, "i")),
        draw(channels(k, "j")),
        draw(beliefs(k)),
    )
