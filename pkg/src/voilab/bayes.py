"""Bayesian updating through finite channels: marginals, posteriors, product kernels."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .model import Belief, Channel, ValidationError

ZERO = Fraction(0)


def _check_dims(b: Belief, ch: Channel):
    if ch.num_states != len(b):
        raise ValidationError(
            f"channel {ch.name!r} has {ch.num_states} states but belief has {len(b)}"
        )


def marginal(b: Belief, ch: Channel) -> tuple[Fraction, ...]:
    """Outcome distribution ``P(o | b) = sum_s P(o|s) b(s)``."""
    _check_dims(b, ch)
    return tuple(sum((p * q for p, q in zip(row, b.probs)), ZERO) for row in ch.kernel)


@dataclass(frozen=True)
class PosteriorEntry:
    outcome: int
    marginal: Fraction
    posterior: Belief


@dataclass(frozen=True)
class PosteriorFamily:
    """Posteriors for every outcome with positive probability.

    Zero-probability outcomes are omitted; they carry no weight in any
    expectation taken over the family.
    """

    prior: Belief
    entries: tuple[PosteriorEntry, ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def by_outcome(self, o: int) -> PosteriorEntry:
        for e in self.entries:
            if e.outcome == o:
                return e
        raise KeyError(o)

    def mixture(self) -> tuple[Fraction, ...]:
        k = len(self.prior)
        return tuple(
            sum((e.marginal * e.posterior[s] for e in self.entries), ZERO) for s in range(k)
        )


def posterior_family(b: Belief, ch: Channel) -> PosteriorFamily:
    _check_dims(b, ch)
    entries = []
    for o, row in enumerate(ch.kernel):
        joint = [p * q for p, q in zip(row, b.probs)]
        m = sum(joint, ZERO)
        if m == 0:
            continue
        entries.append(PosteriorEntry(o, m, Belief(tuple(x / m for x in joint))))
    return PosteriorFamily(b, tuple(entries))


def product_channel(ch1: Channel, ch2: Channel, name: str | None = None) -> Channel:
    """Joint kernel of two conditionally independent channels.

    Outcome ``(o1, o2)`` sits at index ``o1 * |O_2| + o2`` (lexicographic order).
    """
    if ch1.num_states != ch2.num_states:
        raise ValidationError(
            f"channels {ch1.name!r} and {ch2.name!r} disagree on the number of states"
        )
    k = ch1.num_states
    kernel = tuple(
        tuple(r1[s] * r2[s] for s in range(k)) for r1, r2 in product(ch1.kernel, ch2.kernel)
    )
    return Channel(name or f"{ch1.name}x{ch2.name}", kernel)


def joint_outcome(ch2: Channel, o1: int, o2: int) -> int:
    return o1 * ch2.num_outcomes + o2
