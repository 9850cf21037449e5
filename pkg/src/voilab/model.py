"""Exact domain types for finite Bayesian decision problems.

Every scalar is a :class:`fractions.Fraction`. Nothing in here ever touches a
float, so equality between computed quantities is always exact.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Mapping, Sequence

Rational = Fraction


class ValidationError(ValueError):
    """Raised when an instance, belief or channel violates its invariants."""


_INT_RE = re.compile(r"^[+-]?\d+$")
_FRAC_RE = re.compile(r"^[+-]?\d+\s*/\s*\d+$")
_DEC_RE = re.compile(r"^[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?$")


def parse_rational(token, where: str = "value") -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or a finite decimal string into an exact Fraction.

    Ints and Fractions pass through. Floats are rejected: they have already lost
    exactness by the time they reach us.
    """
    if isinstance(token, bool):
        raise ValidationError(f"{where}: booleans are not rationals")
    if isinstance(token, Fraction):
        return token
    if isinstance(token, int):
        return Fraction(token)
    if isinstance(token, float):
        raise ValidationError(f"{where}: float {token!r} is not allowed, write it as a string")
    if not isinstance(token, str):
        raise ValidationError(f"{where}: cannot read {token!r} as a rational")
    s = token.strip()
    if _INT_RE.match(s):
        return Fraction(int(s))
    if _FRAC_RE.match(s):
        num, den = (int(x) for x in s.split("/"))
        if den == 0:
            raise ValidationError(f"{where}: zero denominator in {token!r}")
        return Fraction(num, den)
    if _DEC_RE.match(s):
        try:
            return Fraction(Decimal(s))
        except InvalidOperation:
            pass
    raise ValidationError(f"{where}: {token!r} is not a rational literal")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Belief:
    """A probability vector over the K states."""

    probs: tuple[Fraction, ...]

    def __post_init__(self):
        probs = tuple(Fraction(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        for s, p in enumerate(probs):
            if p < 0:
                raise ValidationError(f"belief entry {s} is negative ({p})")
        total = sum(probs, Fraction(0))
        if total != 1:
            raise ValidationError(f"belief entries sum to {format_rational(total)}, not 1")

    def __len__(self):
        return len(self.probs)

    def __iter__(self):
        return iter(self.probs)

    def __getitem__(self, s):
        return self.probs[s]

    def __str__(self):
        return "(" + ", ".join(format_rational(p) for p in self.probs) + ")"

    @property
    def num_states(self) -> int:
        return len(self.probs)


def make_belief(values: Sequence) -> Belief:
    return Belief(tuple(parse_rational(v, f"belief[{k}]") for k, v in enumerate(values)))


@dataclass(frozen=True)
class DecisionProblem:
    """Reward matrix ``rewards[a][s] = R(a, s)`` over named actions."""

    num_states: int
    action_names: tuple[str, ...]
    rewards: tuple[tuple[Fraction, ...], ...]
    state_names: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "action_names", tuple(self.action_names))
        object.__setattr__(
            self, "rewards", tuple(tuple(Fraction(r) for r in row) for row in self.rewards)
        )
        if self.state_names is not None:
            object.__setattr__(self, "state_names", tuple(self.state_names))
            if len(self.state_names) != self.num_states:
                raise ValidationError(
                    f"{len(self.state_names)} state names for {self.num_states} states"
                )
        if self.num_states < 2:
            raise ValidationError(f"need at least two states, got {self.num_states}")
        if len(self.action_names) < 2:
            raise ValidationError(f"need at least two actions, got {len(self.action_names)}")
        if len(set(self.action_names)) != len(self.action_names):
            raise ValidationError("action names must be distinct")
        if len(self.rewards) != len(self.action_names):
            raise ValidationError(
                f"rewards has {len(self.rewards)} rows but there are "
                f"{len(self.action_names)} actions"
            )
        for a, row in enumerate(self.rewards):
            if len(row) != self.num_states:
                raise ValidationError(
                    f"rewards row {a} ({self.action_names[a]}) has {len(row)} entries, "
                    f"expected {self.num_states}"
                )

    @property
    def num_actions(self) -> int:
        return len(self.action_names)

    def action_index(self, a) -> int:
        if isinstance(a, int) and not isinstance(a, bool):
            if 0 <= a < self.num_actions:
                return a
            raise ValidationError(f"unknown action index {a}")
        try:
            return self.action_names.index(a)
        except ValueError:
            raise ValidationError(f"unknown action {a!r}") from None


@dataclass(frozen=True)
class Channel:
    """Likelihood kernel with ``kernel[o][s] = P(o | s)``; columns sum to one."""

    name: str
    kernel: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        kernel = tuple(tuple(Fraction(p) for p in row) for row in self.kernel)
        object.__setattr__(self, "kernel", kernel)
        if not kernel:
            raise ValidationError(f"channel {self.name!r}: needs at least one outcome")
        k = len(kernel[0])
        for o, row in enumerate(kernel):
            if len(row) != k:
                raise ValidationError(
                    f"channel {self.name!r}: outcome row {o} has {len(row)} entries, expected {k}"
                )
            for s, p in enumerate(row):
                if p < 0:
                    raise ValidationError(
                        f"channel {self.name!r}: negative entry at outcome {o}, state {s}"
                    )
        for s in range(k):
            col = sum((row[s] for row in kernel), Fraction(0))
            if col != 1:
                raise ValidationError(
                    f"channel {self.name!r}: column for state {s} sums to "
                    f"{format_rational(col)}, not 1"
                )

    @property
    def num_outcomes(self) -> int:
        return len(self.kernel)

    @property
    def num_states(self) -> int:
        return len(self.kernel[0])


def uninformative_channel(num_states: int, name: str = "null") -> Channel:
    return Channel(name, ((Fraction(1),) * num_states,))


@dataclass(frozen=True)
class ProblemInstance:
    problem: DecisionProblem
    channels: Mapping[str, Channel] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "channels", dict(self.channels))
        for name, ch in self.channels.items():
            if ch.num_states != self.problem.num_states:
                raise ValidationError(
                    f"channel {name!r} has {ch.num_states} state columns, "
                    f"problem has {self.problem.num_states} states"
                )

    def channel(self, name: str) -> Channel:
        try:
            return self.channels[name]
        except KeyError:
            known = ", ".join(sorted(self.channels))
            raise ValidationError(f"unknown channel {name!r} (known: {known})") from None


def _matrix(raw, where: str) -> tuple[tuple[Fraction, ...], ...]:
    if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
        raise ValidationError(f"{where}: expected a list of rows")
    return tuple(
        tuple(parse_rational(v, f"{where}[{r}][{c}]") for c, v in enumerate(row))
        for r, row in enumerate(raw)
    )


def instance_from_dict(doc: dict) -> ProblemInstance:
    if not isinstance(doc, dict):
        raise ValidationError("instance document must be a JSON object")
    for key in ("states", "actions", "rewards"):
        if key not in doc:
            raise ValidationError(f"missing field {key!r}")
    states, actions = doc["states"], doc["actions"]
    if not isinstance(states, list) or not isinstance(actions, list):
        raise ValidationError("'states' and 'actions' must be lists of names")
    problem = DecisionProblem(
        num_states=len(states),
        action_names=tuple(str(a) for a in actions),
        rewards=_matrix(doc["rewards"], "rewards"),
        state_names=tuple(str(s) for s in states),
    )
    raw_channels = doc.get("channels", {})
    if not isinstance(raw_channels, dict):
        raise ValidationError("'channels' must be an object mapping names to kernels")
    channels = {
        name: Channel(name, _matrix(kernel, f"channels.{name}"))
        for name, kernel in raw_channels.items()
    }
    return ProblemInstance(problem, channels)


def parse_instance(text: str) -> ProblemInstance:
    """Parse a JSON instance document (all numbers as strings)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"syntax error: {exc}") from exc
    return instance_from_dict(doc)


def instance_to_dict(inst: ProblemInstance) -> dict:
    p = inst.problem
    states = p.state_names or tuple(f"s{k + 1}" for k in range(p.num_states))
    return {
        "states": list(states),
        "actions": list(p.action_names),
        "rewards": [[format_rational(r) for r in row] for row in p.rewards],
        "channels": {
            name: [[format_rational(x) for x in row] for row in ch.kernel]
            for name, ch in inst.channels.items()
        },
    }


def serialize_instance(inst: ProblemInstance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


def parse_belief(text: str, num_states: int) -> Belief:
    tokens = [t for t in text.split(",")]
    if len(tokens) != num_states:
        raise ValidationError(f"belief has {len(tokens)} entries, expected {num_states}")
    return make_belief(tokens)


def load_instance(path) -> ProblemInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def paper_instance() -> ProblemInstance:
    """The three-state, three-action worked example shipped with the package."""
    from importlib import resources

    text = resources.files("voilab").joinpath("data/paper.json").read_text(encoding="utf-8")
    return parse_instance(text)
