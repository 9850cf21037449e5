"""Randomized falsification harness for the decomposition and localization results.

Each case draws an exact random instance and belief from a per-case RNG
seeded by ``"{seed}:{case}"``, so cases are independent of execution order
and can be spread over worker processes without changing the report.
"""
from __future__ import annotations

import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .bayes import product_channel
from .interaction import delta_voi, shift_rewards
from .localization import TheoremViolation, classify
from .model import Belief, Channel, DecisionProblem, ProblemInstance, ValidationError, serialize_instance
from .value import expected_posterior_value, value

CHECKS = (
    "decomposition",
    "complement_nonneg",
    "substitute_nonneg",
    "substitute_is_voi_i",
    "interior_complementarity",
    "converse",
    "decision_irrelevant",
    "four_term",
    "shift_invariance",
)


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 42
    cases: int = 10000
    max_states: int = 5
    max_actions: int = 5
    max_outcomes: int = 4
    denom_bound: int = 12

    def __post_init__(self):
        if self.max_states < 2 or self.max_actions < 2:
            raise ValidationError("max_states and max_actions must be at least 2")
        if self.max_states > 5 or self.max_actions > 5:
            raise ValidationError("max_states and max_actions are capped at 5")
        if not 1 <= self.max_outcomes <= 4:
            raise ValidationError("max_outcomes must be between 1 and 4")
        if self.cases < 1:
            raise ValidationError("cases must be at least 1")
        if self.denom_bound < 1:
            raise ValidationError("denom_bound must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must fit in an unsigned 64-bit integer")


@dataclass
class VerifyReport:
    cases_run: int = 0
    violations: int = 0
    gap_witnesses: int = 0
    regime_histogram: Counter = field(default_factory=Counter)
    failures: list = field(default_factory=list)
    elapsed: float = 0.0

    def as_dict(self) -> dict:
        """Deterministic summary; wall-clock time is deliberately left out."""
        return {
            "cases_run": self.cases_run,
            "violations": self.violations,
            "gap_witnesses": self.gap_witnesses,
            "regime_histogram": {k: self.regime_histogram.get(k, 0) for k in ("complement", "neutral", "substitute")},
            "checks": list(CHECKS),
            "failures": self.failures,
        }


# ------------------------------------------------------------- generators


def random_rational(rng: random.Random, bound: int, lo: Fraction, hi: Fraction) -> Fraction:
    q = rng.randint(1, bound)
    return Fraction(rng.randint(int(lo * q), int(hi * q)), q)


def random_channel(rng: random.Random, name: str, num_states: int, num_outcomes: int, bound: int) -> Channel:
    columns = []
    for _ in range(num_states):
        while True:
            col = [random_rational(rng, bound, Fraction(0), Fraction(1)) for _ in range(num_outcomes)]
            total = sum(col)
            if total:
                break
        columns.append([c / total for c in col])
    return Channel(name, tuple(tuple(col[o] for col in columns) for o in range(num_outcomes)))


def random_belief(rng: random.Random, num_states: int, bound: int) -> Belief:
    """Lattice point with denominator <= bound; faces and kinks are reachable."""
    n = rng.randint(1, bound)
    cuts = sorted(rng.randint(0, n) for _ in range(num_states - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [n])]
    return Belief(tuple(Fraction(p, n) for p in parts))


def random_instance(rng: random.Random, cfg: FuzzConfig) -> ProblemInstance:
    k = rng.randint(2, cfg.max_states)
    n_actions = rng.randint(2, cfg.max_actions)
    bound = Fraction(cfg.denom_bound)
    prob = DecisionProblem(
        num_states=k,
        action_names=tuple(f"a{a + 1}" for a in range(n_actions)),
        rewards=tuple(
            tuple(random_rational(rng, cfg.denom_bound, -bound, bound) for _ in range(k))
            for _ in range(n_actions)
        ),
    )
    channels = {
        name: random_channel(rng, name, k, rng.randint(1, cfg.max_outcomes), cfg.denom_bound)
        for name in ("i", "j")
    }
    return ProblemInstance(prob, channels)


# ------------------------------------------------------------- one case


def check_case(prob: DecisionProblem, ch_i: Channel, ch_j: Channel, b: Belief, shift: Fraction) -> tuple[list[str], str, bool]:
    """Run every per-case assertion; returns (failed check names, regime, gap witness)."""
    failed = []
    rep = delta_voi(prob, ch_i, ch_j, b)
    v = value(prob, b).value
    f_i = expected_posterior_value(prob, ch_i, b)
    f_j = expected_posterior_value(prob, ch_j, b)

    if rep.delta_voi != rep.complement_force - rep.substitute_force:
        failed.append("decomposition")
    if rep.complement_force < 0:
        failed.append("complement_nonneg")
    if rep.substitute_force < 0:
        failed.append("substitute_nonneg")
    if rep.substitute_force != f_i - v:
        failed.append("substitute_is_voi_i")

    try:
        verdict = classify(prob, ch_i, ch_j, b, report=rep)
    except TheoremViolation:
        failed.append("interior_complementarity" if rep.delta_voi < 0 else "converse")
        verdict = None
    if verdict is not None:
        if verdict.stays_interior and rep.delta_voi < 0:
            failed.append("interior_complementarity")
        if rep.delta_voi < 0:
            a = rep.argmax_actions[0]
            if verdict.stays_interior or not any(
                a not in d.argmax_actions for d in rep.per_outcome
            ):
                failed.append("converse")
        if verdict.stays_interior and (rep.voi_i != 0 or rep.delta_voi < 0):
            failed.append("decision_irrelevant")

    f_ij = expected_posterior_value(prob, product_channel(ch_i, ch_j), b)
    if rep.delta_voi != f_ij - f_i - f_j + v:
        failed.append("four_term")

    shifted = delta_voi(shift_rewards(prob, shift), ch_i, ch_j, b)
    if (shifted.delta_voi, shifted.voi_i, shifted.voi_j, shifted.complement_force, shifted.substitute_force) != (
        rep.delta_voi,
        rep.voi_i,
        rep.voi_j,
        rep.complement_force,
        rep.substitute_force,
    ):
        failed.append("shift_invariance")

    gap = verdict is not None and not verdict.stays_interior and bool(verdict.crossing_outcomes) and rep.delta_voi > 0
    return failed, rep.regime, gap


def run_case(args):
    cfg, case = args
    rng = random.Random(f"{cfg.seed}:{case}")
    inst = random_instance(rng, cfg)
    b = random_belief(rng, inst.problem.num_states, cfg.denom_bound)
    bound = Fraction(cfg.denom_bound)
    shift = random_rational(rng, cfg.denom_bound, -bound, bound)
    failed, regime, gap = check_case(inst.problem, inst.channel("i"), inst.channel("j"), b, shift)
    failure = None
    if failed:
        failure = {
            "case": case,
            "seed": cfg.seed,
            "checks": failed,
            "instance": serialize_instance(inst),
            "belief": ",".join(str(p) for p in b),
            "shift": str(shift),
        }
    return regime, gap, failure


def run_verify(cfg: FuzzConfig, workers: int = 1) -> VerifyReport:
    start = time.perf_counter()
    jobs = [(cfg, c) for c in range(cfg.cases)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_case, jobs, chunksize=max(1, cfg.cases // (16 * workers))))
    else:
        results = [run_case(job) for job in jobs]
    report = VerifyReport()
    for regime, gap, failure in results:
        report.cases_run += 1
        report.regime_histogram[regime] += 1
        report.gap_witnesses += gap
        if failure is not None:
            report.violations += 1
            report.failures.append(failure)
    report.elapsed = time.perf_counter() - start
    return report
