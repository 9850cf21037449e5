import io
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

import oracle
from conftest import REPO
from strategies import beliefs, scenarios
from voilab import ValidationError, delta_voi, make_belief
from voilab.fuzz import FuzzConfig, random_belief, random_instance
from voilab.scanner import (
    GridScan,
    certify_segments,
    decimal_string,
    emit_csv,
    grid_scan,
    lattice,
    ray_scan,
)

GOLDEN = REPO / "tests" / "golden"
T_STAR = F(73, 708)  # frozen from the bisection oracle in tests/oracle.py


@pytest.fixture(scope="module")
def paper_ray(paper, b2):
    return ray_scan(*paper, b2, (1, 0, -1), F(1, 4))


def test_lattice_size_and_order():
    pts = list(lattice(3, 5))
    assert len(pts) == 21 == len(set(pts))
    assert pts == sorted(pts)
    assert all(sum(p) == 5 for p in pts)


def test_grid_vertices(paper):
    scan = grid_scan(*paper, 1)
    assert [r.belief.probs for r in scan.rows] == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_grid_hits_marked_beliefs(paper):
    assert grid_scan(*paper, 44).row_at((F(4, 44), F(8, 44), F(32, 44))).delta_voi == F(3, 176)
    row = grid_scan(*paper, 12).row_at((F(5, 12), F(5, 12), F(2, 12)))
    assert row.delta_voi == F(-77, 32) and row.regime == "substitute" and row.on_kink


def test_grid_rows_match_fresh_evaluation(paper):
    scan = grid_scan(*paper, 6)
    for r in scan.rows:
        rep = delta_voi(*paper, r.belief)
        assert (r.delta_voi, r.complement_force, r.substitute_force) == (
            rep.delta_voi,
            rep.complement_force,
            rep.substitute_force,
        )


def test_grid_parallel_matches_serial(paper):
    assert grid_scan(*paper, 5, workers=2) == grid_scan(*paper, 5, workers=1)


def test_grid_rejects_bad_n(paper):
    with pytest.raises(ValidationError):
        grid_scan(*paper, 0)


def test_paper_ray_boundaries(paper_ray):
    assert paper_ray.decision_boundary_ts == (F(7, 60),)
    assert T_STAR in paper_ray.interaction_crossings
    assert min(paper_ray.interaction_crossings) < min(paper_ray.decision_boundary_ts)
    # past the boundary, deep in R1, the pair turns complementary again
    assert paper_ray.interaction_crossings == (T_STAR, F(13, 84))


def test_t_star_against_bisection_oracle():
    f = lambda t: oracle.delta(oracle.PAPER_R, oracle.PAPER_I, oracle.PAPER_J, oracle.paper_ray(t))  # noqa: E731
    lo, hi = oracle.bisect_root(f, F(9, 100), F(11, 100), iters=60)
    assert lo <= T_STAR <= hi
    assert f(T_STAR) == 0


def test_paper_ray_crossings_are_exact_zeros(paper, paper_ray):
    for t in paper_ray.interaction_crossings:
        assert delta_voi(*paper, paper_ray.point(t)).delta_voi == 0
        before = [s for s in paper_ray.segments if s.t_hi == t][0]
        after = [s for s in paper_ray.segments if s.t_lo == t][0]
        mid_b, mid_a = (before.t_lo + t) / 2, (t + after.t_hi) / 2
        sb = before.dvoi[0] * mid_b + before.dvoi[1]
        sa = after.dvoi[0] * mid_a + after.dvoi[1]
        assert sb * sa < 0


def test_paper_ray_is_piecewise_linear(paper, paper_ray):
    assert certify_segments(*paper, paper_ray) == []


def test_degenerate_ray(paper, b2):
    scan = ray_scan(*paper, b2, (1, 0, -1), 0)
    assert len(scan.segments) == 1
    assert scan.interaction_crossings == () and scan.breakpoints == ()


@pytest.mark.parametrize(
    "direction, t_max",
    [((0, 0, 0), F(1, 4)), ((1, 0, 0), F(1, 4)), ((1, 0, -1), F(3, 5)), ((1, 0, -1), F(-1))],
)
def test_ray_rejects(paper, b2, direction, t_max):
    with pytest.raises(ValidationError):
        ray_scan(*paper, b2, direction, t_max)


@settings(max_examples=25, deadline=None)
@given(scenarios(max_states=3), st.data())
def test_random_rays_certify(sc, data):
    prob, ch_i, ch_j, origin = sc
    end = data.draw(beliefs(len(origin)))
    if end == origin:
        return
    scan = ray_scan(prob, ch_i, ch_j, origin, [e - o for e, o in zip(end, origin)], 1)
    assert certify_segments(prob, ch_i, ch_j, scan) == []
    for t in scan.interaction_crossings:
        assert delta_voi(prob, ch_i, ch_j, scan.point(t)).delta_voi == 0


def test_breakpoints_cover_dense_sampling():
    """No kink of the interaction is missed: check affinity against a fine sample."""
    rng = random.Random(7)
    cfg = FuzzConfig(seed=7, cases=1, max_states=3, max_actions=4, max_outcomes=3)
    for _ in range(5):
        inst = random_instance(rng, cfg)
        prob, ch_i, ch_j = inst.problem, inst.channel("i"), inst.channel("j")
        a = random_belief(rng, prob.num_states, 12)
        b = random_belief(rng, prob.num_states, 12)
        if a == b:
            continue
        scan = ray_scan(prob, ch_i, ch_j, a, [y - x for x, y in zip(a, b)], 1)
        for k in range(61):
            t = F(k, 60)
            seg = next(s for s in scan.segments if s.t_lo <= t <= s.t_hi)
            assert seg.dvoi[0] * t + seg.dvoi[1] == delta_voi(prob, ch_i, ch_j, scan.point(t)).delta_voi


@pytest.mark.parametrize(
    "x, text",
    [(F(1, 3), "0.333333333333"), (F(2, 3), "0.666666666667"), (F(0), "0"), (F(-77, 32), "-2.40625"),
     (F(1, 8), "0.125"), (F(10**13 + 5, 10), "1000000000000")],
)
def test_decimal_string(x, text):
    assert decimal_string(x) == text


def test_decimal_half_even():
    # 12 significant digits of 0.1234567890125 -> tie resolved to even
    assert decimal_string(F(1234567890125, 10**13)) == "0.123456789012"
    assert decimal_string(F(1234567890135, 10**13)) == "0.123456789014"


def test_grid_csv_golden(paper):
    out = emit_csv(grid_scan(*paper, 4))
    assert out == (GOLDEN / "paper_grid_n4.csv").read_bytes()
    lines = out.decode().splitlines()
    assert lines[0].split(",")[-3:] == ["regime", "argmax_actions", "on_kink"]
    assert len(lines) == 1 + 15


def test_grid_csv_vertices(paper):
    lines = emit_csv(grid_scan(*paper, 1)).decode().splitlines()
    assert len(lines) == 4


def test_ray_csv_golden(paper_ray):
    out = emit_csv(paper_ray)
    assert out == (GOLDEN / "paper_ray.csv").read_bytes()
    kinds = [line.rsplit(",", 1)[1] for line in out.decode().splitlines()[1:]]
    assert "interaction" in kinds and "decision" in kinds


def test_ray_csv_degenerate(paper, b2):
    lines = emit_csv(ray_scan(*paper, b2, (1, 0, -1), 0)).decode().splitlines()
    assert len(lines) == 2


def test_emit_to_sinks(paper_ray):
    raw, text = io.BytesIO(), io.StringIO()
    emit_csv(paper_ray, raw)
    emit_csv(paper_ray, text)
    assert raw.getvalue() == text.getvalue().encode()


def test_grid_scan_type(paper):
    assert isinstance(grid_scan(*paper, 2), GridScan)
