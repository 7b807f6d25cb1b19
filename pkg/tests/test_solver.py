import math

import numpy as np
import pytest

from geonlogic import billiard as bl
from geonlogic.configs import billiard_from_config, read_json
from geonlogic.solver import (
    TRIVIAL,
    SolverOptions,
    dedup,
    from_scaled,
    local_minima,
    match_roots,
    scaled_distance,
    solve_self_consistent,
    to_scaled,
    trivial_solution,
)

# roots found by an exhaustive collision-window search, independent of the solver
LOOP_Z = (0.3, math.pi, math.pi / 4, math.sqrt(2))
DEFLECT_Z = (0.421568, 3.098106, 0.732763, 1.344027)


@pytest.fixture(scope="module")
def demo(configs):
    return billiard_from_config(read_json(configs / "billiard-demo.json"))


@pytest.fixture(scope="module")
def demo_solutions(demo):
    c, opts = demo
    return solve_self_consistent(c, opts)


def test_demo_has_trivial_and_two_self_interacting(demo_solutions):
    kinds = [s.kind for s in demo_solutions]
    assert kinds == ["trivial", "self-interacting", "self-interacting"]
    assert demo_solutions[0].params == TRIVIAL


def test_demo_roots_match_brute_force_values(demo, demo_solutions):
    c, opts = demo
    zs = [to_scaled(c, s.params) for s in demo_solutions[1:]]
    assert scaled_distance(zs[0], LOOP_Z) < 1e-8
    assert scaled_distance(zs[1], DEFLECT_Z) < 1e-5


def test_solutions_are_sound_on_reevaluation(demo, demo_solutions):
    c, _ = demo
    for s in demo_solutions[1:]:
        assert np.linalg.norm(bl.consistency_residual(c, s.params)) < 1e-9
        res = bl.simulate(c, s.params)
        assert len(res.traversals) == 1 and res.traversals[0].entry_mouth == "B"
        assert sum(e.kind == "collision" for e in res.events) == 1
        (tr,) = res.traversals
        exits = [e for e in res.events if e.kind == "mouth_exit" and e.mouth == "A"]
        # the emergent exit is the trial data; the entry regenerates it up to the root residual
        dt = c.wormhole.time_shift
        assert [e.time for e in exits] == pytest.approx([tr.entry_time - dt], abs=1e-9 * dt)
        assert tr.exit_time == tr.entry_time - dt


def test_sorted_by_exit_time(demo_solutions):
    times = [s.exit_time for s in demo_solutions]
    assert times == sorted(times)


def test_far_mouths_only_trivial(configs):
    c, opts = billiard_from_config(read_json(configs / "billiard-far-mouths.json"))
    sols = solve_self_consistent(c, opts)
    assert len(sols) == 1 and sols[0].params == TRIVIAL


def test_undisturbed_crossing_is_reported_once():
    w = bl.WormholeSpec((2.0, 2.5), (2.0, -2.5), 1.0, 5.0)
    c = bl.BilliardConfig(w, bl.BallState((-6.0, -2.5), (1.0, 0.0)), 16.0, (-8, 8, -8, 8))
    triv = trivial_solution(c, SolverOptions())
    assert triv.kind == "undisturbed"
    assert triv.params.exit_time == pytest.approx(2.0)


def test_scaled_round_trip(demo):
    c, _ = demo
    z = np.array(DEFLECT_Z)
    assert scaled_distance(to_scaled(c, from_scaled(c, z)), z) < 1e-14
    assert scaled_distance((0, math.pi - 1e-3, 0, 1), (0, -math.pi + 1e-3, 0, 1)) == pytest.approx(2e-3)


def test_dedup_keeps_first_of_cluster():
    pts = [(np.array([0.0, 0, 0, 1]), 1e-12), (np.array([1e-6, 0, 0, 1]), 1e-13), (np.array([1.0, 0, 0, 1]), 0)]
    kept = dedup(pts, 1e-4)
    assert len(kept) == 2 and kept[0][1] == 1e-12


def test_local_minima_wraps_rim_angle():
    g = np.full((3, 4, 3, 3), 5.0)
    g[1, 0, 1, 1] = 1.0
    g[1, 3, 1, 1] = 0.5  # neighbour of index 0 through the wrap
    mask = local_minima(g)
    assert mask[1, 3, 1, 1] and not mask[1, 0, 1, 1]
    g[0, 0, 0, 0] = np.inf
    assert not local_minima(g)[0, 0, 0, 0]


def test_match_roots_one_to_one():
    a = [np.array([0.0, 0, 0, 1]), np.array([1.0, 0, 0, 1])]
    b = [np.array([1.0 + 1e-6, 0, 0, 1]), np.array([0.0, 0, 0, 1]), np.array([5.0, 0, 0, 1])]
    pairs, la, lb = match_roots(a, b, 1e-4)
    assert sorted(pairs) == [(0, 1), (1, 0)] and la == [] and lb == [2]


def test_options_validation():
    assert SolverOptions(grid=6).grid == (6, 6, 6, 6)
    with pytest.raises(ValueError):
        SolverOptions(grid=(4, 4, 4))
    with pytest.raises(ValueError):
        SolverOptions(tolerance=1e-3, dedup_radius=1e-4)
    assert SolverOptions(grid=(3, 4, 5, 6)).refined().grid == (6, 8, 10, 12)
