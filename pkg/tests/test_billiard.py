import math

import numpy as np
import pytest

from geonlogic import billiard as bl
from geonlogic.billiard import (
    AnsatzParams,
    BallState,
    BilliardConfig,
    ConfigError,
    ContactError,
    Infeasible,
    WormholeSpec,
)
from geonlogic.configs import billiard_from_config, read_json

W = WormholeSpec((2.0, 2.5), (2.0, -2.5), 1.0, 5.0)
LOOP = AnsatzParams(1.5, math.pi, -0.75 * math.pi, math.sqrt(2))


@pytest.fixture(scope="module")
def demo(configs):
    return billiard_from_config(read_json(configs / "billiard-demo.json"))[0]


def world(pos, vel, w=W, horizon=16.0, **kw):
    return BilliardConfig(w, BallState(pos, vel, **kw), horizon, (-8.0, 8.0, -8.0, 8.0))


def ray_circle(p, v, centre, reach):
    """First time |p + v t - centre| = reach, from numpy's polynomial roots."""
    d = np.subtract(p, centre)
    roots = np.roots([v @ v, 2 * d @ v, d @ d - reach**2])
    real = sorted(r.real for r in roots if abs(r.imag) < 1e-12 and r.real >= 0)
    return real[0] if real else None


def test_advance_free():
    s = bl.advance_free(BallState((0, 0), (1, 2)), 0.5)
    assert s.position == (0.5, 1.0) and s.velocity == (1.0, 2.0)
    with pytest.raises(ValueError):
        bl.advance_free(s, -1)


def test_head_on_equal_masses_swap():
    a, b = bl.collide_elastic(BallState((0, 0), (1, 0)), BallState((0.5, 0), (0, 0)))
    assert a.velocity == pytest.approx((0, 0), abs=1e-15)
    assert b.velocity == pytest.approx((1, 0), abs=1e-15)


def test_oblique_45_degree_impact():
    d = 0.5 / math.sqrt(2)
    a, b = bl.collide_elastic(BallState((0, 0), (1, 0)), BallState((d, d), (0, 0)))
    assert a.velocity == pytest.approx((0.5, -0.5), abs=1e-15)
    assert b.velocity == pytest.approx((0.5, 0.5), abs=1e-15)


def test_unequal_masses_conserve():
    s1 = BallState((0, 0), (2, 1), mass=1.0)
    s2 = BallState((0.3, 0.4), (-1, 0.5), mass=3.0)
    a, b = bl.collide_elastic(s1, s2)
    p0 = np.add(s1.velocity, np.multiply(3, s2.velocity))
    p1 = np.add(a.velocity, np.multiply(3, b.velocity))
    assert np.allclose(p0, p1, rtol=0, atol=1e-14)
    e = lambda s: 0.5 * s.mass * s.speed**2
    assert e(a) + e(b) == pytest.approx(e(s1) + e(s2), rel=1e-14)


def test_collision_rejects_gap_and_receding():
    with pytest.raises(ContactError, match="contact"):
        bl.collide_elastic(BallState((0, 0), (1, 0)), BallState((0.6, 0), (0, 0)))
    with pytest.raises(ContactError, match="receding"):
        bl.collide_elastic(BallState((0, 0), (-1, 0)), BallState((0.5, 0), (0, 0)))


def test_grazing_contact_is_a_miss():
    # relative motion exactly tangent at distance 2r
    assert bl._first_contact(0.0, 0.5, 1.0, 0.0, 0.5) is None
    assert bl._first_contact(-2.0, 0.4, 1.0, 0.0, 0.5) == pytest.approx(2.0 - 0.3)


def test_wormhole_map_identity_frame():
    entry = BallState((1.0, -2.5), (1.0, 0.0))
    out, t = bl.wormhole_map(W, entry, 7.0)
    assert t == 2.0
    assert out.position == pytest.approx((1.0, 2.5))
    assert out.velocity == pytest.approx((-1.0, 0.0))


def test_wormhole_map_preserves_speed():
    s = 3.7
    ang = 0.3
    c = W.mouth_b
    entry = BallState((c[0] + math.cos(ang), c[1] + math.sin(ang)), (-s * math.cos(0.1), -s * math.sin(0.1)))
    w = WormholeSpec(W.mouth_a, W.mouth_b, 1.0, 5.0, frame_rotation=0.7, frame_reflect=True)
    out, t = bl.wormhole_map(w, entry, 9.0)
    assert out.speed == pytest.approx(s, rel=1e-15)
    assert t == 9.0 - 5.0
    assert math.dist(out.position, w.mouth_a) == pytest.approx(1.0)
    back, t2 = bl.wormhole_map_forward(w, replace_velocity(out, -1), t)
    assert t2 == 9.0


def replace_velocity(s, k):
    return BallState(s.position, (k * s.velocity[0], k * s.velocity[1]), s.radius, s.mass)


def test_wormhole_rejects_bad_specs():
    with pytest.raises(ConfigError):
        WormholeSpec((0, 0), (5, 0), 1.0, 0.0)
    with pytest.raises(ConfigError):
        WormholeSpec((0, 0), (1, 0), 1.0, 1.0)
    with pytest.raises(ValueError, match="rim"):
        bl.wormhole_map(W, BallState((0, 0), (1, 0)), 1.0)
    with pytest.raises(ValueError, match="ingoing"):
        bl.wormhole_map(W, BallState((1.0, -2.5), (-1.0, 0.0)), 1.0)


def test_config_validation():
    with pytest.raises(ConfigError, match="horizon"):
        world((-6, 0), (1, 0), horizon=4.0)
    with pytest.raises(ConfigError, match="fit"):
        world((-6, 0), (1, 0), radius=1.5)
    with pytest.raises(ConfigError, match="outside"):
        world((-9, 0), (1, 0))
    with pytest.raises(ConfigError, match="moving"):
        world((-6, 0), (0, 0))


def test_free_path_leaves_domain():
    res = bl.simulate(world((-6, 0), (1, 0)))
    assert [e.kind for e in res.events] == ["domain_exit"]
    assert res.events[0].time == pytest.approx(14.0)


def test_path_crossing_mouth_b():
    c = world((-6.0, -2.5), (1.0, 0.0))
    res = bl.simulate(c)
    kinds = [(e.kind, e.mouth) for e in res.events]
    assert ("mouth_entry", "B") in kinds and ("mouth_exit", "A") in kinds
    entry = [e for e in res.events if e.kind == "mouth_entry"][0]
    exit_ = [e for e in res.events if e.kind == "mouth_exit"][0]
    t_hit = ray_circle(np.array([-6.0, -2.5]), np.array([1.0, 0.0]), np.array(W.mouth_b), 1.0)
    assert entry.time == pytest.approx(t_hit, abs=1e-12) == pytest.approx(7.0)
    assert exit_.time == entry.time - 5.0
    tr = res.entries("B")[0]
    assert tr.exit.position == pytest.approx((1.0, 2.5))
    assert tr.exit.velocity == pytest.approx((-1.0, 0.0))
    done = [e for e in res.events if e.kind == "domain_exit"]
    assert [e.time for e in done] == pytest.approx([11.0])


@pytest.mark.parametrize("seed", range(20))
def test_mouth_entry_time_matches_ray_circle(seed):
    rng = np.random.default_rng(seed)
    p = rng.uniform(-7, -3, 2)
    target = np.array(W.mouth_b) + rng.uniform(-0.8, 0.8, 2)
    v = (target - p) / np.linalg.norm(target - p) * rng.uniform(0.5, 2)
    c = world(tuple(p), tuple(v))
    res = bl._run(c, None, stop_at_b=True)
    t_expect = min(
        t for t in (
            ray_circle(p, v, np.array(W.mouth_b), 1.0),
            ray_circle(p, v, np.array(W.mouth_a), 1.0),
        ) if t is not None
    )
    first = [e for e in res.events if e.kind == "mouth_entry"][0]
    assert first.time == pytest.approx(t_expect, abs=1e-9)


def test_known_looping_root_has_tiny_residual(demo):
    r = bl.consistency_residual(demo, LOOP)
    assert np.linalg.norm(r) < 1e-9


def test_known_root_history(demo):
    res = bl.simulate(demo, LOOP)
    col = [e for e in res.events if e.kind == "collision"]
    assert len(col) == 1 and col[0].time == pytest.approx(4.0)
    (tr,) = res.traversals
    assert tr.entry_mouth == "B" and tr.entry_time == pytest.approx(6.5)
    assert tr.exit_time == tr.entry_time - 5.0


def test_infeasible_ansatz(demo):
    with pytest.raises(Infeasible):
        bl.consistency_residual(demo, AnsatzParams(1.5, 0.0, math.pi, 1.0))  # pointing inward
    with pytest.raises(Infeasible):
        bl.consistency_residual(demo, AnsatzParams(-1.0, 0.0, 0.0, 1.0))
    with pytest.raises(Infeasible):
        bl.consistency_residual(demo, AnsatzParams(1.5, math.pi / 2, math.pi / 2, 1.0))  # never reaches B


def test_residual_is_continuous_near_root(demo):
    base = bl.consistency_residual(demo, LOOP)
    for h in (1e-6, 1e-7, 1e-8):
        p = AnsatzParams(LOOP.exit_time + h, LOOP.exit_angle, LOOP.exit_direction, LOOP.exit_speed)
        assert np.linalg.norm(bl.consistency_residual(demo, p) - base) < 100 * h


def test_deterministic(demo):
    a = bl.simulate(demo, LOOP)
    b = bl.simulate(demo, LOOP)
    assert a.trajectory == b.trajectory and a.events == b.events


def test_causal_bookkeeping(demo):
    res = bl.simulate(demo, LOOP)
    times = [e.time for e in res.events]
    assert times == sorted(times)
    # the emergent ball is its own continuation: one lineage shared by ball 1
    assert res.lineage[1] == 1
    for tr in res.traversals:
        assert tr.exit.speed == pytest.approx(tr.entry.speed, rel=1e-15)


def test_runaway_guard():
    c = BilliardConfig(W, BallState((-6, 0), (1, 0)), 16.0, (-8, 8, -8, 8), max_events=0)
    with pytest.raises(bl.SimulationError):
        bl.simulate(c, LOOP)
