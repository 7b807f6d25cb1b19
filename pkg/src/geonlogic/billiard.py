"""
Event-driven billiards in the plane with a time-shifted wormhole.

Balls are hard disks moving inertially between events.  The wormhole has two
circular mouths.  A ball whose centre crosses the rim of mouth B reappears on
the rim of mouth A a fixed time ``time_shift`` *earlier*; crossing mouth A
sends it the other way, ``time_shift`` later.  Events are found in closed form
(every contact reduces to a quadratic in time) and processed in time order.

The self-consistency question lives in :func:`consistency_residual`: release an
extra ball from mouth A with trial exit data, run the world forward, and
compare what eventually falls into mouth B (mapped back through the wormhole)
with the trial data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

TIME_TOL = 1e-12
GRAZE_TOL = 1e-12
RIM_TOL = 1e-9
MAX_EVENTS = 1000

COLLISION = "collision"
MOUTH_ENTRY = "mouth_entry"
MOUTH_EXIT = "mouth_exit"
DOMAIN_EXIT = "domain_exit"
HORIZON = "horizon"


class ConfigError(ValueError):
    pass


class SimulationError(RuntimeError):
    pass


class ContactError(ValueError):
    pass


class Infeasible(Exception):
    """The trial exit data never lead to a mouth-B entry inside the horizon."""


def _wrap(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    w = math.remainder(a, 2 * math.pi)
    return math.pi if w == -math.pi else w


@dataclass(frozen=True)
class WormholeSpec:
    mouth_a: tuple
    mouth_b: tuple
    radius: float
    time_shift: float
    frame_rotation: float = 0.0
    frame_reflect: bool = False

    def __post_init__(self):
        object.__setattr__(self, "mouth_a", tuple(float(v) for v in self.mouth_a))
        object.__setattr__(self, "mouth_b", tuple(float(v) for v in self.mouth_b))
        if self.radius <= 0:
            raise ConfigError("mouth radius must be positive")
        if not self.time_shift > 0:
            raise ConfigError("time_shift must be positive")
        if math.dist(self.mouth_a, self.mouth_b) <= 2 * self.radius:
            raise ConfigError("wormhole mouths overlap")
        Q = self.frame
        if not np.allclose(Q.T @ Q, np.eye(2), rtol=0, atol=1e-12):
            raise ConfigError("frame_map is not an isometry")

    @property
    def frame(self) -> np.ndarray:
        """Orthogonal matrix taking B-relative to A-relative coordinates."""
        c, s = math.cos(self.frame_rotation), math.sin(self.frame_rotation)
        R = np.array([[c, -s], [s, c]])
        if self.frame_reflect:
            R = R @ np.diag([1.0, -1.0])
        return R

    def center(self, mouth: str) -> tuple:
        return self.mouth_a if mouth == "A" else self.mouth_b


@dataclass(frozen=True)
class BallState:
    position: tuple
    velocity: tuple
    radius: float = 0.25
    mass: float = 1.0
    birth_time: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "position", (float(self.position[0]), float(self.position[1])))
        object.__setattr__(self, "velocity", (float(self.velocity[0]), float(self.velocity[1])))
        if self.radius <= 0 or self.mass <= 0:
            raise ConfigError("ball radius and mass must be positive")

    @property
    def speed(self) -> float:
        return math.hypot(*self.velocity)


@dataclass(frozen=True)
class BilliardConfig:
    wormhole: WormholeSpec
    initial_ball: BallState
    horizon: float
    domain: tuple  # (xmin, xmax, ymin, ymax)
    max_events: int = MAX_EVENTS

    def __post_init__(self):
        if not self.horizon > self.wormhole.time_shift:
            raise ConfigError("horizon must exceed the wormhole time shift")
        if self.initial_ball.radius >= self.wormhole.radius:
            raise ConfigError("ball does not fit through a mouth")
        xmin, xmax, ymin, ymax = self.domain
        x, y = self.initial_ball.position
        if not (xmin < x < xmax and ymin < y < ymax):
            raise ConfigError("initial ball lies outside the domain")
        if self.initial_ball.speed == 0:
            raise ConfigError("initial ball must be moving")

    @property
    def t0(self) -> float:
        return self.initial_ball.birth_time

    @property
    def t_end(self) -> float:
        return self.initial_ball.birth_time + self.horizon

    # characteristic scales for dimensionless residuals
    @property
    def time_scale(self) -> float:
        return self.wormhole.time_shift

    @property
    def length_scale(self) -> float:
        return self.wormhole.radius

    @property
    def speed_scale(self) -> float:
        return self.initial_ball.speed


@dataclass(frozen=True)
class AnsatzParams:
    exit_time: float
    exit_angle: float
    exit_direction: float
    exit_speed: float

    def as_array(self) -> np.ndarray:
        return np.array([self.exit_time, self.exit_angle, self.exit_direction, self.exit_speed])


@dataclass(frozen=True)
class Event:
    time: float
    kind: str
    participants: tuple
    mouth: Optional[str] = None


@dataclass(frozen=True)
class Traversal:
    ball: int
    lineage: int
    entry_mouth: str
    entry_time: float
    entry: BallState
    exit_time: float
    exit: BallState


@dataclass
class SimResult:
    events: list
    trajectory: list  # (ball, lineage, t, x, y, vx, vy)
    traversals: list
    emergent: Optional[AnsatzParams] = None
    lineage: dict = field(default_factory=dict)

    def entries(self, mouth: str = "B") -> list:
        return [tr for tr in self.traversals if tr.entry_mouth == mouth]


def advance_free(s: BallState, dt: float) -> BallState:
    if dt < 0:
        raise ValueError("dt must be non-negative")
    (x, y), (vx, vy) = s.position, s.velocity
    return replace(s, position=(x + vx * dt, y + vy * dt))


def collide_elastic(s1: BallState, s2: BallState, tol: float = 1e-9):
    """Frictionless elastic collision of two touching disks."""
    dx = s2.position[0] - s1.position[0]
    dy = s2.position[1] - s1.position[1]
    dist = math.hypot(dx, dy)
    if abs(dist - (s1.radius + s2.radius)) > tol * (s1.radius + s2.radius):
        raise ContactError(f"balls not in contact (centre distance {dist!r})")
    nx, ny = dx / dist, dy / dist
    rvx = s1.velocity[0] - s2.velocity[0]
    rvy = s1.velocity[1] - s2.velocity[1]
    closing = rvx * nx + rvy * ny
    if closing < 0:
        raise ContactError("balls are receding")
    m1, m2 = s1.mass, s2.mass
    j1 = 2 * m2 / (m1 + m2) * closing
    j2 = 2 * m1 / (m1 + m2) * closing
    v1 = (s1.velocity[0] - j1 * nx, s1.velocity[1] - j1 * ny)
    v2 = (s2.velocity[0] + j2 * nx, s2.velocity[1] + j2 * ny)
    return replace(s1, velocity=v1), replace(s2, velocity=v2)


def _on_rim(w: WormholeSpec, mouth: str, pos, tol=RIM_TOL) -> tuple:
    c = w.center(mouth)
    rx, ry = pos[0] - c[0], pos[1] - c[1]
    if abs(math.hypot(rx, ry) - w.radius) > tol * w.radius:
        raise ValueError(f"position is not on the rim of mouth {mouth}")
    return rx, ry


def _traverse(w: WormholeSpec, entry: BallState, entry_time: float, src: str):
    dst = "A" if src == "B" else "B"
    rx, ry = _on_rim(w, src, entry.position)
    vx, vy = entry.velocity
    if rx * vx + ry * vy >= 0:
        raise ValueError(f"velocity is not ingoing at mouth {src}")
    Q = w.frame if src == "B" else w.frame.T
    r = Q @ (rx, ry)
    v = Q @ (vx, vy)
    n = r / math.hypot(r[0], r[1])
    v = v - 2 * (v @ n) * n  # inward -> outward
    c = w.center(dst)
    pos = (c[0] + w.radius * n[0], c[1] + w.radius * n[1])
    t = entry_time - w.time_shift if src == "B" else entry_time + w.time_shift
    out = replace(entry, position=pos, velocity=(float(v[0]), float(v[1])), birth_time=t)
    return out, t


def wormhole_map(w: WormholeSpec, entry: BallState, entry_time: float):
    """Send a ball entering mouth B back through mouth A; returns (state, exit_time)."""
    return _traverse(w, entry, entry_time, "B")


def wormhole_map_forward(w: WormholeSpec, entry: BallState, entry_time: float):
    """Mouth A to mouth B, time_shift later."""
    return _traverse(w, entry, entry_time, "A")


def exit_state(c: BilliardConfig, p: AnsatzParams) -> BallState:
    w = c.wormhole
    ax, ay = w.mouth_a
    pos = (ax + w.radius * math.cos(p.exit_angle), ay + w.radius * math.sin(p.exit_angle))
    vel = (p.exit_speed * math.cos(p.exit_direction), p.exit_speed * math.sin(p.exit_direction))
    b = c.initial_ball
    return BallState(pos, vel, b.radius, b.mass, p.exit_time)


def params_of(c: BilliardConfig, s: BallState, t: float) -> AnsatzParams:
    ax, ay = c.wormhole.mouth_a
    return AnsatzParams(
        t,
        math.atan2(s.position[1] - ay, s.position[0] - ax),
        math.atan2(s.velocity[1], s.velocity[0]),
        s.speed,
    )


# ---------------------------------------------------------------------------
# event-time primitives


def _first_contact(dx, dy, wx, wy, reach):
    """Earliest t >= 0 with |d + w t| = reach while approaching, else None."""
    a = wx * wx + wy * wy
    b = 2.0 * (dx * wx + dy * wy)
    if a == 0.0 or b >= 0.0:
        return None
    c = dx * dx + dy * dy - reach * reach
    disc = b * b - 4.0 * a * c
    if disc <= GRAZE_TOL * b * b:
        return None
    # numerically stable smaller root
    q = -0.5 * (b - math.sqrt(disc))
    t = c / q
    if t < -TIME_TOL:
        return None
    return max(t, 0.0)


class _Ball:
    __slots__ = ("id", "lineage", "x", "y", "vx", "vy", "t", "r", "m", "alive")

    def __init__(self, bid, lineage, s: BallState, t):
        self.id, self.lineage = bid, lineage
        self.x, self.y = s.position
        self.vx, self.vy = s.velocity
        self.t, self.r, self.m = t, s.radius, s.mass
        self.alive = True

    def at(self, t):
        dt = t - self.t
        return self.x + self.vx * dt, self.y + self.vy * dt

    def move_to(self, t):
        self.x, self.y = self.at(t)
        self.t = t

    def state(self) -> BallState:
        return BallState((self.x, self.y), (self.vx, self.vy), self.r, self.m, self.t)

    def record(self):
        return (self.id, self.lineage, self.t, self.x, self.y, self.vx, self.vy)


def _run(c: BilliardConfig, emergent: Optional[AnsatzParams], stop_at_b: bool = False) -> SimResult:
    w = c.wormhole
    R = w.radius
    xmin, xmax, ymin, ymax = c.domain
    t_end = c.t_end
    births = [(c.t0, 0, 0, c.initial_ball, None)]  # (time, id, lineage, state, mouth)
    if emergent is not None:
        births.append((emergent.exit_time, 1, 1, exit_state(c, emergent), "A"))
    next_id = len(births)
    balls: list[_Ball] = []
    events, traj, traversals = [], [], []
    lineage = {}
    resolved = emergent is None
    mouths = (("B",) + w.mouth_b, ("A",) + w.mouth_a)

    now = min(b[0] for b in births)
    while True:
        if len(events) > c.max_events:
            raise SimulationError(f"more than {c.max_events} events (runaway)")
        # earliest event wins; ties go to lower priority, then lower ids
        bt, bp, bk, kind, payload = t_end, 9, (), HORIZON, None
        for birth in births:
            if (birth[0], 0, (birth[1],)) < (bt, bp, bk):
                bt, bp, bk, kind, payload = birth[0], 0, (birth[1],), MOUTH_EXIT, birth
        alive = [b for b in balls if b.alive]
        for i, b1 in enumerate(alive):
            x1, y1 = b1.at(now)
            for b2 in alive[i + 1:]:
                x2, y2 = b2.at(now)
                dt = _first_contact(x2 - x1, y2 - y1, b2.vx - b1.vx, b2.vy - b1.vy, b1.r + b2.r)
                if dt is not None:
                    cand = (now + dt, 1, (b1.id, b2.id))
                    if cand < (bt, bp, bk):
                        bt, bp, bk, kind, payload = cand + (COLLISION, (b1, b2))
            for mouth, cx, cy in mouths:
                dt = _first_contact(x1 - cx, y1 - cy, b1.vx, b1.vy, R)
                if dt is not None:
                    cand = (now + dt, 2, (b1.id, mouth))
                    if cand < (bt, bp, bk):
                        bt, bp, bk, kind, payload = cand + (MOUTH_ENTRY, (b1, mouth))
            dt = _box_exit(x1, y1, b1.vx, b1.vy, xmin, xmax, ymin, ymax)
            if dt is not None:
                cand = (now + dt, 3, (b1.id,))
                if cand < (bt, bp, bk):
                    bt, bp, bk, kind, payload = cand + (DOMAIN_EXIT, b1)

        t = bt
        if kind == HORIZON:
            for b in alive:
                b.move_to(t_end)
                traj.append(b.record())
            break
        now = t
        if kind == MOUTH_EXIT:
            _, bid, lin, st, mouth = payload
            births = [b for b in births if b[1] != bid]
            b = _Ball(bid, lin, st, t)
            balls.append(b)
            lineage[bid] = lin
            traj.append(b.record())
            if mouth is not None:
                events.append(Event(t, MOUTH_EXIT, (bid,), mouth))
        elif kind == COLLISION:
            b1, b2 = payload
            b1.move_to(t)
            b2.move_to(t)
            s1, s2 = collide_elastic(b1.state(), b2.state(), tol=1e-6)
            b1.vx, b1.vy = s1.velocity
            b2.vx, b2.vy = s2.velocity
            traj.append(b1.record())
            traj.append(b2.record())
            events.append(Event(t, COLLISION, (b1.id, b2.id)))
        elif kind == MOUTH_ENTRY:
            b, mouth = payload
            b.move_to(t)
            b.alive = False
            traj.append(b.record())
            events.append(Event(t, MOUTH_ENTRY, (b.id,), mouth))
            # snap exactly onto the rim before mapping
            cx, cy = w.center(mouth)
            rx, ry = b.x - cx, b.y - cy
            k = R / math.hypot(rx, ry)
            entry = BallState((cx + rx * k, cy + ry * k), (b.vx, b.vy), b.r, b.m, t)
            out, t_out = _traverse(w, entry, t, mouth)
            traversals.append(Traversal(b.id, b.lineage, mouth, t, entry, t_out, out))
            if mouth == "B":
                if not resolved:
                    # the emergent ball is this ball's continuation
                    resolved = True
                    lineage[1] = b.lineage
                    for bb in balls:
                        if bb.id == 1:
                            bb.lineage = b.lineage
                if stop_at_b:
                    break
            else:
                births.append((t_out, next_id, b.lineage, out, "B"))
                next_id += 1
        elif kind == DOMAIN_EXIT:
            b = payload
            b.move_to(t)
            b.alive = False
            traj.append(b.record())
            events.append(Event(t, DOMAIN_EXIT, (b.id,)))
        if not births and not any(b.alive for b in balls):
            break

    # lineage may have been resolved after records were written
    traj = [(r[0], lineage.get(r[0], r[1])) + r[2:] for r in traj]
    traj.sort(key=lambda r: (r[0], r[2]))
    events.sort(key=lambda e: (e.time, e.participants))
    return SimResult(events, traj, traversals, emergent, lineage)


def _box_exit(x, y, vx, vy, xmin, xmax, ymin, ymax):
    ts = []
    if vx > 0:
        ts.append((xmax - x) / vx)
    elif vx < 0:
        ts.append((xmin - x) / vx)
    if vy > 0:
        ts.append((ymax - y) / vy)
    elif vy < 0:
        ts.append((ymin - y) / vy)
    if not ts:
        return None
    return max(min(ts), 0.0)


def simulate(c: BilliardConfig, emergent: Optional[AnsatzParams] = None) -> SimResult:
    """
    Run the world forward from the initial ball (plus an optional emergent ball).

    Without an emergent ball, a mouth-B entry needs a continuation that starts
    in the past.  In that case the history is recomputed once with that
    continuation present from its exit time; the returned log then carries the
    entry, the earlier exit and the continuation from mouth A.
    """
    res = _run(c, emergent)
    if emergent is None and res.entries("B"):
        tr = res.entries("B")[0]
        res = _run(c, params_of(c, tr.exit, tr.exit_time))
    return res


def first_b_entry(res: SimResult, after: float = -math.inf) -> Optional[Traversal]:
    for tr in res.traversals:
        if tr.entry_mouth == "B" and tr.entry_time >= after:
            return tr
    return None


def residual_from(c: BilliardConfig, p: AnsatzParams, res: SimResult) -> np.ndarray:
    tr = first_b_entry(res)
    if tr is None:
        raise Infeasible("no mouth-B entry within the horizon")
    q = params_of(c, tr.exit, tr.exit_time)
    return np.array([
        (q.exit_time - p.exit_time) / c.time_scale,
        _wrap(q.exit_angle - p.exit_angle),
        _wrap(q.exit_direction - p.exit_direction),
        (q.exit_speed - p.exit_speed) / c.speed_scale,
    ])


def check_ansatz(c: BilliardConfig, p: AnsatzParams) -> None:
    if not p.exit_speed > 0:
        raise Infeasible("exit speed must be positive")
    if not c.t0 <= p.exit_time < c.t_end:
        raise Infeasible("exit time outside the simulation window")
    # must leave mouth A outward
    if math.cos(p.exit_direction - p.exit_angle) <= 0:
        raise Infeasible("exit direction is not outgoing")
    ax, ay = c.wormhole.mouth_a
    R = c.wormhole.radius
    ex, ey = ax + R * math.cos(p.exit_angle), ay + R * math.sin(p.exit_angle)
    b = c.initial_ball
    dt = p.exit_time - c.t0
    mx, my = b.position[0] + b.velocity[0] * dt, b.position[1] + b.velocity[1] * dt
    if math.hypot(mx - ex, my - ey) < 2 * b.radius:
        raise Infeasible("emergent ball overlaps the main ball at birth")


def consistency_residual(c: BilliardConfig, p: AnsatzParams) -> np.ndarray:
    """Scaled mismatch between trial exit data and what comes back through mouth B."""
    check_ansatz(c, p)
    return residual_from(c, p, _run(c, p, stop_at_b=True))
