"""
Search for self-consistent wormhole-billiard histories.

Unknowns are the exit data of a ball emerging from mouth A, written in scaled
coordinates ``z = (exit_time / dt, rim_angle, direction - rim_angle, speed / v0)``.
The third coordinate is the direction relative to the outward normal, so the
admissible box is a plain rectangle.  A root of the consistency residual is a
history whose mouth-B entry regenerates exactly the exit data it started from.

:func:`solve_self_consistent` scans a coarse grid, refines promising cells
with a damped Newton iteration on a finite-difference Jacobian, and
deduplicates.  :func:`grid_oracle` is a separate route to the same root set
(finer grid, local minima only, scipy least-squares polish) used to audit the
solver.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Optional

import numpy as np

from .billiard import (
    AnsatzParams,
    BilliardConfig,
    Infeasible,
    SimResult,
    _run,
    _wrap,
    check_ansatz,
    consistency_residual,
    params_of,
    residual_from,
)

log = logging.getLogger(__name__)

TRIVIAL = "trivial"


@dataclass(frozen=True)
class SolverOptions:
    grid: tuple = (20, 8, 8, 8)
    basin_threshold: float = 2.0
    tolerance: float = 1e-10
    dedup_radius: float = 1e-4
    speed_range: tuple = (0.2, 3.0)  # multiples of the initial speed
    max_iter: int = 60
    fd_step: float = 1e-7

    def __post_init__(self):
        g = self.grid
        g = (int(g),) * 4 if np.isscalar(g) else tuple(int(v) for v in g)
        if len(g) != 4 or min(g) < 2:
            raise ValueError("grid needs four resolutions of at least 2")
        object.__setattr__(self, "grid", g)
        if not 0 < self.speed_range[0] < self.speed_range[1]:
            raise ValueError("speed_range must be an increasing positive pair")
        if self.tolerance <= 0 or self.dedup_radius <= 0 or self.basin_threshold <= 0:
            raise ValueError("tolerance, dedup_radius and basin_threshold must be positive")
        if self.dedup_radius <= self.tolerance:
            raise ValueError("dedup_radius must exceed the root tolerance")

    def refined(self, factor: int = 2) -> "SolverOptions":
        return replace(self, grid=tuple(factor * g for g in self.grid))


@dataclass
class ConsistentSolution:
    params: object  # AnsatzParams, or TRIVIAL
    residual_norm: float
    events: list
    trajectory: list
    kind: str = "self-interacting"
    traversals: list = field(default_factory=list)

    @property
    def exit_time(self) -> float:
        return -math.inf if self.params == TRIVIAL else self.params.exit_time


# ---------------------------------------------------------------------------
# scaled coordinates


def to_scaled(c: BilliardConfig, p: AnsatzParams) -> np.ndarray:
    return np.array([
        p.exit_time / c.time_scale,
        _wrap(p.exit_angle),
        _wrap(p.exit_direction - p.exit_angle),
        p.exit_speed / c.speed_scale,
    ])


def from_scaled(c: BilliardConfig, z) -> AnsatzParams:
    t, th, psi, s = (float(v) for v in z)
    th = _wrap(th)
    return AnsatzParams(t * c.time_scale, th, _wrap(th + psi), s * c.speed_scale)


def scaled_distance(z1, z2) -> float:
    d = np.asarray(z1, float) - np.asarray(z2, float)
    d[1] = _wrap(d[1])
    return float(np.linalg.norm(d))


def residual_scaled(c: BilliardConfig, z) -> Optional[np.ndarray]:
    """Residual at scaled point z, or None where it is undefined."""
    try:
        return consistency_residual(c, from_scaled(c, z))
    except Infeasible:
        return None


def grid_axes(c: BilliardConfig, grid, speed_range) -> list[np.ndarray]:
    """Cell-centre samples of the admissible box (rim angle is periodic)."""
    nt, nth, npsi, ns = grid
    t_lo = c.t0 / c.time_scale
    t_hi = (c.t_end - c.time_scale) / c.time_scale

    def centres(lo, hi, n):
        return lo + (np.arange(n) + 0.5) * (hi - lo) / n

    return [
        centres(t_lo, t_hi, nt),
        -math.pi + np.arange(nth) * (2 * math.pi / nth),
        centres(-math.pi / 2, math.pi / 2, npsi),
        centres(speed_range[0], speed_range[1], ns),
    ]


def scan(c: BilliardConfig, grid, speed_range) -> np.ndarray:
    """Residual norm at every grid point; inf where undefined."""
    axes = grid_axes(c, grid, speed_range)
    norms = np.full(tuple(len(a) for a in axes), np.inf)
    for idx in product(*(range(len(a)) for a in axes)):
        z = [axes[k][i] for k, i in enumerate(idx)]
        r = residual_scaled(c, z)
        if r is not None:
            norms[idx] = np.linalg.norm(r)
    return norms


# ---------------------------------------------------------------------------
# refinement


def _fd_jacobian(c, z, r0, h):
    J = np.empty((4, 4))
    for k in range(4):
        e = np.zeros(4)
        e[k] = h
        rp = residual_scaled(c, z + e)
        rm = residual_scaled(c, z - e)
        if rp is not None and rm is not None:
            J[:, k] = (rp - rm) / (2 * h)
        elif rp is not None:
            J[:, k] = (rp - r0) / h
        elif rm is not None:
            J[:, k] = (r0 - rm) / h
        else:
            return None
    return J


def newton_refine(c: BilliardConfig, z0, opts: SolverOptions):
    """Damped Newton from z0; returns (z, residual norm) or None on failure."""
    z = np.array(z0, float)
    r = residual_scaled(c, z)
    if r is None:
        return None
    nr = float(np.linalg.norm(r))
    for _ in range(opts.max_iter):
        if nr <= opts.tolerance:
            break
        J = _fd_jacobian(c, z, r, opts.fd_step)
        if J is None:
            return None
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        lam = 1.0
        while lam > 1e-6:
            zn = z + lam * step
            rn = residual_scaled(c, zn)
            if rn is not None and np.linalg.norm(rn) < nr:
                break
            lam *= 0.5
        else:
            return None
        z, r, nr = zn, rn, float(np.linalg.norm(rn))
    if nr > opts.tolerance:
        return None
    z[1] = _wrap(z[1])
    z[2] = _wrap(z[2])
    return z, nr


def dedup(points, radius):
    """Keep the first of every cluster of points closer than radius."""
    kept = []
    for z, nr in points:
        if all(scaled_distance(z, k) >= radius for k, _ in kept):
            kept.append((z, nr))
    return kept


# ---------------------------------------------------------------------------
# solutions


def _single_traversal(res: SimResult) -> bool:
    return len(res.traversals) == 1 and res.traversals[0].entry_mouth == "B"


def trivial_solution(c: BilliardConfig, opts: SolverOptions) -> Optional[ConsistentSolution]:
    """The undisturbed evolution, if it is globally consistent."""
    res = _run(c, None)
    entries = res.entries("B")
    if not entries:
        return ConsistentSolution(TRIVIAL, 0.0, res.events, res.trajectory, "trivial", res.traversals)
    # close the chain: the continuation must already be present
    tr = entries[0]
    p = params_of(c, tr.exit, tr.exit_time)
    try:
        check_ansatz(c, p)
        res = _run(c, p)
        nr = float(np.linalg.norm(residual_from(c, p, res)))
    except Infeasible:
        return None
    if nr <= opts.tolerance and _single_traversal(res):
        return ConsistentSolution(p, nr, res.events, res.trajectory, "undisturbed", res.traversals)
    return None


def make_solution(c: BilliardConfig, z, opts: SolverOptions) -> Optional[ConsistentSolution]:
    p = from_scaled(c, z)
    res = _run(c, p)
    nr = float(np.linalg.norm(residual_from(c, p, res)))
    if not _single_traversal(res):
        log.info("root at %s needs more than one traversal; outside the ansatz", np.round(z, 6))
        return None
    if not any(e.kind == "collision" for e in res.events):
        kind = "undisturbed"
    else:
        kind = "self-interacting"
    return ConsistentSolution(p, nr, res.events, res.trajectory, kind, res.traversals)


def _sort_key(s: ConsistentSolution):
    if s.params == TRIVIAL:
        return (-math.inf, 0.0, 0.0, 0.0)
    p = s.params
    return (p.exit_time, p.exit_angle, p.exit_direction, p.exit_speed)


def solve_self_consistent(c: BilliardConfig, opts: SolverOptions = SolverOptions()) -> list:
    """All consistent histories found: trivial (if consistent) plus self-interacting roots."""
    out = []
    triv = trivial_solution(c, opts)
    if triv is not None:
        out.append(triv)

    axes = grid_axes(c, opts.grid, opts.speed_range)
    norms = scan(c, opts.grid, opts.speed_range)
    seeds = sorted(zip(*np.nonzero(norms < opts.basin_threshold)), key=lambda idx: norms[idx])
    roots = []
    for idx in seeds:
        z0 = np.array([axes[k][i] for k, i in enumerate(idx)])
        got = newton_refine(c, z0, opts)
        if got is None:
            log.debug("refinement from %s failed", np.round(z0, 4))
            continue
        roots.append(got)
    roots.sort(key=lambda zr: tuple(zr[0]))
    for z, _ in dedup(roots, opts.dedup_radius):
        sol = make_solution(c, z, opts)
        if sol is None:
            continue
        if triv is not None and triv.params != TRIVIAL and scaled_distance(
            to_scaled(c, triv.params), z
        ) < opts.dedup_radius:
            continue
        out.append(sol)
    out.sort(key=_sort_key)
    return out


def local_minima(norms: np.ndarray) -> np.ndarray:
    """Mask of finite grid points no larger than any of their 3**4 - 1 neighbours."""
    padded = np.pad(norms, [(1, 1), (0, 0), (1, 1), (1, 1)], constant_values=np.inf)
    padded = np.concatenate([padded[:, -1:], padded, padded[:, :1]], axis=1)  # rim angle wraps
    best = np.full(norms.shape, np.inf)
    n = norms.shape
    for off in product((0, 1, 2), repeat=4):
        if off == (1, 1, 1, 1):
            continue
        sl = tuple(slice(o, o + n[k]) for k, o in enumerate(off))
        best = np.minimum(best, padded[sl])
    return np.isfinite(norms) & (norms <= best)


def grid_oracle(c: BilliardConfig, opts: SolverOptions, factor: int = 2) -> list:
    """
    Independent root census: a grid ``factor`` times finer than the solver's,
    seeded only at discrete local minima of the residual norm and polished
    with scipy's trust-region least squares.  Returns scaled root vectors
    inside the ansatz, sorted by exit time.
    """
    from scipy.optimize import least_squares

    fine = opts.refined(factor)
    axes = grid_axes(c, fine.grid, fine.speed_range)
    norms = scan(c, fine.grid, fine.speed_range)
    seeds = [idx for idx in zip(*np.nonzero(local_minima(norms))) if norms[idx] < fine.basin_threshold]

    penalty = np.full(4, 1e3)

    def fun(z):
        r = residual_scaled(c, z)
        return penalty if r is None else r

    found = []
    for idx in seeds:
        z0 = np.array([axes[k][i] for k, i in enumerate(idx)])
        sol = least_squares(fun, z0, method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=400)
        z = sol.x
        r = residual_scaled(c, z)
        if r is None or np.linalg.norm(r) > fine.tolerance:
            continue
        z[1], z[2] = _wrap(z[1]), _wrap(z[2])
        res = _run(c, from_scaled(c, z))
        if _single_traversal(res):
            found.append((z, float(np.linalg.norm(r))))
    found.sort(key=lambda zr: tuple(zr[0]))
    return [z for z, _ in dedup(found, fine.dedup_radius)]


def match_roots(a, b, radius):
    """Greedy one-to-one matching; returns (pairs, unmatched_a, unmatched_b)."""
    pairs, used = [], set()
    left = []
    for i, za in enumerate(a):
        best = None
        for j, zb in enumerate(b):
            if j in used:
                continue
            d = scaled_distance(za, zb)
            if d < radius and (best is None or d < best[1]):
                best = (j, d)
        if best is None:
            left.append(i)
        else:
            used.add(best[0])
            pairs.append((i, best[0]))
    return pairs, left, [j for j in range(len(b)) if j not in used]
