"""Loading the JSON config files for universes and billiard runs."""

from __future__ import annotations

import json
import math
from pathlib import Path

from .billiard import MAX_EVENTS, BallState, BilliardConfig, ConfigError, WormholeSpec
from .manifolds import build_universe, contexts_from_config
from .solver import SolverOptions


def read_json(path) -> dict:
    text = Path(path).read_text()
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: line {e.lineno}: {e.msg}") from None
    if not isinstance(d, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return d


def universe_from_config(cfg: dict):
    contexts, residual = contexts_from_config(cfg)
    return build_universe(contexts, residual)


def _frame(spec) -> tuple[float, bool]:
    if spec in (None, "identity"):
        return 0.0, False
    if isinstance(spec, dict):
        unknown = set(spec) - {"rotation", "reflect"}
        if unknown:
            raise ConfigError(f"unknown frame_map keys {sorted(unknown)}")
        return float(spec.get("rotation", 0.0)), bool(spec.get("reflect", False))
    raise ConfigError(f"frame_map must be 'identity' or an object, got {spec!r}")


def billiard_from_config(cfg: dict, overrides: dict | None = None):
    """Returns (BilliardConfig, SolverOptions); overrides replace solver keys."""
    try:
        wh = cfg["wormhole"]
        ball = cfg["ball"]
        rot, refl = _frame(wh.get("frame_map"))
        w = WormholeSpec(
            tuple(wh["mouth_a"]), tuple(wh["mouth_b"]), float(wh["radius"]), float(wh["dt"]), rot, refl
        )
        b = BallState(
            tuple(ball["position"]),
            tuple(ball["velocity"]),
            float(ball.get("radius", 0.25)),
            float(ball.get("mass", 1.0)),
            float(ball.get("birth_time", 0.0)),
        )
        solver = dict(cfg.get("solver", {}))
        solver.update({k: v for k, v in (overrides or {}).items() if v is not None})
        c = BilliardConfig(
            w, b, float(cfg["horizon"]), tuple(float(v) for v in cfg["domain"]),
            int(solver.pop("max_events", MAX_EVENTS)),
        )
    except KeyError as e:
        raise ConfigError(f"missing config key {e.args[0]!r}") from None
    known = {"grid", "basin_threshold", "tolerance", "dedup_radius", "speed_range", "max_iter", "fd_step"}
    unknown = set(solver) - known
    if unknown:
        raise ConfigError(f"unknown solver options {sorted(unknown)}")
    if "speed_range" in solver:
        solver["speed_range"] = tuple(solver["speed_range"])
    try:
        opts = SolverOptions(**solver)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"solver options: {e}") from None
    return c, opts


def axes_from_config(cfg: dict, contexts) -> dict:
    """Map each context id to a unit 3-vector; strings x/y/z are accepted."""
    from .hilbert import AXES

    raw = cfg.get("axes", {})
    out = {}
    for ctx in contexts:
        if ctx.id not in raw:
            raise ConfigError(f"no spin axis configured for context {ctx.id!r}")
    for name, v in raw.items():
        vec = AXES[v] if isinstance(v, str) else tuple(float(x) for x in v)
        norm = math.sqrt(sum(x * x for x in vec))
        out[name] = tuple(x / norm for x in vec)
    return out
