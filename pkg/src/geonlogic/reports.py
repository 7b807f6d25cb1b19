"""
Report writers shared by the CLI subcommands.

Every writer returns the list of files it produced.  Floats go out with 12
significant digits so reruns are byte-identical.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from . import lattice as lc
from . import latticeio, plotting
from .billiard import AnsatzParams
from .solver import TRIVIAL


def fmt(x) -> str:
    return f"{x:.12g}"


def _num(x):
    return float(fmt(x))


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(json.dumps(obj, indent=2) + "\n")
    return path


# ---------------------------------------------------------------------------
# lattices

CHECKS = ("distributive", "orthomodular", "atomic", "covering", "de_morgan")


def run_checks(L, checks) -> dict:
    lab = L.labels
    out = {}
    for name in checks:
        if name == "distributive":
            v = [[lab[a], lab[b], lab[c]] for a, b, c in lc.check_distributivity(L)]
        elif name == "orthomodular":
            v = [[lab[a], lab[b]] for a, b in lc.check_orthomodularity(L)]
        elif name == "covering":
            v = [[lab[p], lab[a]] for p, a in lc.check_covering(L)]
        elif name == "de_morgan":
            v = [[lab[a], lab[b]] for a, b in lc.check_de_morgan(L)]
        elif name == "atomic":
            v = [] if lc.check_atomicity(L) else [
                [lab[a]] for a in range(L.n)
                if a != L.bottom and not any(L.leq[p, a] for p in lc.atoms(L))
            ]
        else:
            raise ValueError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")
        out[name] = {"pass": not v, "violations": v, "count": len(v)}
    return out


def write_lattice_outputs(out: Path, L, stem="lattice", title=None, extra=None) -> list:
    files = [out / f"{stem}.json", out / f"{stem}.dot"]
    files[0].write_text(latticeio.dumps(L, extra))
    files[1].write_text(latticeio.to_dot(L, stem.replace("-", "_")))
    files.append(plotting.plot_hasse(L, out / f"{stem}.png", title=title))
    return files


# ---------------------------------------------------------------------------
# billiard


def _params_row(p):
    if p == TRIVIAL:
        return ["", "", "", ""]
    return [fmt(p.exit_time), fmt(p.exit_angle), fmt(p.exit_direction), fmt(p.exit_speed)]


def write_solutions(out: Path, config, solutions) -> list:
    files = []
    path = out / "solutions.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["solution", "kind", "exit_time", "exit_angle", "exit_direction", "exit_speed",
                    "residual_norm", "event_count"])
        for k, s in enumerate(solutions):
            w.writerow([k, s.kind] + _params_row(s.params) + [fmt(s.residual_norm), len(s.events)])
    files.append(path)

    path = out / "trajectories.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["solution", "ball", "lineage", "t", "x", "y", "vx", "vy"])
        for k, s in enumerate(solutions):
            for ball, lineage, t, x, y, vx, vy in s.trajectory:
                w.writerow([k, ball, lineage] + [fmt(v) for v in (t, x, y, vx, vy)])
    files.append(path)

    log = []
    for k, s in enumerate(solutions):
        log.append({
            "solution": k,
            "kind": s.kind,
            "events": [
                {"time": _num(e.time), "kind": e.kind, "participants": list(e.participants),
                 **({"mouth": e.mouth} if e.mouth else {})}
                for e in s.events
            ],
        })
    files.append(write_json(out / "events.json", log))

    for k, s in enumerate(solutions):
        title = f"solution {k}: {s.kind}"
        files.append(plotting.plot_solution(config, s, out / f"solution_{k}.png", title=title))
    return files


def write_oracle(out: Path, rows) -> Path:
    path = out / "oracle.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["oracle_root", "t_scaled", "rim_angle", "rel_direction", "speed_scaled",
                    "matched_solution", "distance"])
        for r in rows:
            w.writerow([r["root"]] + [fmt(v) for v in r["z"]] +
                       [r["match"] if r["match"] is not None else "", fmt(r["distance"]) if r["match"] is not None else ""])
    return path


def params_dict(p) -> dict:
    if p == TRIVIAL or not isinstance(p, AnsatzParams):
        return {"trivial": True}
    return {k: _num(getattr(p, k)) for k in ("exit_time", "exit_angle", "exit_direction", "exit_speed")}
