"""
Command-line front end.

    geonlogic lattice  --config L.json [--checks orthomodular,distributive]
    geonlogic geon     --config universe.json
    geonlogic billiard --config demo.json [--grid N] [--tolerance X] [--oracle]
    geonlogic hilbert  --config universe.json
    geonlogic replay   OUT/manifest.json

Exit status: 0 success, 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from . import hilbert, latticeio, reports
from . import lattice as lc
from .billiard import ConfigError, SimulationError
from .configs import axes_from_config, billiard_from_config, read_json, universe_from_config
from .lattice import LatticeError
from .latticeio import LatticeFormatError
from .manifest import MANIFEST, RunManifest
from .manifolds import UniverseError, generate_logic, verify_nonclassicality
from .solver import TRIVIAL, grid_oracle, match_roots, scaled_distance, solve_self_consistent, to_scaled

OUT_ENV = "GEONLOGIC_OUT"

log = logging.getLogger("geonlogic")


class InputError(Exception):
    pass


def cmd_lattice_check(config, out: Path, checks=None):
    try:
        L = latticeio.load(config)
    except (LatticeFormatError, LatticeError) as e:
        raise InputError(f"{config}: {e}") from None
    checks = list(checks or reports.CHECKS)
    results = reports.run_checks(L, checks)
    files = [reports.write_json(out / "checks.json", {"elements": L.n, "checks": results})]
    files += reports.write_lattice_outputs(out, L)
    for name, r in results.items():
        print(f"{name:13s} {'PASS' if r['pass'] else 'FAIL'}  ({r['count']} violations)")
        if r["violations"]:
            print("   first:", ", ".join(r["violations"][0]))
    return (0 if all(r["pass"] for r in results.values()) else 1), files


def cmd_geon_demo(config, out: Path):
    cfg = read_json(config)
    U = universe_from_config(cfg)
    logic = generate_logic(U)
    L = logic.lattice
    clauses = verify_nonclassicality(U, logic)
    report = {
        "universe": {
            "classes": [str(m) for m in U.classes],
            "contexts": [{"id": c.id, "outcomes": list(c.outcomes)} for c in U.contexts],
        },
        "elements": L.n,
        "clauses": [{"clause": c.name, "status": c.status, **c.detail} for c in clauses],
    }
    files = [reports.write_json(out / "nonclassicality.json", report)]
    extents = {L.labels[i]: sorted(p.extent) for i, p in enumerate(logic.propositions)}
    files += reports.write_lattice_outputs(out, L, title="proposition lattice", extra={"extents": extents})
    print(f"{L.n}-element proposition lattice")
    for c in clauses:
        note = f"  [{c.detail.get('verdict')}]" if "verdict" in c.detail else ""
        print(f"{c.name:28s} {c.status}{note}")
    ok = all(c.status in ("PASS", "N/A") for c in clauses)
    return (0 if ok else 1), files


def cmd_billiard_solve(config, out: Path, grid=None, tolerance=None, oracle=False):
    cfg = read_json(config)
    c, opts = billiard_from_config(cfg, {"grid": grid, "tolerance": tolerance})
    t = time.perf_counter()
    sols = solve_self_consistent(c, opts)
    elapsed = time.perf_counter() - t
    files = reports.write_solutions(out, c, sols)
    print(f"{len(sols)} consistent solution(s) from one initial state")
    for k, s in enumerate(sols):
        desc = "undisturbed, no emergent ball" if s.params == TRIVIAL else (
            f"exit t={s.params.exit_time:.6g} angle={s.params.exit_angle:.6g} "
            f"dir={s.params.exit_direction:.6g} speed={s.params.exit_speed:.6g}")
        print(f"  [{k}] {s.kind:16s} residual={s.residual_norm:.3e}  {desc}")
    log.info("solver wall time %.2fs", elapsed)
    code = 0
    if oracle:
        roots = grid_oracle(c, opts)
        mine = [to_scaled(c, s.params) for s in sols if s.params != TRIVIAL]
        ids = [k for k, s in enumerate(sols) if s.params != TRIVIAL]
        pairs, left_solver, left_oracle = match_roots(mine, roots, opts.dedup_radius)
        by_oracle = {j: i for i, j in pairs}
        rows = [{
            "root": j, "z": z,
            "match": ids[by_oracle[j]] if j in by_oracle else None,
            "distance": scaled_distance(z, mine[by_oracle[j]]) if j in by_oracle else 0.0,
        } for j, z in enumerate(roots)]
        files.append(reports.write_oracle(out, rows))
        agree = not left_solver and not left_oracle
        print(f"grid oracle ({'x'.join(str(2 * g) for g in opts.grid)}): {len(roots)} root(s); "
              f"{'matches solver one-to-one' if agree else 'MISMATCH with solver'}")
        code = 0 if agree else 1
    return code, files


def cmd_hilbert_verify(config, out: Path):
    cfg = read_json(config)
    U = universe_from_config(cfg)
    for ctx in U.contexts:
        if len(ctx.outcomes) != 2:
            raise InputError(f"context {ctx.id!r} is not binary; spin-1/2 needs two outcomes")
    axes = axes_from_config(cfg, U.contexts)
    logic = generate_logic(U)
    names = [ctx.id for ctx in U.contexts] + [a for a in axes if a not in {c.id for c in U.contexts}]
    S = hilbert.build_spin_lattice([axes[a] for a in names], names)
    f = hilbert.check_isomorphic(logic.lattice, S.lattice)
    L1, L2 = logic.lattice, S.lattice
    cert = {
        "logic_elements": L1.n,
        "subspace_elements": L2.n,
        "isomorphic": f is not None,
        "bijection": {L1.labels[a]: L2.labels[b] for a, b in f.items()} if f else None,
        "subspace_orthomodular_violations": len(lc.check_orthomodularity(L2)),
        "subspace_distributive_violations": len(lc.check_distributivity(L2)),
    }
    if f is None:
        cert["reason"] = (
            "element counts differ" if L1.n != L2.n else "no order- and complement-preserving bijection"
        )
    files = [reports.write_json(out / "certificate.json", cert)]
    subspaces = {lab: s.dump() for lab, s in zip(S.labels, S.elements)}
    files += reports.write_lattice_outputs(out, L2, stem="subspace-lattice", extra={"subspaces": subspaces})
    if f is not None:
        print(f"isomorphism found: {L1.n}-element logic <-> {L2.n}-element subspace lattice")
        for a, b in f.items():
            print(f"  {L1.labels[a]:8s} -> {L2.labels[b]}")
    else:
        print(f"no isomorphism: {cert['reason']}")
    return (0 if f is not None else 1), files


COMMANDS = {
    "lattice": cmd_lattice_check,
    "geon": cmd_geon_demo,
    "billiard": cmd_billiard_solve,
    "hilbert": cmd_hilbert_verify,
}


def run(command: str, config, out, overrides: dict | None = None) -> int:
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    config = str(Path(config).resolve())
    code, files = COMMANDS[command](config, out, **overrides)
    m = RunManifest(command, config, overrides, str(out.resolve()))
    m.record_outputs(files)
    m.write()
    return code


def replay(manifest_path, out=None) -> int:
    m = RunManifest.read(manifest_path)
    out = Path(out) if out else Path(m.out + "-replay")
    code = run(m.command, m.config, out, m.overrides)
    fresh = RunManifest.read(out / MANIFEST)
    same = fresh.input_hash == m.input_hash and fresh.outputs == m.outputs
    for name, digest in m.outputs.items():
        status = "identical" if fresh.outputs.get(name) == digest else "DIFFERS"
        print(f"{name:28s} {status}")
    print("replay reproduces all outputs" if same else "replay DIFFERS from the recorded run")
    return code if same else 1


def _grid(text):
    parts = [int(p) for p in text.split(",")]
    if len(parts) == 1:
        return parts[0]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("grid is N or four comma-separated values")
    return parts


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="geonlogic", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True, help="input file")
        sp.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./geonlogic-out/<command>)")

    sp = sub.add_parser("lattice", help="check lattice laws on a lattice file")
    common(sp)
    sp.add_argument("--checks", help=f"comma list from {','.join(reports.CHECKS)} (default: all)")
    sp = sub.add_parser("geon", help="proposition lattice from a universe config")
    common(sp)
    sp = sub.add_parser("billiard", help="self-consistent wormhole billiard solutions")
    common(sp)
    sp.add_argument("--grid", type=_grid, help="grid points per dimension (N or t,angle,dir,speed)")
    sp.add_argument("--tolerance", type=float, help="root tolerance on the scaled residual")
    sp.add_argument("--oracle", action="store_true", help="audit against a 2x finer grid oracle")
    sp = sub.add_parser("hilbert", help="represent the proposition lattice by spin subspaces")
    common(sp)
    sp = sub.add_parser("replay", help="rerun from a manifest and compare outputs")
    sp.add_argument("manifest")
    sp.add_argument("--out")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "replay":
            return replay(args.manifest, args.out)
        out = args.out or os.environ.get(OUT_ENV) or str(Path("geonlogic-out") / args.command)
        overrides = {}
        if args.command == "lattice" and args.checks:
            overrides["checks"] = [c.strip() for c in args.checks.split(",") if c.strip()]
            bad = set(overrides["checks"]) - set(reports.CHECKS)
            if bad:
                raise InputError(f"unknown checks {sorted(bad)}; choose from {', '.join(reports.CHECKS)}")
        if args.command == "billiard":
            overrides.update(grid=args.grid, tolerance=args.tolerance, oracle=args.oracle or None)
        return run(args.command, args.config, out, overrides)
    except (InputError, ConfigError, UniverseError, LatticeError, LatticeFormatError,
            FileNotFoundError, SimulationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
