"""
Boundary-condition set semantics and the proposition lattice they generate.

Manifold classes are symbolic tokens.  A measurement context (an x-oriented
Stern-Gerlach arrangement, say) picks out the classes consistent with it,
split by outcome; distinct contexts are mutually exclusive and so pick out
disjoint sets.  Propositions are extents (sets of class ids).  Meet is
intersection, complement is taken within the proposition's own context, and
join is the least upper bound inside the generated family, which is not the
set union once two contexts are involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import lattice as lc
from .lattice import FiniteOrtholattice

TRIVIAL = "trivial"
UNCONSTRAINED = "unconstrained"


class UniverseError(ValueError):
    pass


@dataclass(frozen=True)
class Context:
    id: str
    outcomes: tuple

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(str(o) for o in self.outcomes))
        if len(self.outcomes) < 2:
            raise UniverseError(f"context {self.id!r} needs at least two outcomes")
        if len(set(self.outcomes)) != len(self.outcomes):
            raise UniverseError(f"context {self.id!r} repeats an outcome")


@dataclass(frozen=True)
class ManifoldClass:
    id: int
    context: str | None = None
    outcome: str | None = None

    @property
    def unconstrained(self) -> bool:
        return self.context is None

    def __str__(self):
        return UNCONSTRAINED if self.unconstrained else f"({self.context},{self.outcome})"


@dataclass(frozen=True)
class Universe:
    classes: tuple
    contexts: tuple

    @property
    def ids(self) -> frozenset:
        return frozenset(c.id for c in self.classes)

    def context(self, cid: str) -> Context:
        for c in self.contexts:
            if c.id == cid:
                return c
        raise UniverseError(f"unknown context {cid!r}")

    def compatible(self, cid: str) -> frozenset:
        """Classes consistent with the context at all (any outcome)."""
        self.context(cid)
        return frozenset(m.id for m in self.classes if m.context == cid)


@dataclass(frozen=True)
class Proposition:
    extent: frozenset
    home: str = TRIVIAL

    def __repr__(self):
        return f"Proposition({sorted(self.extent)}, home={self.home!r})"


def build_universe(contexts: Sequence[Context], residual_classes: int = 1) -> Universe:
    if not contexts:
        raise UniverseError("at least one context is required")
    if residual_classes < 0:
        raise UniverseError("residual_classes must be >= 0")
    if len({c.id for c in contexts}) != len(contexts):
        raise UniverseError("context ids must be unique")
    classes = []
    for ctx in contexts:
        for o in ctx.outcomes:
            classes.append(ManifoldClass(len(classes), ctx.id, o))
    for _ in range(residual_classes):
        classes.append(ManifoldClass(len(classes)))
    return Universe(tuple(classes), tuple(contexts))


def outcome_proposition(U: Universe, context: str, outcome: str) -> Proposition:
    ctx = U.context(context)
    if str(outcome) not in ctx.outcomes:
        raise UniverseError(f"context {context!r} has no outcome {outcome!r}")
    ext = frozenset(m.id for m in U.classes if m.context == context and m.outcome == str(outcome))
    return Proposition(ext, context)


def top_proposition(U: Universe) -> Proposition:
    return Proposition(U.ids, TRIVIAL)


def bottom_proposition(U: Universe) -> Proposition:
    return Proposition(frozenset(), TRIVIAL)


def experimental_complement(U: Universe, p: Proposition) -> Proposition:
    """Negation by the other outcomes of the same context, not by set complement."""
    if p.home == TRIVIAL:
        return bottom_proposition(U) if p.extent == U.ids else top_proposition(U)
    rest = U.compatible(p.home) - p.extent
    if not rest:
        return bottom_proposition(U)
    if rest == U.compatible(p.home):
        return top_proposition(U)
    return Proposition(rest, p.home)


def _canonical(U: Universe, p: Proposition) -> Proposition:
    # the whole compatibility set of a context is the proposition "always true"
    if not p.extent:
        return bottom_proposition(U)
    if p.home != TRIVIAL and p.extent == U.compatible(p.home):
        return top_proposition(U)
    return p


def _meet_prop(U, p, q):
    ext = p.extent & q.extent
    if p.home == TRIVIAL:
        home = q.home
    elif q.home == TRIVIAL or q.home == p.home:
        home = p.home
    else:
        home = TRIVIAL  # disjoint contexts: the extent is empty
    return _canonical(U, Proposition(ext, home))


@dataclass(frozen=True)
class Logic:
    """A generated lattice together with the propositions behind its elements."""

    lattice: FiniteOrtholattice
    propositions: tuple

    def element(self, p: Proposition) -> int:
        for i, q in enumerate(self.propositions):
            if q.extent == p.extent:
                return i
        raise KeyError(p)

    def outcome(self, U: Universe, context: str, outcome: str) -> int:
        return self.element(outcome_proposition(U, context, outcome))


def _label(U: Universe, p: Proposition) -> str:
    if p.home == TRIVIAL:
        return "0" if not p.extent else "1"
    outs = [m.outcome for m in U.classes if m.id in p.extent]
    ctx = U.context(p.home)
    outs.sort(key=ctx.outcomes.index)
    return p.home + (outs[0] if len(outs) == 1 else "{" + ",".join(outs) + "}")


def _close(U: Universe, seeds: list[Proposition], cap: int) -> list[Proposition]:
    found = {}
    for p in seeds:
        p = _canonical(U, p)
        found.setdefault(p.extent, p)
    frontier = list(found.values())
    while frontier:
        new = []
        current = list(found.values())
        for p in frontier:
            cands = [experimental_complement(U, p)]
            cands += [_meet_prop(U, p, q) for q in current]
            for c in cands:
                if c.extent not in found:
                    found[c.extent] = c
                    new.append(c)
                    if len(found) > cap:
                        raise UniverseError(f"proposition closure exceeds {cap} elements")
        frontier = new
    return list(found.values())


def _order_key(U: Universe, p: Proposition):
    if p.home == TRIVIAL:
        return (0 if not p.extent else 2, 0, 0, ())
    ctx_pos = [c.id for c in U.contexts].index(p.home)
    ctx = U.context(p.home)
    outs = sorted(ctx.outcomes.index(m.outcome) for m in U.classes if m.id in p.extent)
    return (1, ctx_pos, len(outs), tuple(outs))


def _logic_from(U: Universe, props: list[Proposition]) -> Logic:
    props = sorted(props, key=lambda p: _order_key(U, p))
    n = len(props)
    leq = np.array([[p.extent <= q.extent for q in props] for p in props], dtype=bool)
    ext_pos = {p.extent: i for i, p in enumerate(props)}
    comp = [ext_pos[experimental_complement(U, p).extent] for p in props]
    labels = [_label(U, p) for p in props]
    L = FiniteOrtholattice(leq, tuple(comp), tuple(labels))
    assert L.n == n
    return Logic(L, tuple(props))


def generate_logic(U: Universe, cap: int = lc.MAX_ELEMENTS) -> Logic:
    seeds = [bottom_proposition(U), top_proposition(U)]
    seeds += [outcome_proposition(U, c.id, o) for c in U.contexts for o in c.outcomes]
    return _logic_from(U, _close(U, seeds, cap))


def boolean_restriction(U: Universe, context: str, cap: int = lc.MAX_ELEMENTS) -> Logic:
    ctx = U.context(context)
    seeds = [bottom_proposition(U), top_proposition(U)]
    seeds += [outcome_proposition(U, ctx.id, o) for o in ctx.outcomes]
    return _logic_from(U, _close(U, seeds, cap))


@dataclass(frozen=True)
class Clause:
    name: str
    status: str  # PASS, FAIL or N/A
    detail: dict


def verify_nonclassicality(U: Universe, logic: Logic) -> list[Clause]:
    L = logic.lattice
    top = U.ids
    proper = {c.id: U.compatible(c.id) < top for c in U.contexts}
    multi = len(U.contexts) >= 2
    ok = multi and all(proper.values())
    clauses = [
        Clause(
            "proper_subsets",
            "PASS" if ok else "FAIL",
            {
                "contexts": len(U.contexts),
                "universe_size": len(top),
                "compatible_sizes": {c.id: len(U.compatible(c.id)) for c in U.contexts},
                "verdict": "non-classical" if ok else "classical",
            },
        )
    ]

    if multi:
        cx, cy = U.contexts[0], U.contexts[1]
        xp = logic.outcome(U, cx.id, cx.outcomes[0])
        yp = logic.outcome(U, cy.id, cy.outcomes[0])
        xm = lc.complement(L, xp)
        ym = lc.complement(L, yp)
        lhs = lc.join(L, lc.meet(L, xp, yp), lc.meet(L, xp, ym))
        rhs = lc.join(L, xp, xm)
        lab = L.labels
        clauses.append(
            Clause(
                "distributive_failure",
                "PASS" if lhs != rhs else "FAIL",
                {
                    "a": lab[xp], "b": lab[yp], "not_b": lab[ym], "not_a": lab[xm],
                    "lhs": lab[lhs], "rhs": lab[rhs],
                    "lhs_is_bottom": lhs == L.bottom, "rhs_is_top": rhs == L.top,
                },
            )
        )
    else:
        clauses.append(Clause("distributive_failure", "N/A", {"reason": "needs two contexts"}))

    bad = {}
    for c in U.contexts:
        viol = lc.check_distributivity(boolean_restriction(U, c.id).lattice)
        bad[c.id] = len(viol)
    clauses.append(
        Clause(
            "single_context_distributive",
            "PASS" if not any(bad.values()) else "FAIL",
            {"violations": bad},
        )
    )
    return clauses


def contexts_from_config(cfg: dict) -> tuple[list[Context], int]:
    if "contexts" not in cfg:
        raise UniverseError("config needs a 'contexts' list")
    ctxs = []
    for entry in cfg["contexts"]:
        try:
            ctxs.append(Context(str(entry["id"]), tuple(entry["outcomes"])))
        except (KeyError, TypeError):
            raise UniverseError(f"bad context entry {entry!r}") from None
    return ctxs, int(cfg.get("residual_classes", 1))

