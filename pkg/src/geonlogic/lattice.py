"""
Finite bounded ortholattices and exhaustive checkers for the lattice laws.

A lattice is stored as its partial order (an n x n boolean matrix) plus an
orthocomplement map.  Meets and joins are derived from the order once, at
construction, and kept as lookup tables.  The constructor validates every
structural invariant, so the checkers below can assume a well-formed
ortholattice and only ask whether it is distributive, orthomodular, atomic
or has the covering property.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

MAX_ELEMENTS = 2**16


class LatticeError(ValueError):
    """Raised when the input does not describe a bounded ortholattice."""


@dataclass(frozen=True, eq=False)
class FiniteOrtholattice:
    leq: np.ndarray
    comp: tuple
    labels: tuple = ()
    bottom: int = field(init=False)
    top: int = field(init=False)
    _meet: np.ndarray = field(init=False, repr=False)
    _join: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        leq = np.array(self.leq, dtype=bool)
        n = leq.shape[0]
        if leq.ndim != 2 or leq.shape != (n, n) or n == 0:
            raise LatticeError("order relation must be a non-empty square matrix")
        if n > MAX_ELEMENTS:
            raise LatticeError(f"{n} elements exceeds the cap of {MAX_ELEMENTS}")
        leq.setflags(write=False)
        object.__setattr__(self, "leq", leq)

        comp = tuple(int(c) for c in self.comp)
        if len(comp) != n or any(not 0 <= c < n for c in comp):
            raise LatticeError("complement map must send each element to a valid element")
        object.__setattr__(self, "comp", comp)

        labels = tuple(str(s) for s in self.labels) if self.labels else tuple(str(i) for i in range(n))
        if len(labels) != n or len(set(labels)) != n:
            raise LatticeError("labels must be unique, one per element")
        object.__setattr__(self, "labels", labels)

        _check_partial_order(leq)
        bottoms = np.flatnonzero(leq.all(axis=1))
        tops = np.flatnonzero(leq.all(axis=0))
        if len(bottoms) != 1 or len(tops) != 1:
            raise LatticeError("lattice must have a unique bottom and a unique top")
        object.__setattr__(self, "bottom", int(bottoms[0]))
        object.__setattr__(self, "top", int(tops[0]))

        meet, join = _bound_tables(leq)
        meet.setflags(write=False)
        join.setflags(write=False)
        object.__setattr__(self, "_meet", meet)
        object.__setattr__(self, "_join", join)
        self._check_orthocomplement()

    def _check_orthocomplement(self):
        c = np.asarray(self.comp)
        idx = np.arange(self.n)
        if not np.array_equal(c[c], idx):
            raise LatticeError("complement is not an involution")
        # a <= b  =>  comp(b) <= comp(a)
        if not np.array_equal(self.leq, self.leq[np.ix_(c, c)].T):
            raise LatticeError("complement is not order-reversing")
        if np.any(self._meet[idx, c] != self.bottom) or np.any(self._join[idx, c] != self.top):
            raise LatticeError("a and comp(a) must meet in bottom and join in top")

    @property
    def n(self) -> int:
        return self.leq.shape[0]

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"FiniteOrtholattice(n={self.n}, labels={list(self.labels)})"

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no element labelled {label!r}") from None

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def covers(self) -> list[tuple[int, int]]:
        """Pairs (a, b) with a < b and nothing strictly between, sorted."""
        strict = self.leq & ~np.eye(self.n, dtype=bool)
        # a < c < b exists  <=>  (strict @ strict)[a, b]
        between = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
        lo, hi = np.nonzero(strict & ~between)
        return sorted(zip(lo.tolist(), hi.tolist()))

    def heights(self) -> list[int]:
        """Length of the longest chain from bottom to each element."""
        order = sorted(range(self.n), key=lambda a: int(self.leq[:, a].sum()))
        h = [0] * self.n
        for b in order:
            below = [a for a in range(self.n) if a != b and self.leq[a, b]]
            h[b] = 1 + max((h[a] for a in below), default=-1)
        return h


def _check_partial_order(leq: np.ndarray) -> None:
    if not leq.diagonal().all():
        raise LatticeError("order relation is not reflexive")
    both = leq & leq.T
    if np.any(both & ~np.eye(leq.shape[0], dtype=bool)):
        raise LatticeError("order relation is not antisymmetric")
    li = leq.astype(np.int64)
    if np.any(((li @ li) > 0) & ~leq):
        raise LatticeError("order relation is not transitive")


def _bound_tables(leq: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = leq.shape[0]
    meet = np.empty((n, n), dtype=np.int64)
    join = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(a, n):
            meet[a, b] = meet[b, a] = _extremal(leq, leq[:, a] & leq[:, b], greatest=True, pair=(a, b))
            join[a, b] = join[b, a] = _extremal(leq, leq[a, :] & leq[b, :], greatest=False, pair=(a, b))
    return meet, join


def _extremal(leq, mask, greatest, pair):
    cand = np.flatnonzero(mask)
    sub = leq[np.ix_(cand, cand)]
    # greatest: every candidate lies below it; least: every candidate lies above it
    hits = cand[sub.all(axis=0)] if greatest else cand[sub.all(axis=1)]
    if len(hits) != 1:
        kind = "greatest lower" if greatest else "least upper"
        raise LatticeError(f"elements {pair[0]} and {pair[1]} have no unique {kind} bound")
    return int(hits[0])


def meet(L: FiniteOrtholattice, a: int, b: int) -> int:
    return int(L._meet[a, b])


def join(L: FiniteOrtholattice, a: int, b: int) -> int:
    return int(L._join[a, b])


def complement(L: FiniteOrtholattice, a: int) -> int:
    return L.comp[a]


def check_distributivity(L: FiniteOrtholattice) -> list[tuple[int, int, int]]:
    """Every triple (a, b, c) with a ^ (b v c) != (a ^ b) v (a ^ c)."""
    M, J = L._meet, L._join
    idx = np.arange(L.n)
    out = []
    for a in range(L.n):
        lhs = M[a][J]                          # lhs[b, c] = a ^ (b v c)
        mb = M[a]                              # mb[b] = a ^ b
        rhs = J[np.ix_(mb, mb)]                # rhs[b, c] = (a ^ b) v (a ^ c)
        bs, cs = np.nonzero(lhs != rhs)
        out.extend((a, int(b), int(c)) for b, c in zip(idx[bs], idx[cs]))
    return out


def check_orthomodularity(L: FiniteOrtholattice) -> list[tuple[int, int]]:
    """Pairs a <= b for which b != a v (comp(a) ^ b)."""
    out = []
    for a, b in zip(*np.nonzero(L.leq)):
        a, b = int(a), int(b)
        if join(L, a, meet(L, L.comp[a], b)) != b:
            out.append((a, b))
    return out


def check_de_morgan(L: FiniteOrtholattice) -> list[tuple[int, int]]:
    c = np.asarray(L.comp)
    lhs = c[L._meet]
    rhs = L._join[np.ix_(c, c)]
    return [(int(a), int(b)) for a, b in zip(*np.nonzero(lhs != rhs))]


def atoms(L: FiniteOrtholattice) -> list[int]:
    return sorted(hi for lo, hi in L.covers() if lo == L.bottom)


def check_atomicity(L: FiniteOrtholattice) -> bool:
    ats = atoms(L)
    return all(
        any(L.leq[p, a] for p in ats) for a in range(L.n) if a != L.bottom
    )


def is_cover(L: FiniteOrtholattice, a: int, b: int) -> bool:
    """True iff a < b with nothing strictly between."""
    if a == b or not L.leq[a, b]:
        return False
    between = L.leq[a, :] & L.leq[:, b]
    return int(between.sum()) == 2


def check_covering(L: FiniteOrtholattice) -> list[tuple[int, int]]:
    """Pairs (atom p, element a) with p ^ a = 0 where a v p does not cover a."""
    out = []
    for p in atoms(L):
        for a in range(L.n):
            if meet(L, p, a) == L.bottom and not is_cover(L, a, join(L, a, p)):
                out.append((p, a))
    return out


def from_covers(
    labels: Sequence[str], covers: Sequence[tuple[int, int]], comp: Sequence[int]
) -> FiniteOrtholattice:
    """Build a lattice from its Hasse diagram (pairs lo -> hi)."""
    n = len(labels)
    leq = np.eye(n, dtype=bool)
    for lo, hi in covers:
        leq[lo, hi] = True
    # Warshall closure
    for k in range(n):
        leq |= np.outer(leq[:, k], leq[k, :])
    return FiniteOrtholattice(leq, tuple(comp), tuple(labels))


def boolean_lattice(k: int) -> FiniteOrtholattice:
    """Subsets of {1..k} ordered by inclusion; element i is the bitmask i."""
    n = 1 << k
    idx = np.arange(n)
    leq = (idx[:, None] & ~idx[None, :]) == 0
    comp = tuple(int(i ^ (n - 1)) for i in idx)
    labels = tuple(
        "{" + ",".join(str(j + 1) for j in range(k) if i >> j & 1) + "}" for i in range(n)
    )
    return FiniteOrtholattice(leq, comp, labels)


def mo_lattice(n: int, names: Sequence[tuple[str, str]] | None = None) -> FiniteOrtholattice:
    """MOn: bottom, n complementary pairs of incomparable atoms, top."""
    if names is None:
        names = [(f"a{i}", f"a{i}'") for i in range(n)]
    labels = ["0"] + [s for pair in names for s in pair] + ["1"]
    top = len(labels) - 1
    covers = [(0, i) for i in range(1, top)] + [(i, top) for i in range(1, top)]
    comp = [top] + [i + 1 if i % 2 else i - 1 for i in range(1, top)] + [0]
    return from_covers(labels, covers, comp)


def hexagon() -> FiniteOrtholattice:
    """O6: 0 < a < b < 1 and 0 < b' < a' < 1; orthocomplemented, not orthomodular."""
    labels = ["0", "a", "b", "b'", "a'", "1"]
    covers = [(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)]
    comp = [5, 4, 3, 2, 1, 0]
    return from_covers(labels, covers, comp)
