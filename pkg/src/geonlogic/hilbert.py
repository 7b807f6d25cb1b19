"""
Subspace lattices of a finite-dimensional complex Hilbert space.

A proposition is represented by a closed subspace (here: a span of
orthonormal vectors); meet is intersection, join is span and the
orthocomplement is the orthogonal complement.  Rank decisions threshold
singular values at ``RANK_TOL`` so the resulting lattice is exact even though
the arithmetic is floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .lattice import FiniteOrtholattice, LatticeError

RANK_TOL = 1e-10
ORTHO_TOL = 1e-12

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

AXES = {
    "x": (1.0, 0.0, 0.0),
    "y": (0.0, 1.0, 0.0),
    "z": (0.0, 0.0, 1.0),
}


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Make the first non-negligible component real and positive."""
    for comp in v:
        if abs(comp) > RANK_TOL:
            return v * (abs(comp) / comp)
    return v


@dataclass(frozen=True, eq=False)
class Subspace:
    ambient_dim: int
    basis: np.ndarray  # shape (ambient_dim, rank), orthonormal columns

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=complex).reshape(self.ambient_dim, -1)
        if B.shape[1] > self.ambient_dim:
            raise ValueError("rank exceeds ambient dimension")
        G = B.conj().T @ B
        if not np.allclose(G, np.eye(B.shape[1]), rtol=0, atol=ORTHO_TOL):
            raise ValueError("basis is not orthonormal")
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def contains(self, other: "Subspace") -> bool:
        _same_dim(self, other)
        if other.rank == 0:
            return True
        resid = other.basis - self.projector() @ other.basis
        return bool(np.linalg.norm(resid, 2) <= RANK_TOL * 10) if resid.size else True

    def equals(self, other: "Subspace") -> bool:
        return self.rank == other.rank and self.contains(other)

    def dump(self) -> list:
        """Basis vectors as lists of (re, im) pairs."""
        return [[[float(z.real), float(z.imag)] for z in col] for col in self.basis.T]


def _same_dim(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(f"dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")


def zero(dim: int) -> Subspace:
    return Subspace(dim, np.zeros((dim, 0), dtype=complex))


def full(dim: int) -> Subspace:
    return Subspace(dim, np.eye(dim, dtype=complex))


def span(vectors: np.ndarray, dim: Optional[int] = None) -> Subspace:
    """Orthonormal basis for the column span of ``vectors``."""
    V = np.asarray(vectors, dtype=complex)
    if dim is None:
        dim = V.shape[0]
    V = V.reshape(dim, -1)
    if V.shape[1] == 0:
        return zero(dim)
    U, s, _ = np.linalg.svd(V, full_matrices=False)
    r = int(np.sum(s > RANK_TOL))
    B = np.column_stack([_fix_phase(U[:, k]) for k in range(r)]) if r else np.zeros((dim, 0))
    return Subspace(dim, B)


def _null_space(A: np.ndarray, dim: int) -> Subspace:
    if A.shape[0] == 0:
        return full(dim)
    _, s, Vh = np.linalg.svd(A, full_matrices=True)
    r = int(np.sum(s > RANK_TOL))
    N = Vh[r:].conj().T
    if N.shape[1] == 0:
        return zero(dim)
    return span(N, dim)


def ortho_subspace(a: Subspace) -> Subspace:
    return _null_space(a.basis.conj().T, a.ambient_dim)


def meet_subspace(a: Subspace, b: Subspace) -> Subspace:
    """Intersection: vectors annihilated by both orthogonal-complement projectors."""
    _same_dim(a, b)
    d = a.ambient_dim
    I = np.eye(d)
    return _null_space(np.vstack([I - a.projector(), I - b.projector()]), d)


def join_subspace(a: Subspace, b: Subspace) -> Subspace:
    _same_dim(a, b)
    return span(np.hstack([a.basis, b.basis]), a.ambient_dim)


def spin_eigenspace(axis: Sequence[float], sign: int) -> Subspace:
    """The +/- eigenspace of the spin-1/2 operator along a unit axis."""
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > 1e-12:
        raise ValueError("axis must be a unit 3-vector")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    S = sum(c * P for c, P in zip(n, PAULI))
    w, V = np.linalg.eigh(S)
    k = int(np.argmin(np.abs(w - sign)))
    return span(V[:, [k]], 2)


@dataclass(frozen=True, eq=False)
class SubspaceLattice:
    ambient_dim: int
    elements: tuple
    labels: tuple
    lattice: FiniteOrtholattice

    def find(self, s: Subspace) -> int:
        for i, e in enumerate(self.elements):
            if e.equals(s):
                return i
        raise KeyError("subspace is not an element of this lattice")


def subspace_lattice(elements: Sequence[Subspace], labels: Sequence[str]) -> SubspaceLattice:
    """Induce the ortholattice on a family of subspaces, verifying closure."""
    elements = list(elements)
    dim = elements[0].ambient_dim

    def find(s):
        for i, e in enumerate(elements):
            if e.equals(s):
                return i
        raise LatticeError("subspace family is not closed under the lattice operations")

    for a, b in combinations(elements, 2):
        find(meet_subspace(a, b))
        find(join_subspace(a, b))
    comp = [find(ortho_subspace(a)) for a in elements]
    leq = np.array([[b.contains(a) for b in elements] for a in elements], dtype=bool)
    L = FiniteOrtholattice(leq, tuple(comp), tuple(labels))
    return SubspaceLattice(dim, tuple(elements), tuple(labels), L)


def build_spin_lattice(axes: Sequence, names: Optional[Sequence[str]] = None) -> SubspaceLattice:
    """0, the full space, and the +/- eigenspaces for each measurement axis."""
    vecs = [np.asarray(AXES[a] if isinstance(a, str) else a, dtype=float) for a in axes]
    if names is None:
        names = [a if isinstance(a, str) else f"n{i}" for i, a in enumerate(axes)]
    for (i, u), (j, v) in combinations(enumerate(vecs), 2):
        if abs(abs(u @ v) - 1.0) < 1e-9:
            raise ValueError(f"axes {names[i]} and {names[j]} are parallel")
    elements, labels = [zero(2)], ["0"]
    for name, v in zip(names, vecs):
        elements += [spin_eigenspace(v, +1), spin_eigenspace(v, -1)]
        labels += [f"{name}+", f"{name}-"]
    elements.append(full(2))
    labels.append("1")
    return subspace_lattice(elements, labels)


# ---------------------------------------------------------------------------
# isomorphism search


def _signature(L: FiniteOrtholattice, h):
    down = L.leq.sum(axis=0)
    up = L.leq.sum(axis=1)
    return [(h[a], int(down[a]), int(up[a]), L.comp[a] == a) for a in range(L.n)]


def check_isomorphic(L1: FiniteOrtholattice, L2: FiniteOrtholattice) -> Optional[dict]:
    """
    Order- and complement-preserving bijection L1 -> L2, or None if none exists.

    Backtracking over elements in order of height, so atoms are assigned
    first; candidates are restricted to elements with the same height,
    up-set and down-set sizes, and every partial assignment is checked
    against order and complement constraints.
    """
    if L1.n != L2.n:
        return None
    h1, h2 = L1.heights(), L2.heights()
    s1, s2 = _signature(L1, h1), _signature(L2, h2)
    if sorted(s1) != sorted(s2):
        return None
    order = sorted(range(L1.n), key=lambda a: (h1[a], a))
    cands = {a: [b for b in range(L2.n) if s2[b] == s1[a]] for a in order}
    f: dict = {}
    used = set()

    def consistent(a, b):
        for x, y in f.items():
            if L1.leq[a, x] != L2.leq[b, y] or L1.leq[x, a] != L2.leq[y, b]:
                return False
        ca = L1.comp[a]
        if ca in f and f[ca] != L2.comp[b]:
            return False
        if ca == a and L2.comp[b] != b:
            return False
        return True

    def extend(k):
        if k == len(order):
            return True
        a = order[k]
        for b in cands[a]:
            if b in used or not consistent(a, b):
                continue
            f[a] = b
            used.add(b)
            if extend(k + 1):
                return True
            del f[a]
            used.discard(b)
        return False

    if extend(0):
        return dict(sorted(f.items()))
    return None
