"""Lattice interchange (JSON) and Hasse-diagram export (DOT)."""

from __future__ import annotations

import json
from pathlib import Path

from .lattice import FiniteOrtholattice, LatticeError, from_covers


class LatticeFormatError(ValueError):
    def __init__(self, msg, line=None, token=None):
        self.msg, self.line, self.token = msg, line, token
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def to_dict(L: FiniteOrtholattice, extra: dict | None = None) -> dict:
    lab = L.labels
    d = {
        "elements": list(lab),
        "covers": [[lab[a], lab[b]] for a, b in L.covers()],
        "complement": {lab[a]: lab[L.comp[a]] for a in range(L.n)},
        "top": lab[L.top],
        "bottom": lab[L.bottom],
    }
    if extra:
        d.update(extra)
    return d


def dumps(L: FiniteOrtholattice, extra: dict | None = None) -> str:
    return json.dumps(to_dict(L, extra), indent=2) + "\n"


def from_dict(d: dict) -> FiniteOrtholattice:
    for key in ("elements", "covers", "complement", "top", "bottom"):
        if key not in d:
            raise LatticeFormatError(f"missing key {key!r}")
    labels = [str(e) for e in d["elements"]]
    pos = {s: i for i, s in enumerate(labels)}
    if len(pos) != len(labels):
        raise LatticeFormatError("duplicate element names")

    def ix(name):
        try:
            return pos[str(name)]
        except KeyError:
            raise LatticeFormatError(f"unknown element {name!r}", token=json.dumps(str(name))) from None

    covers = []
    for pair in d["covers"]:
        if len(pair) != 2:
            raise LatticeFormatError(f"cover entry {pair!r} is not a pair", token=json.dumps(pair[0]) if pair else None)
        covers.append((ix(pair[0]), ix(pair[1])))
    comp = [None] * len(labels)
    for a, b in d["complement"].items():
        comp[ix(a)] = ix(b)
    if None in comp:
        missing = [labels[i] for i, c in enumerate(comp) if c is None]
        raise LatticeFormatError(f"no complement given for {missing}")
    L = from_covers(labels, covers, comp)
    if L.labels[L.top] != str(d["top"]) or L.labels[L.bottom] != str(d["bottom"]):
        raise LatticeError("declared top/bottom do not match the order")
    return L


def loads(text: str) -> FiniteOrtholattice:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise LatticeFormatError(e.msg, line=e.lineno) from None
    if not isinstance(d, dict):
        raise LatticeFormatError("top level must be an object", line=1)
    try:
        return from_dict(d)
    except LatticeFormatError as e:
        if e.line is None:
            e = LatticeFormatError(e.msg, line=_locate(text, e.token), token=e.token)
        raise e from None


def _locate(text, token):
    if token:
        for i, line in enumerate(text.splitlines(), 1):
            if token in line:
                return i
    return None


def load(path) -> FiniteOrtholattice:
    return loads(Path(path).read_text())


def to_dot(L: FiniteOrtholattice, name: str = "lattice") -> str:
    """Hasse diagram; solid edges are covers, dashed edges pair complements."""
    lines = [f"graph {name} {{", "  rankdir=BT;", "  node [shape=ellipse];"]
    for i, s in enumerate(L.labels):
        lines.append(f'  n{i} [label="{s}"];')
    for a, b in L.covers():
        lines.append(f"  n{a} -- n{b};")
    for a in range(L.n):
        c = L.comp[a]
        if a < c:
            lines.append(f'  n{a} -- n{c} [style=dashed, constraint=false, label="comp"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
