import json

import pytest

from geonlogic import lattice as lc
from geonlogic import latticeio
from geonlogic.lattice import LatticeError
from geonlogic.latticeio import LatticeFormatError


@pytest.mark.parametrize("L", [lc.mo_lattice(3), lc.boolean_lattice(3), lc.hexagon()], ids=repr)
def test_round_trip(L):
    back = latticeio.loads(latticeio.dumps(L))
    assert back.labels == L.labels
    assert (back.leq == L.leq).all()
    assert back.comp == L.comp


def test_shipped_mo2_file(configs, mo2):
    L = latticeio.load(configs / "mo2.json")
    assert L.labels == mo2.labels and (L.leq == mo2.leq).all()


def test_syntax_error_reports_line():
    text = '{\n  "elements": ["0", "1"],\n  "covers": [["0", "1"]\n}\n'
    with pytest.raises(LatticeFormatError) as e:
        latticeio.loads(text)
    assert e.value.line == 4


def test_unknown_element_is_located():
    d = latticeio.to_dict(lc.boolean_lattice(1))
    d["covers"].append(["{}", "ghost"])
    text = json.dumps(d, indent=2)
    with pytest.raises(LatticeFormatError) as e:
        latticeio.loads(text)
    assert "ghost" in str(e.value)
    assert '"ghost"' in text.splitlines()[e.value.line - 1]


def test_missing_key_and_missing_complement():
    d = latticeio.to_dict(lc.boolean_lattice(1))
    del d["top"]
    with pytest.raises(LatticeFormatError, match="top"):
        latticeio.from_dict(d)
    d = latticeio.to_dict(lc.boolean_lattice(1))
    del d["complement"]["{1}"]
    with pytest.raises(LatticeFormatError, match="complement"):
        latticeio.from_dict(d)


def test_wrong_declared_top():
    d = latticeio.to_dict(lc.boolean_lattice(1))
    d["top"], d["bottom"] = d["bottom"], d["top"]
    with pytest.raises(LatticeError):
        latticeio.from_dict(d)


def test_dot_output(mo2):
    dot = latticeio.to_dot(mo2, "mo2")
    assert dot.startswith("graph mo2 {")
    assert dot.count(" -- ") == 8 + 3  # covers plus complement pairs
    assert dot.count("style=dashed") == 3
    assert 'label="X+"' in dot
