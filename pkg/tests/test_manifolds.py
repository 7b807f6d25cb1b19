import pytest

from geonlogic import lattice as lc
from geonlogic.hilbert import check_isomorphic
from geonlogic.manifolds import (
    Context,
    UniverseError,
    boolean_restriction,
    build_universe,
    experimental_complement,
    generate_logic,
    outcome_proposition,
    top_proposition,
    verify_nonclassicality,
)

X = Context("X", ("+", "-"))
Y = Context("Y", ("+", "-"))
Z = Context("Z", ("+", "-"))


@pytest.fixture
def two():
    U = build_universe([X, Y])
    return U, generate_logic(U)


def test_universe_sizes():
    assert len(build_universe([X]).classes) == 3
    assert len(build_universe([X], residual_classes=0).classes) == 2
    assert len(build_universe([X, Y]).classes) == 5
    assert len(build_universe([X, Y, Z]).classes) == 7


def test_context_validation():
    with pytest.raises(UniverseError):
        Context("X", ("+",))
    with pytest.raises(UniverseError):
        Context("X", ("+", "+"))
    with pytest.raises(UniverseError):
        build_universe([X, X])
    with pytest.raises(UniverseError):
        build_universe([])


def test_outcome_extents_are_disjoint_across_contexts():
    U = build_universe([X, Y])
    xp = outcome_proposition(U, "X", "+")
    yp = outcome_proposition(U, "Y", "+")
    assert len(xp.extent) == 1 and not (xp.extent & yp.extent)
    assert U.compatible("X") | U.compatible("Y") < U.ids


def test_experimental_complement_is_not_set_complement():
    U = build_universe([X, Y])
    xp = outcome_proposition(U, "X", "+")
    xm = outcome_proposition(U, "X", "-")
    assert experimental_complement(U, xp).extent == xm.extent
    assert U.ids - xp.extent != xm.extent
    assert experimental_complement(U, top_proposition(U)).extent == frozenset()


def test_two_contexts_give_mo2(two, mo2):
    U, logic = two
    L = logic.lattice
    assert L.n == 6
    assert check_isomorphic(L, mo2) is not None
    assert len(lc.check_distributivity(L)) == 24
    assert lc.check_orthomodularity(L) == []


def test_meet_is_intersection_but_join_is_not_union(two):
    U, logic = two
    L = logic.lattice
    xp, yp = logic.outcome(U, "X", "+"), logic.outcome(U, "Y", "+")
    assert logic.propositions[lc.meet(L, xp, yp)].extent == frozenset()
    j = lc.join(L, xp, yp)
    assert j == L.top
    union = logic.propositions[xp].extent | logic.propositions[yp].extent
    assert union != U.ids


def test_eq4_identity(two):
    U, logic = two
    L = logic.lattice
    xp, xm = logic.outcome(U, "X", "+"), logic.outcome(U, "X", "-")
    yp, ym = logic.outcome(U, "Y", "+"), logic.outcome(U, "Y", "-")
    assert lc.join(L, lc.meet(L, xp, yp), lc.meet(L, xp, ym)) == L.bottom
    assert lc.join(L, xp, xm) == L.top


def test_single_context_is_boolean():
    U = build_universe([X])
    logic = generate_logic(U)
    assert check_isomorphic(logic.lattice, lc.boolean_lattice(2)) is not None
    assert lc.check_distributivity(logic.lattice) == []


def test_three_contexts_give_mo3():
    logic = generate_logic(build_universe([X, Y, Z]))
    assert check_isomorphic(logic.lattice, lc.mo_lattice(3)) is not None
    assert len(lc.check_distributivity(logic.lattice)) == 120


def test_three_outcome_context_restriction():
    U = build_universe([Context("S", ("a", "b", "c")), Y])
    B = boolean_restriction(U, "S").lattice
    assert B.n == 8
    assert check_isomorphic(B, lc.boolean_lattice(3)) is not None
    assert "S{a,b}" in B.labels


def test_nonclassicality_two_contexts(two):
    U, logic = two
    clauses = {c.name: c for c in verify_nonclassicality(U, logic)}
    assert [c.status for c in clauses.values()] == ["PASS"] * 3
    d = clauses["distributive_failure"].detail
    assert d["lhs_is_bottom"] and d["rhs_is_top"]
    assert clauses["proper_subsets"].detail["verdict"] == "non-classical"


def test_nonclassicality_one_context():
    U = build_universe([X])
    clauses = verify_nonclassicality(U, generate_logic(U))
    assert [c.status for c in clauses] == ["FAIL", "N/A", "PASS"]
    assert clauses[0].detail["verdict"] == "classical"


def test_unknown_outcome():
    U = build_universe([X])
    with pytest.raises(UniverseError):
        outcome_proposition(U, "X", "0")
    with pytest.raises(UniverseError):
        outcome_proposition(U, "Q", "+")
