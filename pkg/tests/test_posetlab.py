from __future__ import annotations

from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsymlab import posetlab as pl
from qsymlab.config import CapExceeded
from qsymlab.polyring import q_binomial
from qsymlab.posetlab import BOTTOM, TOP, Poset, PosetError


@st.composite
def random_posets(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rel = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Poset(list(range(n)), rel)


# -- basic posets and Mobius -------------------------------------------------


def test_mobius_boolean_and_chain():
    B3 = pl.boolean_lattice(3)
    assert pl.mobius(B3, frozenset(), frozenset({1, 2, 3})) == -1
    assert pl.mobius_bounds(pl.chain(2)) == -1
    for k in range(3, 7):
        assert pl.mobius_bounds(pl.chain(k)) == 0
    assert pl.mobius(B3, frozenset({1}), frozenset({1})) == 1


def test_mobius_subspace_lattice():
    assert pl.mobius_bounds(pl.subspace_lattice(2, 3)) == -8
    assert pl.mobius_bounds(pl.subspace_lattice(3, 2)) == 3


def test_mobius_rejects_incomparable():
    B2 = pl.boolean_lattice(2)
    with pytest.raises(PosetError):
        pl.mobius(B2, frozenset({1}), frozenset({2}))


@pytest.mark.parametrize("n", range(1, 6))
def test_boolean_mobius_formula(n):
    B = pl.boolean_lattice(n)
    for y in B.elements:
        assert pl.mobius(B, frozenset(), y) == (-1) ** len(y)


@settings(max_examples=60, deadline=None)
@given(random_posets())
def test_mobius_sums_vanish_on_bounded_posets(P):
    B = P.with_bounds()
    assert pl.mobius_sum_check(B)
    lo = B.index[BOTTOM]
    assert sum(B.mobius_from(lo).values()) == 0


@settings(max_examples=60, deadline=None)
@given(random_posets())
def test_mobius_is_label_invariant(P):
    B = P.with_bounds()
    n = B.n
    order = list(reversed(range(n)))
    relabeled = Poset([B.elements[i] for i in order],
                      [(order.index(i), order.index(j)) for i in range(n) for j in range(n) if B.lt(i, j)])
    assert pl.mobius(relabeled, BOTTOM, TOP) == pl.mobius(B, BOTTOM, TOP)


# -- validation and serialization --------------------------------------------


def test_poset_validation():
    with pytest.raises(PosetError):
        Poset([0, 1], [(0, 1), (1, 0)])
    with pytest.raises(PosetError):
        Poset([0, 1], [(0, 2)])
    with pytest.raises(PosetError):
        Poset([0, 0], [])
    with pytest.raises(PosetError):
        Poset(["a", "b"], [("a", "b")])


def test_json_round_trip_and_errors():
    B2 = pl.boolean_lattice(2)
    again = Poset.from_json(B2.to_json())
    assert len(again) == 4 and pl.mobius_bounds(again) == 1
    for bad in ({}, {"elements": [1], "relations": [[0]]}, {"elements": "x", "relations": []}):
        with pytest.raises(PosetError):
            Poset.from_json(bad)


def test_named_posets():
    assert len(pl.poset_from_name("boolean:3")) == 8
    assert len(pl.poset_from_name("chain:4")) == 4
    assert len(pl.poset_from_name("subspace:2:3")) == pl.gaussian_count(2, 3)
    for bad in ("torus:3", "boolean", "boolean:x", "subspace:2"):
        with pytest.raises(PosetError):
            pl.poset_from_name(bad)
    with pytest.raises(CapExceeded):
        pl.poset_from_name("rees-rn:7")
    with pytest.raises(PosetError):
        pl.subspace_lattice(4, 2)


# -- rank selection -------------------------------------------------------------


def test_rank_selected_examples():
    B3 = pl.boolean_lattice(3)
    assert pl.mobius_bounds(pl.rank_selected(B3, {1, 2})) == -1
    empty = pl.rank_selected(B3, set())
    assert len(empty) == 2 and pl.mobius_bounds(empty) == -1
    assert pl.mobius_bounds(pl.rank_selected(B3, {1})) == 2


def test_rank_selected_errors():
    with pytest.raises(PosetError):
        pl.rank_selected(pl.boolean_lattice(3), {3})
    bad = Poset(["b", "x", "y", "z", "t"], [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
    with pytest.raises(PosetError):
        pl.rank_selected(bad, {1})


@pytest.mark.parametrize("n", range(1, 5))
def test_rank_selected_boolean(n):
    res = pl.verify_rank_selected_boolean(n)
    assert res.passed, res.witnesses


def test_rank_selected_sign_report():
    res = pl.verify_rank_selected_boolean(3)
    assert res.details["sign_matches_(-1)^(|S|+1)"] == 4
    assert res.details["sign_matches_(-1)^n"] < 4


@pytest.mark.parametrize("n,p", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_rank_selected_subspace(n, p):
    res = pl.verify_rank_selected_subspace(n, p)
    assert res.passed, res.witnesses


def test_subspace_example_B2_2():
    L = pl.subspace_lattice(2, 2)
    assert pl.mobius_bounds(pl.rank_selected(L, {1})) == 2


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_subspace_counts_match_gaussian(p, n):
    L = pl.subspace_lattice(p, n)
    assert len(L) == sum(q_binomial(n, k).subs(q=p).constant() for k in range(n + 1))
    assert L.graded_rank() == [W.dim for W in L.elements]


# -- Rees products ---------------------------------------------------------------


def test_rees_element_count():
    inner = pl._drop_bottom_reranked(pl.boolean_lattice(2))
    R = pl.rees(inner, pl.chain(2))
    assert len(R) == 4
    labels = {(tuple(sorted(S)), j) for S, j in R.elements}
    assert labels == {((1,), 0), ((2,), 0), ((1, 2), 0), ((1, 2), 1)}


@pytest.mark.parametrize("n", range(1, 5))
def test_rees_element_count_formula(n):
    R = pl.build_Rn(n)
    assert len(R) == 2 + sum(comb(n, k) * k for k in range(1, n + 1))


def test_rees_needs_ranks():
    with pytest.raises(PosetError):
        pl.rees(Poset([0], []), pl.chain(2))


def test_rees_mobius_examples():
    assert pl.mobius_bounds(pl.build_Rn(1)) == 0
    assert pl.mobius_bounds(pl.build_Rn(3)) == 2
    R4 = pl.build_Rn(4)
    assert pl.mobius(R4, BOTTOM, (frozenset({1, 2, 3, 4}), 1)) == 11
    assert pl.mobius(R4, BOTTOM, (frozenset({2}), 0)) == -1


@pytest.mark.parametrize("n", range(1, 5))
def test_rees_eulerian(n):
    res = pl.verify_rees_eulerian(n)
    assert res.passed, res.witnesses


def test_derangements():
    assert [pl.derangements(n) for n in range(7)] == [1, 0, 1, 2, 9, 44, 265]


@pytest.mark.parametrize("n,p", [(1, 2), (2, 2), (2, 3), (3, 2)])
def test_rees_q(n, p):
    res = pl.verify_rees_q(n, p)
    assert res.passed, res.witnesses


def test_lower_intervals():
    res = pl.verify_lower_intervals(3)
    assert res.passed, res.witnesses


def test_check_named():
    res = pl.check_named("rees-rn:3")
    assert res.passed and res.details["mu_bottom_top"] == 2
    assert res.check == "mobius" and res.params == {"poset": "rees-rn:3"}
    assert pl.check_named("subspace:2:2").passed
    assert pl.check_named("chain:3").details["mu_bottom_top"] == 0
