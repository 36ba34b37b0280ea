from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations, permutations, product
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsymlab import chromqsym as cq
from qsymlab import permstat as ps
from qsymlab.chromqsym import GraphError, LabeledGraph, UnitIntervalOrder
from qsymlab.eulerqsym import q_eulerian
from qsymlab.polyring import ONE, T, BiPoly, q_factorial, q_int
from qsymlab.posetlab import Poset
from qsymlab.symqsym import (
    change_basis,
    e,
    expand_to_m,
    from_symmetric,
    fundamental,
    h,
    is_symmetric,
    s,
    to_symmetric,
)

CATALAN = [1, 1, 2, 5, 14, 42, 132, 429]


def e3():
    return from_symmetric(expand_to_m(e(3)))


# -- graphs and orders -------------------------------------------------------


def test_graph_validation():
    with pytest.raises(GraphError):
        LabeledGraph.from_edges(3, [(1, 1)])
    with pytest.raises(GraphError):
        LabeledGraph.from_edges(3, [(1, 4)])
    with pytest.raises(GraphError):
        LabeledGraph.from_json({"vertices": 3})
    with pytest.raises(GraphError):
        LabeledGraph.from_json({"edges": [[1, "2"]]})


def test_graph_json_round_trip(tmp_path):
    G = LabeledGraph.path_through((1, 3, 2))
    path = tmp_path / "g.json"
    path.write_text(json.dumps(G.to_json()))
    assert LabeledGraph.load(str(path)) == G


def test_hessenberg_validation():
    assert cq.parse_hessenberg("2,3") == (2, 3)
    for bad in ("1,1,4", "3,2,3", "x"):
        with pytest.raises(GraphError):
            cq.parse_hessenberg(bad)


def test_incomparability_graph():
    P = UnitIntervalOrder((2, 3))
    assert P.inc == LabeledGraph.path(3)
    assert P.lt(1, 3) and not P.lt(1, 2) and not P.lt(3, 1)
    assert UnitIntervalOrder((3, 3)).inc == LabeledGraph.complete(3)
    assert UnitIntervalOrder((1, 2)).inc == LabeledGraph.edgeless(3)


@pytest.mark.parametrize("n", range(2, 8))
def test_path_is_inc_of_P_n2(n):
    assert cq.P_nr(n, 2).inc == LabeledGraph.path(n)
    assert cq.P_nr(n, 2).m == tuple(range(2, n)) + (n,)


def test_from_intervals():
    P = UnitIntervalOrder.from_intervals([0, "1/2", "3/2", 3])
    assert P.inc.edges == {(1, 2), (2, 3)}


@pytest.mark.parametrize("n", range(8))
def test_unit_interval_order_count_is_catalan(n):
    assert sum(1 for _ in cq.enumerate_unit_interval_orders(n)) == CATALAN[n]


def test_unit_interval_orders_are_free():
    for n in range(1, 7):
        for P in cq.enumerate_unit_interval_orders(n):
            assert cq.freeness_check(P) == {"three_plus_one_free": True, "two_plus_two_free": True}


def test_freeness_detects_3_plus_1_and_2_plus_2():
    three_one = Poset(["a", "b", "c", "d"], [(0, 1), (1, 2)])
    two_two = Poset(["a", "b", "c", "d"], [(0, 1), (2, 3)])
    assert cq.freeness_check(three_one)["three_plus_one_free"] is False
    assert cq.freeness_check(two_two)["two_plus_two_free"] is False
    assert cq.freeness_check(two_two)["three_plus_one_free"] is True


# -- chromatic quasisymmetric functions ----------------------------------------


def test_path_example_natural_labeling():
    X = cq.chromatic_qsym(LabeledGraph.path(3))
    assert is_symmetric(X)
    got = change_basis(to_symmetric(X), "e")
    assert got == e(3) + (e(3) + e(2, 1)) * T + e(3) * T**2


def test_path_example_non_symmetric_labeling():
    X = cq.chromatic_qsym(LabeledGraph.path_through((1, 3, 2)))
    expected = (e3() + fundamental(3, {1})) + e3() * (2 * T) + (e3() + fundamental(3, {2})) * T**2
    assert X == expected
    assert not is_symmetric(X)


@pytest.mark.parametrize("n", range(1, 6))
def test_edgeless_graph_gives_e1_power(n):
    X = cq.chromatic_qsym(LabeledGraph.edgeless(n))
    assert X == expand_to_m(e(*([1] * n)))


@pytest.mark.parametrize("n", range(1, 6))
def test_complete_graph(n):
    X = to_symmetric(cq.chromatic_qsym(LabeledGraph.complete(n)))
    assert X == e(n) * q_factorial(n, "t")


def test_max_colors_truncates():
    X = cq.chromatic_qsym(LabeledGraph.path(3), max_colors=2)
    assert all(len(a) <= 2 for a in X.coeffs)


def test_chow_sum_is_omega_of_X():
    # the displayed sum over S_n yields omega X_G for unit interval orders
    antichain = UnitIntervalOrder((3, 3))
    assert cq.chow_sum(antichain) == h(3) * q_factorial(3, "t")
    assert cq.chromatic_via_chow(antichain) == e(3) * q_factorial(3, "t")


@pytest.mark.parametrize("n", range(1, 6))
def test_chow_matches_colorings(n):
    for P in cq.enumerate_unit_interval_orders(n):
        assert cq.chromatic_via_chow(P) == cq.chromatic_qsym(P.inc), P.m


def test_chow_chain_and_path():
    chain = UnitIntervalOrder((1, 2, 3))
    assert cq.chromatic_via_chow(chain) == cq.chromatic_qsym(chain.inc)
    assert cq.chromatic_via_chow(UnitIntervalOrder((2, 3))) == cq.chromatic_qsym(LabeledGraph.path(3))


@pytest.mark.parametrize("n", range(1, 8))
def test_symmetric_for_unit_interval_orders(n):
    for P in cq.enumerate_unit_interval_orders(n):
        assert is_symmetric(cq.chromatic_qsym(P.inc)), P.m


# -- Gasharov ------------------------------------------------------------------


def test_tableau_example():
    P = cq.P_nr(9, 3)
    rows = [[2, 6, 9], [1, 4, 8], [3, 7], [5]]
    assert cq.is_p_tableau(P, rows)
    assert cq.tableau_inversions(rows, P.inc) == 8


def test_is_p_tableau_rejects():
    P = cq.P_nr(3, 2)
    assert not cq.is_p_tableau(P, [[1, 2], [3]])
    assert not cq.is_p_tableau(P, [[1], [2]])
    assert cq.is_p_tableau(P, [[1, 3], [2]])


def test_p_tableau_enumeration_is_valid_and_complete():
    P = UnitIntervalOrder((2, 3, 4))
    for lam in ps.partitions(4):
        found = {t.rows for t in cq.p_tableaux(P, lam)}
        brute = set()
        for perm in permutations(range(1, 5)):
            rows, i = [], 0
            for k in lam:
                rows.append(tuple(perm[i:i + k]))
                i += k
            if cq.is_p_tableau(P, rows):
                brute.add(tuple(rows))
        assert found == brute, lam


def test_gasharov_antichain_and_chain():
    anti = UnitIntervalOrder((3, 3))
    assert cq.gasharov_expansion(anti) == s(1, 1, 1) * q_factorial(3, "t")
    chain = UnitIntervalOrder((1, 2))
    assert cq.gasharov_expansion(chain) == s(3) + s(2, 1) * 2 + s(1, 1, 1)


@pytest.mark.parametrize("n", range(1, 6))
def test_gasharov_matches_colorings(n):
    for P in cq.enumerate_unit_interval_orders(n):
        G = cq.gasharov_expansion(P)
        assert G == cq.chromatic_symmetric(P), P.m
        assert G.is_nonneg()


# -- power sums and Rawlings ----------------------------------------------------


def test_pn_formula_examples():
    assert cq.pn_formula(LabeledGraph.path(3)) == q_int(3, "t") * Fraction(1, 3)
    K4 = cq.pn_formula(LabeledGraph.complete(4))
    assert K4 == q_int(4, "t") * Fraction(1, 4) * q_factorial(3, "t")
    assert cq.pn_formula(LabeledGraph.edgeless(3)).is_zero()
    assert LabeledGraph.complete(4).left_degrees() == [0, 1, 2, 3]


@pytest.mark.parametrize("n", range(1, 6))
def test_pn_coefficient(n):
    for P in cq.enumerate_unit_interval_orders(n):
        res = cq.pn_coefficient_check(P)
        assert res.passed, res.witnesses


def test_rawlings_examples():
    for n in range(2, 8):
        assert cq.rawlings_polynomial(n, 2) == q_eulerian(n).A
    for n in range(1, 6):
        assert cq.rawlings_polynomial(n, n) == q_factorial(n, "t")
    assert cq.rawlings_polynomial(3, 1) == q_factorial(3)


@pytest.mark.parametrize("n", range(1, 5))
def test_rawlings_specialization(n):
    for r in range(1, n + 1):
        res = cq.rawlings_check(n, r)
        assert res.passed, res.witnesses


def test_P_nr_rejects_bad_r():
    with pytest.raises(GraphError):
        cq.P_nr(3, 4)


# -- coloring counts -----------------------------------------------------------


def test_chromatic_polynomial_of_path3():
    poly = cq.chromatic_polynomial(LabeledGraph.path(3))
    assert poly == [0, 1, -2, 1]
    X1 = cq.chromatic_qsym(LabeledGraph.path(3)).subs(t=1)
    for mcol in range(6):
        assert cq.evaluate_poly(poly, mcol) == mcol * (mcol - 1) ** 2
        assert cq.count_colorings(X1, mcol) == BiPoly.const(mcol * (mcol - 1) ** 2)


def brute_colorings(G: LabeledGraph, mcol: int) -> int:
    return sum(
        1 for kappa in product(range(mcol), repeat=G.n)
        if all(kappa[i - 1] != kappa[j - 1] for i, j in G.edges)
    )


@st.composite
def graphs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    pairs = list(combinations(range(1, n + 1), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return LabeledGraph.from_edges(n, edges)


@settings(max_examples=40, deadline=None)
@given(graphs(5), st.integers(0, 4))
def test_chromatic_polynomial_against_brute_force(G, mcol):
    assert cq.evaluate_poly(cq.chromatic_polynomial(G), mcol) == brute_colorings(G, mcol)
    assert cq.count_colorings(cq.chromatic_qsym(G).subs(t=1), mcol) == BiPoly.const(brute_colorings(G, mcol))


@settings(max_examples=25, deadline=None)
@given(graphs(6), st.randoms(use_true_random=False))
def test_relabeling_invariance(G, rnd):
    perms = []
    for _ in range(3):
        perm = list(range(1, G.n + 1))
        rnd.shuffle(perm)
        perms.append(perm)
    assert cq.relabeling_check(G, perms).passed


def test_relabeling_changes_t_refinement():
    G = LabeledGraph.path(3)
    assert cq.chromatic_qsym(G) != cq.chromatic_qsym(G.relabel([1, 3, 2]))


@settings(max_examples=30, deadline=None)
@given(graphs(5))
def test_t_zero_counts_match_brute_force(G):
    X = cq.chromatic_qsym(G)
    total = X.subs(t=1)
    assert cq.count_colorings(total, G.n) == BiPoly.const(brute_colorings(G, G.n))


# -- conjectures ----------------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 6))
def test_conjecture_suites(n):
    res = cq.conjecture_suites(n)
    assert res.passed, res.details["findings"]
    assert res.details["orders"] == CATALAN[n]
    assert res.details["asserted"]


def test_path_e_expansion_positive_unimodal():
    for n in range(2, 7):
        X = cq.chromatic_symmetric(cq.P_nr(n, 2))
        verdict = cq._e_verdict(X, n - 1)
        assert verdict.ok


def test_n1_degenerate():
    P = UnitIntervalOrder(())
    assert cq.chromatic_qsym(P.inc).coeffs == {(1,): ONE}
    assert cq.conjecture_suites(1).passed


def test_factorial_total():
    X = cq.chromatic_qsym(LabeledGraph.complete(4)).subs(t=1)
    assert X.to("M").coeffs[(1, 1, 1, 1)] == BiPoly.const(factorial(4))
