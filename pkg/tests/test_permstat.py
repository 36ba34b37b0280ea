from __future__ import annotations

from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsymlab import permstat as ps
from qsymlab.chromqsym import LabeledGraph, UnitIntervalOrder
from qsymlab.config import CapExceeded
from qsymlab.polyring import ZERO, BiPoly, Q, q_factorial

perms = st.integers(0, 8).flatmap(lambda n: st.permutations(list(range(1, n + 1)))).map(tuple)


def test_basic_statistics_of_21():
    s = ps.parse("21")
    assert (ps.exc(s), ps.des_set(s), ps.maj(s), ps.inv(s)) == (1, {1}, 1, 1)


@pytest.mark.parametrize("n", range(6))
def test_identity_statistics_vanish(n):
    s = ps.identity(n)
    assert ps.exc(s) == ps.des(s) == ps.maj(s) == ps.inv(s) == 0
    assert ps.dex(s) == frozenset()


def test_inversions_are_mahonian_on_s3():
    total = ZERO
    for s in ps.enumerate_perms(3):
        total = total + Q ** ps.inv(s)
    assert total == q_factorial(3)


def test_dex_examples():
    assert ps.dex((2, 1)) == frozenset()
    assert ps.dex((1, 3, 2)) == {1}
    assert ps.dex(ps.parse("3142")) == {2}


@pytest.mark.parametrize("n", range(7))
def test_dex_sum_identity_exhaustive(n):
    assert all(ps.dex_sum_identity(s) for s in ps.enumerate_perms(n))


@settings(max_examples=200, deadline=None)
@given(perms)
def test_dex_sum_identity_random(s):
    assert sum(ps.dex(s)) == ps.maj(s) - ps.exc(s)


def test_cycle_types_and_derangements():
    assert ps.cycle_type((3, 1, 2)) == (3,)
    assert ps.is_derangement((3, 1, 2))
    assert ps.cycle_type(ps.identity(3)) == (1, 1, 1)
    assert not ps.is_derangement(ps.identity(3))
    assert sum(ps.is_derangement(s) for s in ps.enumerate_perms(4)) == 9


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 7).flatmap(lambda n: st.tuples(
    st.permutations(list(range(1, n + 1))), st.permutations(list(range(1, n + 1))))))
def test_conjugation_preserves_cycle_type(pair):
    s, t = map(tuple, pair)
    c = ps.conjugate(s, t)
    assert ps.cycle_type(c) == ps.cycle_type(s)
    assert ps.compose(ps.compose(t, s), ps.inverse(t)) == c


def test_conjugate_rejects_size_mismatch():
    with pytest.raises(ValueError):
        ps.conjugate((1, 2), (1, 2, 3))


@pytest.mark.parametrize("n", range(2, 7))
def test_rawlings_extremes(n):
    for s in ps.enumerate_perms(n):
        assert ps.inv_lt_r(s, n) == ps.inv(s)
        assert ps.maj_ge_r(s, n) == 0
        assert ps.inv_lt_r(s, 1) == 0
        assert ps.maj_ge_r(s, 1) == ps.maj(s)


def test_rawlings_rejects_bad_r():
    with pytest.raises(ValueError):
        ps.inv_lt_r((2, 1), 3)
    with pytest.raises(ValueError):
        ps.maj_ge_r((2, 1), 0)


@pytest.mark.parametrize("r", range(1, 5))
def test_rawlings_statistic_mahonian_n4(r):
    counts = Counter(ps.maj_ge_r(s, r) + ps.inv_lt_r(s, r) for s in ps.enumerate_perms(4))
    assert BiPoly({(k, 0): v for k, v in counts.items()}) == q_factorial(4)


def test_des_p_and_inv_g_examples():
    antichain = UnitIntervalOrder((3, 3))
    assert all(ps.des_P(s, antichain) == frozenset() for s in ps.enumerate_perms(3))
    K = LabeledGraph.complete(4)
    assert all(ps.inv_G(s, K) == ps.inv(s) for s in ps.enumerate_perms(4))
    assert ps.inv_G((3, 2, 1), LabeledGraph.path(3)) == 2


def test_des_p_on_chain_is_descent_set():
    chain = UnitIntervalOrder((1, 2, 3))
    assert all(ps.des_P(s, chain) == ps.des_set(s) for s in ps.enumerate_perms(4))


def test_ground_set_mismatch():
    with pytest.raises(ValueError):
        ps.inv_G((1, 2, 3), LabeledGraph.path(4))


def test_enumeration_counts_and_order():
    assert sum(1 for _ in ps.enumerate_perms(4)) == 24
    assert list(ps.enumerate_perms(3))[:3] == [(1, 2, 3), (1, 3, 2), (2, 1, 3)]
    assert list(ps.enumerate_perms(0)) == [()]
    assert len(list(ps.enumerate_class((2, 1), 1))) == 3
    assert list(ps.enumerate_class((1, 1, 1), 0)) == [(1, 2, 3)]


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        ps.enumerate_perms(10)


@pytest.mark.parametrize("n", range(1, 8))
def test_des_exc_equidistributed(n):
    d = Counter(ps.des(s) for s in ps.enumerate_perms(n))
    e = Counter(ps.exc(s) for s in ps.enumerate_perms(n))
    assert d == e


def test_exc_zero_only_for_identity():
    for n in range(6):
        assert [s for s in ps.enumerate_perms(n) if ps.exc(s) == 0] == [ps.identity(n)]


def test_gamma_conjugation_closes_classes():
    for n in range(1, 7):
        g = ps.long_cycle(n)
        for s in ps.enumerate_perms(n):
            c = ps.conjugate(s, g)
            assert ps.exc(c) == ps.exc(s) and ps.cycle_type(c) == ps.cycle_type(s)


def test_permutation_suite_passes():
    res = ps.permutation_suite(6)
    assert res.passed, res.witnesses
    assert sum(res.details["eulerian"]) == 720
    assert ps.permutation_suite(0).passed


def test_partitions_count():
    assert [len(list(ps.partitions(n))) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]
