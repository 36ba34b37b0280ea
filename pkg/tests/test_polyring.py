from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsymlab.polyring import (
    ONE,
    Q,
    T,
    ZERO,
    BiPoly,
    SeriesZ,
    cyclotomic,
    eval_at_root_of_unity,
    exact_div,
    format_poly,
    is_b_positive_unimodal,
    is_palindromic,
    q_binomial,
    q_factorial,
    q_int,
    q_multinomial,
    q_pochhammer,
)
from qsymlab.symqsym import compositions


def qp(*cs) -> BiPoly:
    return BiPoly.from_q_list(cs)


# -- BiPoly basics -----------------------------------------------------------


def test_zero_coefficients_are_not_stored():
    p = BiPoly({(0, 0): 1, (1, 0): 0, (2, 1): Fraction(0)})
    assert p.terms() == {(0, 0): 1}
    assert (Q - Q).is_zero()


def test_canonical_text_form():
    assert format_poly(1 + 4 * T + T**2) == "1 + 4*t + t^2"
    assert str(Q**3 * T) == "q^3*t"
    assert str(ONE + (2 + Q + Q**2) * T + T**2) == "1 + (2 + q + q^2)*t + t^2"
    assert str(BiPoly.const(Fraction(1, 3)) * T) == "1/3*t"
    assert str(ZERO) == "0"


def test_integral_fractions_normalize_to_int():
    p = BiPoly.const(Fraction(4, 2))
    assert type(p.constant()) is int


def test_substitution_is_exact():
    p = 1 + (2 + Q + Q**2) * T + T**2
    assert p.subs(q=1) == 1 + 4 * T + T**2
    assert p.subs(t=Fraction(1, 2)).subs(q=2) == BiPoly.const(Fraction(1) + Fraction(8, 2) + Fraction(1, 4))


# -- q-analogues -------------------------------------------------------------


def test_q_int_examples():
    assert q_int(0) == ZERO
    assert q_int(1) == ONE
    assert q_int(3) == qp(1, 1, 1)


def test_q_factorial_and_pochhammer_examples():
    assert q_factorial(3) == qp(1, 2, 2, 1)
    assert q_pochhammer(0) == ONE
    assert q_pochhammer(2) == (1 - Q) * (1 - Q**2)


def test_q_multinomial_example_matches_inversion_count():
    words = set(permutations([1, 1, 2, 2]))
    brute = ZERO
    for w in words:
        inv = sum(1 for i in range(4) for j in range(i + 1, 4) if w[i] > w[j])
        brute = brute + Q**inv
    assert q_multinomial(4, [2, 2]) == qp(1, 1, 2, 1, 1) == brute


def test_q_multinomial_rejects_bad_parts():
    with pytest.raises(ValueError):
        q_multinomial(4, [2, 1])


def test_exact_div_rejects_remainder():
    with pytest.raises(ArithmeticError):
        exact_div(qp(1, 0, 1), qp(1, 1))


@pytest.mark.parametrize("n", range(9))
def test_q_factorial_at_one(n):
    assert q_factorial(n).subs(q=1) == BiPoly.const(factorial(n))


@pytest.mark.parametrize("n", range(1, 9))
def test_q_multinomial_at_one_is_multinomial(n):
    for alpha in compositions(n):
        expected = factorial(n)
        for a in alpha:
            expected //= factorial(a)
        assert q_multinomial(n, list(alpha)).subs(q=1) == BiPoly.const(expected)


# -- palindromicity and unimodality -------------------------------------------


def test_is_palindromic_examples():
    assert is_palindromic([1, 4, 1], center=1)
    assert not is_palindromic([ONE, T])
    assert is_palindromic([])


def test_is_palindromic_rejects_bad_center():
    with pytest.raises(ValueError):
        is_palindromic([1, 4, 1], center=Fraction(1, 2))


def test_unimodal_examples():
    assert is_b_positive_unimodal([1, 4, 1]).ok
    v = is_b_positive_unimodal([ONE, Q**2, Q])
    assert not v.unimodal
    # q^2 - 1 already fails at index 1; index 2 (q^2 - q) fails as well
    assert v.first_failure == 1
    assert 2 in v.unimodal_failures
    pair = is_b_positive_unimodal([1 + T, 1 + T])
    assert pair.ok and pair.center == Fraction(1, 2)


def test_degenerate_sequences_pass():
    assert is_b_positive_unimodal([]).ok
    assert is_b_positive_unimodal([Q + 1]).ok
    assert is_b_positive_unimodal([ZERO, ZERO]).ok


def test_negative_entry_breaks_positivity():
    v = is_b_positive_unimodal([-1, 2, -1])
    assert not v.positive and v.first_failure == 0


@st.composite
def pal_unimodal(draw):
    steps = draw(st.lists(st.integers(0, 4), min_size=1, max_size=3))
    rise = [sum(steps[: i + 1]) for i in range(len(steps))]
    plateau = rise[-1:] if draw(st.booleans()) else []
    return rise + plateau + rise[::-1][1:]


@settings(max_examples=60, deadline=None)
@given(pal_unimodal(), pal_unimodal())
def test_product_of_palindromic_unimodal_is_palindromic_unimodal(a, b):
    pa, pb = BiPoly.from_q_list(a), BiPoly.from_q_list(b)
    prod = (pa * pb).q_list()
    prod += [0] * (len(a) + len(b) - 1 - len(prod))
    v = is_b_positive_unimodal(prod)
    assert v.ok
    assert v.center == Fraction(len(a) - 1, 2) + Fraction(len(b) - 1, 2)


# -- cyclotomic arithmetic ---------------------------------------------------


def test_cyclotomic_examples():
    assert cyclotomic(1) == Q - 1
    assert cyclotomic(4) == Q**2 + 1
    assert cyclotomic(6) == Q**2 - Q + 1


@pytest.mark.parametrize("d", range(1, 31))
def test_cyclotomic_product_identity(d):
    prod = ONE
    for e in range(1, d + 1):
        if d % e == 0:
            prod = prod * cyclotomic(e)
    assert prod == Q**d - 1


def test_root_of_unity_examples():
    assert eval_at_root_of_unity(qp(1, 1, 1), 3).as_integer() == 0
    assert eval_at_root_of_unity(Q**2, 1).as_integer() == 1
    assert eval_at_root_of_unity(q_binomial(4, 2), 2).as_integer() == 2


def test_non_rational_value_refuses_integer():
    with pytest.raises(ValueError):
        eval_at_root_of_unity(Q, 3).as_integer()


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.integers(-5, 5), min_size=1, max_size=11),
    st.lists(st.integers(-5, 5), min_size=1, max_size=11),
    st.integers(1, 12),
)
def test_root_of_unity_evaluation_is_multiplicative(a, b, d):
    pa, pb = BiPoly.from_q_list(a), BiPoly.from_q_list(b)
    lhs = eval_at_root_of_unity(pa * pb, d)
    rhs = eval_at_root_of_unity(pa, d) * eval_at_root_of_unity(pb, d)
    assert lhs == rhs


# -- truncated series --------------------------------------------------------


def test_series_truncates_and_checks_order():
    a = SeriesZ(2, (ONE, ONE, ONE), ZERO)
    b = SeriesZ(2, (ONE, -ONE, ZERO), ZERO)
    assert list(a * b) == [ONE, ZERO, ZERO]
    with pytest.raises(ValueError):
        a * SeriesZ(1, (ONE, ONE), ZERO)
    with pytest.raises(ValueError):
        SeriesZ(2, (ONE,), ZERO)
