from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from todamaps.motzkin import (
    MotzkinPath,
    OperatorPolynomial,
    difference_string_system,
    enumerate_motzkin,
    horizontal_count_census,
    multinomial_count,
    operator_entry,
    operator_entry_band,
    path_count_dp,
    toda_system,
)

a, b2 = OperatorPolynomial.a, OperatorPolynomial.b2
small = st.integers(0, 6)
level = st.integers(-3, 3)


def test_three_step_path_counts():
    assert len(list(enumerate_motzkin(3, 1, 0))) == 6
    assert len(list(enumerate_motzkin(3, 2, 0))) == 3


def test_trivalent_entry_monomials():
    expected = a(1) * a(1) * b2(1) + a(1) * a(0) * b2(1) + a(0) * a(0) * b2(1) + b2(1) * b2(0) + b2(2) * b2(1) + b2(1) * b2(1)
    assert operator_entry(3, 1, 0) == expected


def test_enumeration_is_lexicographic_and_valid():
    paths = list(enumerate_motzkin(4, 0, 1))
    words = ["".join(p.steps) for p in paths]
    assert words == sorted(words, key=lambda w: ["DHU".index(c) for c in w])
    assert all(p.end == 1 and len(p.steps) == 4 for p in paths)


@given(small, level, level)
def test_three_path_count_routes_agree(n, m1, m2):
    paths = list(enumerate_motzkin(n, m1, m2))
    census = horizontal_count_census(n, m1, m2)
    assert len(paths) == path_count_dp(n, m1, m2) == sum(census.values())
    for h, c in census.items():
        assert multinomial_count(n, m1, m2, h) == c


@given(small, level, level)
def test_band_route_matches_path_sum(n, m1, m2):
    entry = operator_entry(n, m1, m2)
    assert entry == operator_entry_band(n, m1, m2)
    assert entry.coefficient_sum() == path_count_dp(n, m1, m2)


@given(st.integers(0, 5), level, level, st.integers(-2, 2))
def test_shift_relabels_levels(n, m1, m2, k):
    assert operator_entry(n, m1, m2).shift(k) == operator_entry(n, m1 + k, m2 + k)


def test_path_weight_reads_levels():
    p = MotzkinPath(1, ("H", "D", "U"))
    assert p.levels() == [1, 1, 0, 1]
    assert p.weight() == a(1) * b2(1)


@pytest.mark.parametrize("nu", [1, 2, 3])
def test_string_equations_hold_for_gaussian_coefficients(nu):
    # at t = 0 the exact recurrence is a_n = 0, b2_n = n/N
    N, n = 7, 5
    diag, sub = difference_string_system(nu)
    args = dict(a=lambda k: Fraction(0), b2=lambda k: Fraction(n + k, N), t=Fraction(0), one=Fraction(1))
    assert diag.rhs.evaluate(**args) == Fraction(1, N)
    assert sub.rhs.evaluate(**args) == 0
    assert sub.divided_by == "b2[1]"


def test_trivalent_string_system_shape():
    diag, sub = difference_string_system(1)
    t = OperatorPolynomial.t()
    assert diag.lhs == "1/N" and sub.lhs == "0"
    # diagonal: b2(1) - b2(0) + 3t (a(1) + a(0)) b2(1) - 3t (a(0) + a(-1)) b2(0)
    expected = b2(1) - b2(0) + t * 3 * (a(1) + a(0)) * b2(1) - t * 3 * (a(0) + a(-1)) * b2(0)
    assert diag.rhs == expected


def test_toda_system_is_built_for_each_valence():
    for nu in (0, 1, 2):
        eqs = toda_system(nu)
        assert len(eqs) == 2 and all(e.valence == 2 * nu + 1 for e in eqs)
    with pytest.raises(ValueError):
        difference_string_system(0)


def test_json_round_trip():
    entry = operator_entry(4, 2, 0)
    assert OperatorPolynomial.from_list(entry.to_list()) == entry


def test_census_matches_trinomial_examples():
    assert horizontal_count_census(2, 1, 0)[1] == 2
    assert horizontal_count_census(3, 1, 0)[2] == 3
    assert sum(horizontal_count_census(4, 1, 0).values()) == len(list(enumerate_motzkin(4, 1, 0)))
