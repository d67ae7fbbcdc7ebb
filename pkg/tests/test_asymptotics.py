from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from todamaps.asymptotics import (
    SelfSimilarFamily,
    h2_f1_closed,
    inverse_self_similar_derivative,
    leading_matrix,
    leading_matrix_inverse,
    matmul2,
    offset_evaluate,
    reduce_w_derivative,
    self_similar_derivative,
    solve_hierarchy,
    string_residual,
    toda_residual,
    w_derivative,
    z1_closed_in_z0,
    z1_from_derivatives,
)
from todamaps.equilibrium import equilibrium_series
from todamaps.genus import w_derivative_binomial
from todamaps.series import PowerSeries

ORDER = 16
fracs = st.fractions(min_value=-9, max_value=9, max_denominator=6)
small_series = st.lists(fracs, min_size=6, max_size=6).map(lambda c: PowerSeries(c, 5))
half_integers = st.integers(-8, 8).map(lambda k: Fraction(k, 2))


@pytest.fixture(scope="module")
def hier():
    return solve_hierarchy(2, ORDER)


@settings(max_examples=40, deadline=None)
@given(small_series, half_integers, st.integers(0, 4))
def test_w_derivative_matches_binomial_route(E, p, m):
    assert w_derivative(E, p, m) == w_derivative_binomial(E, p, m)


def test_w_derivative_against_sympy():
    s, w = sympy.symbols("s w")
    coeffs = [0, -6, 0, -324, 0, Fraction(7, 3)]
    E = PowerSeries(coeffs, 5)
    p = Fraction(-3, 2)
    expr = w ** sympy.Rational(-3, 2) * sum(sympy.nsimplify(c) * (s * sympy.sqrt(w)) ** k for k, c in enumerate(coeffs))
    for m in range(4):
        ref = sympy.expand(sympy.diff(expr, w, m).subs(w, 1))
        assert [Fraction(str(ref.coeff(s, k))) for k in range(6)] == list(w_derivative(E, p, m).coeffs)


@given(small_series, half_integers)
def test_inverse_derivative_round_trip(F, p):
    k_res = -2 * p
    if 0 <= k_res <= 5:
        F = F.map_coefficients(lambda k, c: 0 if k == k_res else c)
    X, k = inverse_self_similar_derivative(F, p, free=Fraction(5))
    assert self_similar_derivative(X, p) == F
    if k is not None:
        assert k == k_res and X[k] == 5


def test_inverse_derivative_solvability_failure():
    with pytest.raises(ArithmeticError):
        inverse_self_similar_derivative(PowerSeries([0, 0, 1], 2), -1)


def test_leading_matrix_inverse():
    eq = equilibrium_series(ORDER)
    one, zero = PowerSeries.constant(1, ORDER), PowerSeries.constant(0, ORDER)
    prod = matmul2(leading_matrix(eq.u0, eq.z0), leading_matrix_inverse(eq.u0, eq.z0))
    assert prod == [[one, zero], [zero, one]]


def test_string_and_toda_residuals_vanish(hier):
    h, f = hier.families()
    for r1, r2 in (string_residual(h, f, 5), toda_residual(h, f, 5)):
        assert r1.vanishes_through(5) and r2.vanishes_through(5)


def test_truncated_hierarchy_fails_next_order(hier):
    # dropping u_2 must leave a visible residual at n^-3
    h = SelfSimilarFamily("h", {0: hier.u[0], 1: hier.u[1], 2: PowerSeries([], ORDER)})
    f = SelfSimilarFamily("f", {0: hier.z[0], 1: hier.z[1]})
    sub, diag = string_residual(h, f, 3)
    assert sub.vanishes_through(2) and not sub.vanishes_through(3)


def test_parity(hier):
    assert all(u.is_odd() for u in hier.u.values())
    assert all(z.is_even() for z in hier.z.values())


def test_u1_is_half_first_derivative(hier):
    assert hier.u[1] == Fraction(1, 2) * self_similar_derivative(hier.u[0], Fraction(1, 2))


def test_z1_routes_agree(hier):
    u2, z1 = h2_f1_closed(hier.u[0], hier.z[0])
    assert hier.z[1] == z1 == z1_closed_in_z0(hier.z[0]) == z1_from_derivatives(hier.u[0], hier.z[0])
    assert hier.u[2] == u2


def test_z1_leading_term_counts_genus_one_maps(hier):
    # 810 * 4! = 19440 genus-one maps with four trivalent vertices; none with two
    assert hier.z[1][2] == 0
    assert hier.z[1].valuation() == 4 and hier.z[1][4] * 24 == 19440


def test_frozen_low_order_values(hier):
    # frozen after agreement of the solver, the closed forms and the map oracle
    assert hier.u[2].coeffs[:6] == (0, 0, 0, -135, 0, -44712)
    assert hier.z[1].coeffs[:7] == (0, 0, 0, 0, 810, 0, 326592)
    assert hier.z[2][6] == 0 and hier.z[2][8] == 15155910


def test_provenance(hier):
    assert hier.provenance["u1[s^1]"] == "diagonal string equation"
    assert hier.provenance["z1[s^4]"] == "oracle"
    assert hier.provenance["z2[s^8]"] == "closed-form"


def test_injected_values_are_used():
    fake = lambda kind, g, power: (Fraction(1), "test")
    h = solve_hierarchy(1, 8, fake)
    assert h.z[1][2] == 1 and h.z[1][4] == 1
    assert h.provenance["z1[s^2]"] == "test"


def test_offset_evaluate_needs_every_grade():
    eq = equilibrium_series(4)
    with pytest.raises(KeyError):
        offset_evaluate(SelfSimilarFamily("h", {0: eq.u0}), 1, 2)


def test_reduce_w_derivative_examples():
    # D_p on a constant multiplies by p
    E, p = reduce_w_derivative(PowerSeries([7], 0), Fraction(-5, 2), 1)
    assert E[0] == Fraction(-35, 2) and p == Fraction(-7, 2)
    z0 = equilibrium_series(6).z0
    Dz, p = reduce_w_derivative(z0, 1, 1)
    assert Dz.truncate(5) == z0.truncate(5) + Fraction(1, 2) * PowerSeries.variable(6) * z0.derivative() and p == 0
    assert Dz.coeffs[:3] == (1, 0, 72)
    u0 = equilibrium_series(6).u0
    u1 = Fraction(1, 2) * reduce_w_derivative(u0, Fraction(1, 2), 1)[0]
    assert u1.coeffs[:4] == (0, -3, 0, -324)
    with pytest.raises(ValueError):
        reduce_w_derivative(u0, 0, -1)
