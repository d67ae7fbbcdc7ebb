from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from todamaps.series import PowerSeries, implicit_solve, rational_power

ORDER = 6
fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def series(order=ORDER, unit=False):
    coeffs = st.lists(fracs, min_size=order + 1, max_size=order + 1)
    if unit:
        coeffs = coeffs.filter(lambda c: c[0] != 0)
    return coeffs.map(lambda c: PowerSeries(c, order))


@given(series(), series(), series())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == PowerSeries.constant(0, ORDER)


@given(series(unit=True), series())
def test_division_inverts_multiplication(a, b):
    assert (b * a) / a == b
    assert a * a.reciprocal() == PowerSeries.constant(1, ORDER)


@given(series().map(lambda s: s - s[0] + 1))
def test_log_exp_round_trip(a):
    assert a.log().exp() == a


@given(series().map(lambda s: s - s[0] + 1), st.integers(0, 5))
def test_integer_power_matches_repeated_product(a, n):
    prod = PowerSeries.constant(1, ORDER)
    for _ in range(n):
        prod = prod * a
    assert a**n == prod
    assert a.pow(n) == prod


@given(series().map(lambda s: s - s[0] + 4))
def test_sqrt_squares_back(a):
    r = a.sqrt()
    assert r[0] == 2
    assert r * r == a


@given(series())
def test_derivative_of_antiderivative(a):
    assert a.antiderivative().derivative() == a


@given(series())
def test_json_round_trip(a):
    assert PowerSeries.from_json(a.to_json()) == a
    assert all(isinstance(c, str) for c in a.to_dict()["coeffs"])


def test_min_truncation_rule():
    a = PowerSeries([1, 1, 1], 2)
    b = PowerSeries([1, 1, 1, 1, 1], 4)
    assert (a + b).order == 2
    assert (a * b).order == 2
    with pytest.raises(IndexError):
        (a * b)[3]


def test_log_and_sqrt_against_sympy():
    s = sympy.symbols("s")
    expr = 1 + 3 * s - sympy.Rational(1, 2) * s**2 + 5 * s**4
    a = PowerSeries([1, 3, Fraction(-1, 2), 0, 5], 8)
    for ours, theirs in ((a.log(), sympy.log(expr)), (a.sqrt(), sympy.sqrt(expr)), (a.pow(Fraction(-2, 3)), expr ** sympy.Rational(-2, 3))):
        ref = sympy.series(theirs, s, 0, 9).removeO()
        assert [Fraction(str(ref.coeff(s, k))) for k in range(9)] == list(ours.coeffs)


def test_compose_against_sympy():
    s = sympy.symbols("s")
    outer = PowerSeries([2, -1, 3, 0, 1], 6)
    inner = PowerSeries([0, 1, 1], 6)
    ref = sympy.expand(sum(c * (s + s**2) ** k for k, c in enumerate([2, -1, 3, 0, 1])))
    assert [Fraction(str(ref.coeff(s, k))) for k in range(7)] == list(outer.compose(inner).coeffs)


def test_implicit_solve_against_order_by_order_sympy():
    # z^2 - 72 s^2 z^3 = 1, solved by undetermined coefficients
    s = sympy.symbols("s")
    order = 10
    cs = sympy.symbols(f"c1:{order + 1}")
    z = 1 + sum(c * s**k for k, c in enumerate(cs, start=1))
    eq = sympy.expand(z**2 - 72 * s**2 * z**3 - 1)
    sol = {}
    for k in range(1, order + 1):
        ck = sympy.solve(eq.coeff(s, k).subs(sol), cs[k - 1])[0]
        sol[cs[k - 1]] = ck
    ref = [1] + [Fraction(str(sol[c])) for c in cs]
    ours = implicit_solve({(2, 0): 1, (3, 2): -72, (0, 0): -1}, 1, order)
    assert list(ours.coeffs) == ref


@pytest.mark.parametrize("c, alpha, expected", [
    (Fraction(4, 9), Fraction(1, 2), Fraction(2, 3)),
    (Fraction(8), Fraction(-1, 3), Fraction(1, 2)),
    (Fraction(1), Fraction(7, 5), Fraction(1)),
])
def test_rational_power(c, alpha, expected):
    assert rational_power(c, alpha) == expected


def test_rational_power_rejects_irrational():
    with pytest.raises(ValueError):
        rational_power(Fraction(2), Fraction(1, 2))


def test_evaluate_is_horner():
    assert PowerSeries([1, 2, 3], 2).evaluate(Fraction(1, 2)) == Fraction(11, 4)
