import warnings
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from todamaps.equilibrium import (
    critical_coupling,
    density,
    density_grid,
    density_mass,
    endpoint_residuals_numeric,
    endpoint_residuals_series,
    equilibrium_numeric,
    equilibrium_series,
    ideal_residuals,
)


@pytest.fixture(scope="module")
def eq24():
    return equilibrium_series(24)


def test_leading_coefficients(eq24):
    assert eq24.z0.coeffs[:5] == (1, 0, 36, 0, 3240)
    assert eq24.u0.coeffs[:4] == (0, -6, 0, -324)


def test_ideal_and_endpoint_residuals_vanish(eq24):
    assert all(r.is_zero() for r in ideal_residuals(eq24))
    assert all(r.is_zero() for r in endpoint_residuals_series(eq24))


def test_parity(eq24):
    assert eq24.z0.is_even() and eq24.u0.is_odd()


def test_eliminated_equations(eq24):
    s = eq24.z0.variable(24)
    z0, u0 = eq24.z0, eq24.u0
    assert (z0 * z0 - 72 * s * s * z0 * z0 * z0 - 1).is_zero()
    assert (18 * s * s * u0 * u0 * u0 + 9 * s * u0 * u0 + u0 + 6 * s).is_zero()


def test_critical_coupling():
    sc = critical_coupling(50)
    with mpmath.workdps(60):
        z = mpmath.sqrt(3)
        assert abs(z * z - 72 * sc * sc * z**3 - 1) < mpmath.mpf(10) ** -45


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=Fraction(-3, 100), max_value=Fraction(3, 100), max_denominator=1000))
def test_numeric_point_matches_series(t):
    point = equilibrium_numeric(str(float(t)), 50)
    eq = equilibrium_series(40)
    with mpmath.workdps(60):
        x = mpmath.mpf(str(float(t)))
        # the tails are below (t/s_c)^40 ~ 1e-15 at |t| <= 0.03
        assert abs(point.z0 - eq.z0.evaluate(x)) < mpmath.mpf(10) ** -12
        assert abs(point.u0 - eq.u0.evaluate(x)) < mpmath.mpf(10) ** -12
    r1, r2 = endpoint_residuals_numeric(point)
    assert abs(r1) < mpmath.mpf(10) ** -45 and abs(r2) < mpmath.mpf(10) ** -45


@pytest.mark.parametrize("t3", ["0", "0.03", "-0.05"])
def test_density_has_unit_mass(t3):
    point = equilibrium_numeric(t3, 50)
    assert abs(density_mass(point) - 1) < mpmath.mpf(10) ** -40


def test_semicircle_at_zero_coupling():
    point = equilibrium_numeric("0", 50)
    assert point.A == -2 and point.B == 2
    assert abs(density(point, 0) - 1 / mpmath.pi) < mpmath.mpf(10) ** -45
    assert density(point, 3) == 0
    assert len(density_grid(point, 5)) == 5


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        equilibrium_numeric("0.08", 50)
    with pytest.raises(ValueError):
        equilibrium_numeric("0.01", 30)
    with pytest.raises(ValueError):
        density_grid(equilibrium_numeric("0", 50), 0)
