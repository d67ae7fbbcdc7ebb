"""Genus-zero equilibrium data for the cubic potential ``V = l^2/2 + t l^3``.

``z0`` is the leading recurrence coefficient ``b_n^2`` and ``u0`` the leading
``a_n``.  Both are power series in the coupling ``s`` and are cut out by

    3 s u0^2 + u0 + 6 s z0 = 0,     -6 s z0 u0 + (1 - z0) = 0.

Eliminating gives ``z0^2 - 72 s^2 z0^3 = 1`` and the cubic
``18 s^2 u0^3 + 9 s u0^2 + u0 + 6 s = 0``.  The eigenvalue density is
supported on ``[u0 - 2 sqrt(z0), u0 + 2 sqrt(z0)]``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import mpmath

from .series import PowerSeries, implicit_solve

Z0_EQUATION = {(2, 0): 1, (3, 2): -72, (0, 0): -1}
U0_EQUATION = {(3, 2): 18, (2, 1): 9, (1, 0): 1, (0, 1): 6}


@dataclass(frozen=True)
class EquilibriumSeries:
    z0: PowerSeries
    u0: PowerSeries

    @property
    def order(self) -> int:
        return self.z0.order


@dataclass(frozen=True)
class EquilibriumPoint:
    t3: mpmath.mpf
    z0: mpmath.mpf
    u0: mpmath.mpf
    A: mpmath.mpf
    B: mpmath.mpf
    digits: int


def equilibrium_series(order: int) -> EquilibriumSeries:
    """Exact Taylor series of ``z0`` and ``u0`` through ``s^order``.

    >>> e = equilibrium_series(4)
    >>> [int(c) for c in e.z0.coeffs], [int(c) for c in e.u0.coeffs]
    ([1, 0, 36, 0, 3240], [0, -6, 0, -324, 0])
    """
    z0 = implicit_solve(Z0_EQUATION, 1, order)
    u0 = implicit_solve(U0_EQUATION, 0, order)
    return EquilibriumSeries(z0, u0)


def ideal_residuals(eq: EquilibriumSeries) -> tuple[PowerSeries, PowerSeries]:
    """Both generators of the equilibrium ideal evaluated on the series."""
    s = PowerSeries.variable(eq.order)
    z0, u0 = eq.z0, eq.u0
    g1 = 3 * s * u0 * u0 + u0 + 6 * s * z0
    g2 = -6 * s * z0 * u0 + (1 - z0)
    return g1, g2


def endpoint_residuals_series(eq: EquilibriumSeries) -> tuple[PowerSeries, PowerSeries]:
    """Moment conditions fixing the support endpoints, evaluated on the series."""
    s = PowerSeries.variable(eq.order)
    z0, u0 = eq.z0, eq.u0
    r1 = u0 + 3 * s * (u0 * u0 + 2 * z0)
    r2 = u0 * u0 + 2 * z0 + 3 * s * (u0 * u0 * u0 + 6 * u0 * z0) - 2
    return r1, r2


def critical_coupling(digits: int = 50) -> mpmath.mpf:
    """Radius of convergence ``s_c = (108 sqrt 3)^(-1/2)``, where ``z0 = sqrt 3``."""
    with mpmath.workdps(digits + 10):
        return 1 / mpmath.sqrt(108 * mpmath.sqrt(3))


def _solve_z0(t, digits: int):
    """Root of ``z^2 - 72 t^2 z^3 - 1`` on the branch through ``z = 1``.

    For ``|t| < s_c`` the cubic is increasing on ``[1, sqrt 3]`` and changes
    sign there, so bisection followed by Newton polishing is safe.
    """
    g = lambda z: z * z - 72 * t * t * z**3 - 1
    lo, hi = mpmath.mpf(1), mpmath.sqrt(3)
    if g(lo) == 0:
        return lo
    for _ in range(60):
        mid = (lo + hi) / 2
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    z = (lo + hi) / 2
    for _ in range(200):
        dz = g(z) / (2 * z - 216 * t * t * z * z)
        z -= dz
        if abs(dz) < mpmath.mpf(10) ** (-(digits + 5)):
            break
    return z


def equilibrium_numeric(t3, digits: int = 50) -> EquilibriumPoint:
    """High-precision ``z0, u0`` and support endpoints at a real coupling."""
    if digits < 50:
        raise ValueError("numeric equilibrium needs at least 50 digits")
    with mpmath.workdps(digits + 15):
        t = mpmath.mpf(t3)
        sc = critical_coupling(digits)
        if abs(t) >= sc:
            raise ValueError(f"|t3| = {mpmath.nstr(abs(t), 8)} is not below s_c = {mpmath.nstr(sc, 8)}")
        z0 = _solve_z0(t, digits)
        if t == 0:
            u0 = mpmath.mpf(0)
        else:
            # seed from the ideal relation, then polish on the cubic
            u0 = (1 - z0) / (6 * t * z0)
            for _ in range(100):
                f = 18 * t * t * u0**3 + 9 * t * u0 * u0 + u0 + 6 * t
                du = f / (54 * t * t * u0 * u0 + 18 * t * u0 + 1)
                u0 -= du
                if abs(du) < mpmath.mpf(10) ** (-(digits + 5)):
                    break
        r = 2 * mpmath.sqrt(z0)
        point = EquilibriumPoint(t, z0, u0, u0 - r, u0 + r, digits)
    return point


def endpoint_residuals_numeric(point: EquilibriumPoint) -> tuple:
    t, z0, u0 = point.t3, point.z0, point.u0
    with mpmath.workdps(point.digits + 10):
        r1 = u0 + 3 * t * (u0 * u0 + 2 * z0)
        r2 = u0 * u0 + 2 * z0 + 3 * t * (u0**3 + 6 * u0 * z0) - 2
    return r1, r2


def density(point: EquilibriumPoint, lam):
    """Equilibrium density at ``lam``; zero outside the support.

    Warns if the linear prefactor is negative somewhere on the support.
    """
    t, u0, A, B = point.t3, point.u0, point.A, point.B
    lam = mpmath.mpf(lam)
    if lam <= A or lam >= B:
        return mpmath.mpf(0)
    lin = 1 + 3 * t * (lam + u0)
    if min(1 + 3 * t * (A + u0), 1 + 3 * t * (B + u0)) < 0:
        warnings.warn("density prefactor changes sign on the support", RuntimeWarning)
    return lin * mpmath.sqrt((lam - A) * (B - lam)) / (2 * mpmath.pi)


def density_mass(point: EquilibriumPoint):
    """Total mass of the density by quadrature (should be 1)."""
    with mpmath.workdps(point.digits + 10):
        return mpmath.quad(lambda x: density(point, x), [point.A, point.u0, point.B])


def density_grid(point: EquilibriumPoint, n: int) -> list[tuple]:
    """``n`` equally spaced interior samples ``(lambda, rho)``."""
    if n < 1:
        raise ValueError("grid size must be positive")
    with mpmath.workdps(point.digits + 10):
        h = (point.B - point.A) / (n + 1)
        return [(point.A + (i + 1) * h, density(point, point.A + (i + 1) * h)) for i in range(n)]


