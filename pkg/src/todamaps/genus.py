"""Genus-by-genus free energies ``e_g(s)`` from the recurrence coefficients.

Writing ``log tau_n^2 ~ sum_g n^(2-2g) w^(2-2g) e_g(s w^(1/2))`` with
``w = 1 + k/n``, the centred second difference in ``n`` equals
``log b_n^2 - log b_n^2(0)``.  Matching powers of ``n^-2`` gives, for each
``g``, the linear ODE

    (2-2g)(1-2g) e_g + (7-8g)/4 s e_g' + s^2/4 e_g'' = H_g,

whose left side is the second ``w``-derivative of ``w^(2-2g) e_g``.  The
driver ``H_g`` collects the expansion of ``log b^2`` at order ``n^-2g`` minus
the higher ``w``-derivatives of the lower free energies.  On the Taylor
coefficient of ``s^(2k)`` the ODE is multiplication by
``(1-2g+k)(2-2g+k)``, which vanishes at ``k = 2g-1`` and ``k = 2g-2``; those
coefficients are supplied from outside.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable

from .asymptotics import w_derivative, z1_closed_in_z0
from .series import PowerSeries

ResonanceSource = Callable[[str, int, int], tuple[Fraction, str]]


def ode_factor(g: int, j: int) -> Fraction:
    """Eigenvalue of the genus-``g`` ODE operator on ``s^j``."""
    return (1 - 2 * g + Fraction(j, 2)) * (2 - 2 * g + Fraction(j, 2))


def ode_operator(E: PowerSeries, g: int) -> PowerSeries:
    """Left side of the genus-``g`` ODE, using ``s E' -> k E_k`` and
    ``s^2 E'' -> k(k-1) E_k`` on each Taylor coefficient."""
    c0 = (2 - 2 * g) * (1 - 2 * g)
    return E.map_coefficients(lambda k, c: (c0 + Fraction((7 - 8 * g) * k, 4) + Fraction(k * (k - 1), 4)) * c)


def log_b_rhs(z: dict[int, PowerSeries], g_max: int) -> list[PowerSeries]:
    """Coefficients of ``x^g`` in ``log(sum_g z_g x^g)``, ``x = n^-2``.

    >>> z0 = PowerSeries([1, 0, 36, 0, 3240], 4)
    >>> log_b_rhs({0: z0}, 0)[0].coeffs[:5]
    (Fraction(0, 1), Fraction(0, 1), Fraction(36, 1), Fraction(0, 1), Fraction(2592, 1))
    """
    z0 = z[0]
    order = min(z[g].order for g in range(g_max + 1))
    y = {j: z[j].truncate(order) / z0.truncate(order) for j in range(1, g_max + 1)}
    q: list[PowerSeries] = [z0.truncate(order).log()]
    # log(1 + Y): j q_j = j y_j - sum_{i<j} i q_i y_{j-i}
    for j in range(1, g_max + 1):
        acc = j * y[j]
        for i in range(1, j):
            acc = acc - i * q[i] * y[j - i]
        q.append(acc * Fraction(1, j))
    return q


def second_difference_term(E: PowerSeries, h: int, g: int) -> PowerSeries:
    """Contribution of ``e_h`` to the second difference at order ``n^-2g``:
    ``2/(2m)! d_w^(2m) (w^(2-2h) e_h)`` with ``m = g - h + 1``."""
    m = g - h + 1
    return w_derivative(E, 2 - 2 * h, 2 * m) * Fraction(2, factorial(2 * m))


def second_difference_lhs(g: int, e: dict[int, PowerSeries]) -> PowerSeries:
    """Contributions of ``e_0 .. e_(g-1)`` at order ``n^-2g``."""
    order = min(e[h].order for h in range(g))
    out = PowerSeries([], order)
    for h in range(g):
        out = out + second_difference_term(e[h].truncate(order), h, g)
    return out


def second_difference_total(g: int, e: dict[int, PowerSeries]) -> PowerSeries:
    """Full second difference at order ``n^-2g`` including ``e_g`` itself."""
    own = second_difference_term(e[g], g, g)
    return own if g == 0 else second_difference_lhs(g, e) + own


def driver_H(g: int, z: dict[int, PowerSeries], e: dict[int, PowerSeries]) -> PowerSeries:
    """Right side ``H_g`` of the genus-``g`` ODE."""
    rhs = log_b_rhs(z, g)[g]
    if g == 0:
        return rhs
    lhs = second_difference_lhs(g, e)
    order = min(rhs.order, lhs.order)
    return rhs.truncate(order) - lhs.truncate(order)


def driver_H1_direct(z: dict[int, PowerSeries], e0: PowerSeries) -> PowerSeries:
    """``H_1 = z1/z0 - 1/12 d_w^4 (w^2 e0)`` written out for genus one."""
    order = min(z[0].order, z[1].order, e0.order)
    D = e0.truncate(order)
    for p in (2, 1, 0, -1):
        D = D.map_coefficients(lambda k, c, p=p: (p + Fraction(k, 2)) * c)
    return z[1].truncate(order) / z[0].truncate(order) - D * Fraction(1, 12)


@dataclass(frozen=True)
class FreeEnergy:
    g: int
    series: PowerSeries
    provenance: dict[int, str]


def solve_eg(g: int, H: PowerSeries, resonance: ResonanceSource | None = None) -> FreeEnergy:
    """Invert the genus-``g`` ODE on Taylor coefficients.

    Non-resonant coefficients are ``eta_j / ((1-2g+j/2)(2-2g+j/2))``.  At a
    resonance the driver must vanish (checked) and the coefficient comes from
    ``resonance("e", g, j)``; the constant term is zero by normalisation.
    """
    out = []
    prov: dict[int, str] = {}
    for j, eta in enumerate(H.coeffs):
        lam = ode_factor(g, j)
        if lam:
            out.append(eta / lam)
            prov[j] = "formula"
            continue
        if eta != 0:
            raise ArithmeticError(f"e_{g}: driver has s^{j} coefficient {eta} at a resonance")
        if j == 0:
            out.append(Fraction(0))
            prov[j] = "normalisation"
            continue
        if resonance is None:
            raise ValueError(f"e_{g} needs its resonant s^{j} coefficient")
        val, src = resonance("e", g, j)
        out.append(Fraction(val))
        prov[j] = f"injected:{src}"
    return FreeEnergy(g, PowerSeries(out, H.order), prov)


# --------------------------------------------------------------------------
# closed forms
# --------------------------------------------------------------------------


def eg_closed(g: int, z0: PowerSeries) -> PowerSeries:
    """Closed forms of ``e_0``, ``e_1``, ``e_2`` as series in ``s`` through ``z0``."""
    q = z0 * z0
    if g == 0:
        return z0.log() * Fraction(1, 2) + (z0 - 1) * (q - 6 * z0 - 3) / (z0 + 1) * Fraction(1, 12)
    if g == 1:
        return ((3 - q) * Fraction(1, 2)).log() * Fraction(-1, 24)
    if g == 2:
        return (q - 1) ** 3 * (4 * q * q - 93 * q - 261) / (q - 3) ** 5 * Fraction(1, 960)
    raise ValueError("closed forms are known for g <= 2 only")


def eg_closed_numeric(g: int, z0):
    """The closed forms at a numeric ``z0`` (mpmath)."""
    import mpmath

    q = z0 * z0
    if g == 0:
        return mpmath.log(z0) / 2 + (z0 - 1) * (q - 6 * z0 - 3) / (12 * (z0 + 1))
    if g == 1:
        return -mpmath.log((3 - q) / 2) / 24
    if g == 2:
        return (q - 1) ** 3 * (4 * q * q - 93 * q - 261) / (960 * (q - 3) ** 5)
    raise ValueError("closed forms are known for g <= 2 only")


def taylor_e0_gamma(j: int) -> Fraction:
    """Coefficient of ``s^(2j)`` in ``e_0`` from the Gamma-function count.

    ``3^(2j) 2^(3j) / j * Gamma(3j/2) / (Gamma(j/2) Gamma(3+j))``, with the
    Gamma ratio expanded as the rising product ``(j/2)(j/2+1)...(3j/2-1)``.

    >>> [taylor_e0_gamma(j) for j in (1, 2, 3)]
    [Fraction(6, 1), Fraction(216, 1), Fraction(13608, 1)]
    """
    if j < 1:
        raise ValueError("j must be positive")
    rising = Fraction(1)
    for i in range(j):
        rising *= Fraction(j, 2) + i
    return Fraction(3 ** (2 * j) * 2 ** (3 * j), j) * rising / factorial(2 + j)


def taylor_e1_contour(j: int) -> Fraction:
    """The genus-one contour-residue expression at index ``j``.

    ``3^(2j-1) 2^(3j-2) / j`` times the residue at ``zeta = 1`` of
    ``-zeta^((3j+1)/2) / ((zeta - 3)(zeta - 1)^j)``.  At ``j = 1`` this gives
    3, while the closed form's ``s^2`` coefficient is 3/2; both are reported
    and not reconciled.
    """
    if j < 1:
        raise ValueError("j must be positive")
    alpha = Fraction(3 * j + 1, 2)

    def binom(a: Fraction, i: int) -> Fraction:
        out = Fraction(1)
        for r in range(i):
            out *= (a - r) / (r + 1)
        return out

    # -zeta^alpha/(zeta - 3) = (1/2) sum_i C(alpha, i) x^i sum_l (x/2)^l, x = zeta - 1
    res = sum((binom(alpha, i) * Fraction(1, 2 ** (j - 1 - i)) for i in range(j)), Fraction(0)) / 2
    return Fraction(3 ** (2 * j - 1) * 2 ** (3 * j - 2), j) * res


def w_derivative_binomial(E: PowerSeries, p, m: int) -> PowerSeries:
    """``d_w^m (w^p E(s w^(1/2)))`` at ``w = 1`` from the binomial series of
    ``(1 + eps)^(p + j/2)``; an independent check of the operator chain."""
    p = Fraction(p)

    def gbinom(a: Fraction, i: int) -> Fraction:
        out = Fraction(1)
        for r in range(i):
            out *= (a - r) / (r + 1)
        return out

    return E.map_coefficients(lambda j, c: c * gbinom(p + Fraction(j, 2), m) * factorial(m))


# --------------------------------------------------------------------------
# recurrence coefficients from free energies
# --------------------------------------------------------------------------


def z_from_free_energies(g: int, e: dict[int, PowerSeries], z: dict[int, PowerSeries]) -> PowerSeries:
    """``z_g`` read off the second-difference identity, given ``e_0..e_g`` and ``z_0..z_(g-1)``."""
    total = second_difference_total(g, e)
    order = min(total.order, *(z[h].order for h in range(g)))
    placeholder = dict(z)
    placeholder[g] = PowerSeries([], order)
    partial = log_b_rhs({h: placeholder[h].truncate(order) for h in range(g + 1)}, g)[g]
    return (total.truncate(order) - partial) * z[0].truncate(order)


# --------------------------------------------------------------------------
# resonance sources
# --------------------------------------------------------------------------

KNOWN_VALUES: dict[tuple[str, int, int], Fraction] = {
    ("z", 1, 2): Fraction(0),
    ("z", 1, 4): Fraction(810),
    ("e", 1, 2): Fraction(3, 2),
    ("e", 2, 4): Fraction(0),
    ("e", 2, 6): Fraction(8505, 2),
}
"""Map-count values reproduced by the oracle (the last needs 18 darts)."""


def default_resonance_source(oracle_darts: int = 14, order: int | None = None) -> ResonanceSource:
    """Oracle when the enumeration fits ``oracle_darts``, then closed forms,
    then :data:`KNOWN_VALUES`."""
    from . import oracle
    from .equilibrium import equilibrium_series

    cache: dict = {}

    def closed(kind: str, g: int, power: int) -> Fraction | None:
        if g > 2:
            return None
        R = max(power, order or 0)
        key = ("closed", R)
        if key not in cache:
            z0 = equilibrium_series(R).z0
            e = {h: eg_closed(h, z0) for h in range(3)}
            z = {0: z0, 1: z1_closed_in_z0(z0)}
            z[2] = z_from_free_energies(2, e, z)
            cache[key] = (e, z)
        e, z = cache[key]
        return (e if kind == "e" else z)[g][power]

    def source(kind: str, g: int, power: int) -> tuple[Fraction, str]:
        profile = (3,) * power if kind == "e" else (1, 1) + (3,) * power
        if sum(profile) <= oracle_darts or oracle.faces_required(profile, g) < 1:
            fn = oracle.free_energy_coefficient if kind == "e" else oracle.recurrence_coefficient
            return fn(g, power, max_darts=oracle_darts), "oracle"
        val = closed(kind, g, power)
        if val is not None:
            return val, "closed-form"
        if (kind, g, power) in KNOWN_VALUES:
            return KNOWN_VALUES[(kind, g, power)], "table"
        raise LookupError(f"no source for the s^{power} coefficient of {kind}_{g}")

    return source


def solve_free_energies(g_max: int, order: int, resonance: ResonanceSource | None = None,
                        hierarchy=None) -> dict[int, FreeEnergy]:
    """``e_0 .. e_(g_max)`` from the recurrence-coefficient hierarchy."""
    from .asymptotics import solve_hierarchy

    src = resonance or default_resonance_source(order=order)
    hier = hierarchy or solve_hierarchy(g_max, order, src)
    e: dict[int, PowerSeries] = {}
    out: dict[int, FreeEnergy] = {}
    for g in range(g_max + 1):
        fe = solve_eg(g, driver_H(g, hier.z, e), src)
        e[g] = fe.series
        out[g] = fe
    return out
