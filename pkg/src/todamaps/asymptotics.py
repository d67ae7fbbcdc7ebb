"""Large-``n`` expansions of the recurrence coefficients and the hierarchy they obey.

The coefficients are expanded as

    a_{n+k} ~ sum_g h_g(s, w) n^(-g),     b^2_{n+k} ~ sum_g f_g(s, w) n^(-2g),

evaluated at ``w = 1 + k/n``, with the self-similar form

    h_g = w^(1/2 - g) u_g(s w^sigma),     f_g = w^(1 - 2g) z_g(s w^sigma),

where ``sigma = 1/2`` for the trivalent coupling.  For such a function the
``w``-derivative at ``w = 1`` is the diagonal operator

    D_p E = p E + sigma s E'     (coefficient of s^k scaled by p + sigma k),

and each further derivative lowers ``p`` by one.  Everything below works on
the Taylor coefficients of ``u_g`` and ``z_g`` in ``s``.

Substituting the expansions into the trivalent string equations and
collecting powers of ``1/n`` gives, at ``n^-(2g+1)``, a linear system for
``(u_2g, z_g)`` whose matrix is ``D`` applied to ``A (u, z)`` with

    A = [[1 + 6 s u0, 6 s], [6 s z0, 1 + 6 s u0]],

and at ``n^-2g`` a scalar equation for ``u_(2g-1)``.  ``D_p`` fails to be
invertible on exactly one Taylor coefficient (``k = -p / sigma``); those
resonant coefficients are supplied from outside (map counts or a closed form).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable

from .equilibrium import EquilibriumSeries, equilibrium_series
from .motzkin import OperatorPolynomial, difference_string_system, toda_system
from .series import PowerSeries

TRIVALENT_SIGMA = Fraction(1, 2)


def self_similar_derivative(E: PowerSeries, p, sigma=TRIVALENT_SIGMA) -> PowerSeries:
    """``d/dw`` of ``w^p E(s w^sigma)`` at ``w = 1``.

    >>> u0 = PowerSeries([0, -6, 0, -324], 3)
    >>> self_similar_derivative(u0, Fraction(1, 2)).coeffs
    (Fraction(0, 1), Fraction(-6, 1), Fraction(0, 1), Fraction(-648, 1))
    """
    p, sigma = Fraction(p), Fraction(sigma)
    return E.map_coefficients(lambda k, c: (p + sigma * k) * c)


def w_derivative(E: PowerSeries, p, m: int, sigma=TRIVALENT_SIGMA) -> PowerSeries:
    """``m``-th ``w``-derivative of ``w^p E(s w^sigma)`` at ``w = 1``."""
    p = Fraction(p)
    for i in range(m):
        E = self_similar_derivative(E, p - i, sigma)
    return E


def reduce_w_derivative(E: PowerSeries, p, k: int, sigma=TRIVALENT_SIGMA) -> tuple[PowerSeries, Fraction]:
    """``k`` ``w``-derivatives of ``w^p E(s w^sigma)``, returned as the pair
    ``(series, p - k)`` that describes the result in the same self-similar form.

    >>> reduce_w_derivative(PowerSeries([5], 0), Fraction(3, 2), 1)
    (15/2 + O(s^1), Fraction(1, 2))
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    return w_derivative(E, p, k, sigma), Fraction(p) - k


def inverse_self_similar_derivative(F: PowerSeries, p, sigma=TRIVALENT_SIGMA, free: Fraction | None = None):
    """Solve ``D_p X = F`` coefficientwise.

    Returns ``(X, k_res)`` where ``k_res`` is the resonant index (or None).
    At the resonance ``F`` must vanish and ``X`` takes the value ``free``
    (zero if not given).
    """
    p, sigma = Fraction(p), Fraction(sigma)
    k_res = -p / sigma
    k_res = int(k_res) if k_res.denominator == 1 and 0 <= k_res <= F.order else None
    out = []
    for k, c in enumerate(F.coeffs):
        lam = p + sigma * k
        if lam == 0:
            if c != 0:
                raise ArithmeticError(f"solvability fails: forcing has s^{k} coefficient {c} at a resonance")
            out.append(Fraction(0) if free is None else Fraction(free))
        else:
            out.append(c / lam)
    return PowerSeries(out, F.order, F.var), k_res


# --------------------------------------------------------------------------
# families and asymptotic series
# --------------------------------------------------------------------------


@dataclass
class SelfSimilarFamily:
    """The coefficients ``u_g`` (kind ``"h"``) or ``z_g`` (kind ``"f"``)."""

    kind: str
    coeffs: dict[int, PowerSeries] = field(default_factory=dict)
    sigma: Fraction = TRIVALENT_SIGMA

    def prefactor(self, g: int) -> Fraction:
        return Fraction(1, 2) - g if self.kind == "h" else Fraction(1 - 2 * g)

    def grade(self, g: int) -> int:
        return g if self.kind == "h" else 2 * g

    @property
    def order(self) -> int:
        return min(c.order for c in self.coeffs.values())


class AsymptoticSeries:
    """``sum_r c_r n^(-r)`` for ``r <= R``, with power-series coefficients."""

    __slots__ = ("coeffs", "s_order")

    def __init__(self, coeffs: list[PowerSeries]):
        self.coeffs = list(coeffs)
        self.s_order = min(c.order for c in coeffs)

    @classmethod
    def zero(cls, R: int, s_order: int) -> "AsymptoticSeries":
        return cls([PowerSeries([], s_order) for _ in range(R + 1)])

    @classmethod
    def constant(cls, c: PowerSeries | int, R: int, s_order: int) -> "AsymptoticSeries":
        out = cls.zero(R, s_order)
        out.coeffs[0] = out.coeffs[0] + c
        return out

    @property
    def R(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, r: int) -> PowerSeries:
        return self.coeffs[r]

    def __add__(self, other: "AsymptoticSeries") -> "AsymptoticSeries":
        R = min(self.R, other.R)
        return AsymptoticSeries([self.coeffs[r] + other.coeffs[r] for r in range(R + 1)])

    def __neg__(self) -> "AsymptoticSeries":
        return AsymptoticSeries([-c for c in self.coeffs])

    def __sub__(self, other: "AsymptoticSeries") -> "AsymptoticSeries":
        return self + (-other)

    def __mul__(self, other) -> "AsymptoticSeries":
        if isinstance(other, (int, Fraction, PowerSeries)):
            return AsymptoticSeries([c * other for c in self.coeffs])
        R = min(self.R, other.R)
        out = []
        for r in range(R + 1):
            acc = self.coeffs[0] * other.coeffs[r]
            for i in range(1, r + 1):
                acc = acc + self.coeffs[i] * other.coeffs[r - i]
            out.append(acc)
        return AsymptoticSeries(out)

    __rmul__ = __mul__

    def shift_inverse_n(self, m: int = 1) -> "AsymptoticSeries":
        """Multiply by ``n^-m`` (keeping the truncation order)."""
        zero = PowerSeries([], self.s_order)
        return AsymptoticSeries([zero] * m + self.coeffs[: self.R + 1 - m])

    def derivative(self) -> "AsymptoticSeries":
        return AsymptoticSeries([c.derivative() for c in self.coeffs])

    def first_nonzero(self) -> int | None:
        for r, c in enumerate(self.coeffs):
            if not c.is_zero():
                return r
        return None

    def vanishes_through(self, R: int) -> bool:
        return all(self.coeffs[r].is_zero() for r in range(R + 1))


def offset_evaluate(F: SelfSimilarFamily, k: int, R: int) -> AsymptoticSeries:
    """Expansion of ``a_{n+k}`` or ``b^2_{n+k}`` through ``n^-R``.

    The coefficient of ``n^-r`` collects ``k^m/m! d_w^m F_g`` over all
    ``grade(g) + m = r``; every ``F_g`` with ``grade(g) <= R`` must be present.

    >>> fam = SelfSimilarFamily("h", {0: PowerSeries([0, -6], 1), 1: PowerSeries([0, 0], 1)})
    >>> offset_evaluate(fam, 1, 1)[1].coeffs
    (Fraction(0, 1), Fraction(-6, 1))
    """
    s_order = F.order
    out = []
    for r in range(R + 1):
        acc = PowerSeries([], s_order)
        for g, E in F.coeffs.items():
            m = r - F.grade(g)
            if m < 0:
                continue
            if k == 0 and m > 0:
                continue
            acc = acc + w_derivative(E, F.prefactor(g), m, F.sigma) * Fraction(k**m, factorial(m))
        missing = [g for g in range(r + 1) if F.grade(g) <= r and g not in F.coeffs]
        if missing:
            raise KeyError(f"family {F.kind} lacks g = {missing[0]} needed at order n^-{r}")
        out.append(acc)
    return AsymptoticSeries(out)


def evaluate_polynomial(poly: OperatorPolynomial, h: SelfSimilarFamily, f: SelfSimilarFamily, R: int) -> AsymptoticSeries:
    """Substitute the expansions into an operator polynomial (``t -> s``)."""
    s_order = min(h.order, f.order)
    cache_a: dict[int, AsymptoticSeries] = {}
    cache_b: dict[int, AsymptoticSeries] = {}

    def a(k):
        if k not in cache_a:
            cache_a[k] = offset_evaluate(h, k, R)
        return cache_a[k]

    def b2(k):
        if k not in cache_b:
            cache_b[k] = offset_evaluate(f, k, R)
        return cache_b[k]

    one = AsymptoticSeries.constant(1, R, s_order)
    return poly.evaluate(a, b2, t=PowerSeries.variable(s_order), one=one)


def _pad_top(F: SelfSimilarFamily, R: int) -> SelfSimilarFamily:
    # a coefficient of grade exactly R is invisible to both equation systems
    # at order n^-R (it only enters through differences), so it may be absent
    coeffs = dict(F.coeffs)
    for g in range(R + 1):
        if F.grade(g) == R and g not in coeffs:
            coeffs[g] = PowerSeries([], F.order)
    return SelfSimilarFamily(F.kind, coeffs, F.sigma)


def inverse_n(R: int, s_order: int) -> AsymptoticSeries:
    """The asymptotic series ``1/n``."""
    out = AsymptoticSeries.zero(R, s_order)
    if R >= 1:
        out.coeffs[1] = PowerSeries.constant(1, s_order)
    return out


def string_residual(h: SelfSimilarFamily, f: SelfSimilarFamily, R: int) -> tuple[AsymptoticSeries, AsymptoticSeries]:
    """Residuals ``rhs - lhs`` of the trivalent string equations.

    Returns ``(subdiagonal, diagonal)``: the subdiagonal one is divided by
    ``b^2_{n+1}``, the diagonal one has ``1/n`` on its left side.
    """
    diag, sub = difference_string_system(1)
    h, f = _pad_top(h, R), _pad_top(f, R)
    s_order = min(h.order, f.order)
    r_sub = evaluate_polynomial(sub.rhs, h, f, R)
    r_diag = evaluate_polynomial(diag.rhs, h, f, R) - inverse_n(R, s_order)
    return r_sub, r_diag


def toda_residual(h: SelfSimilarFamily, f: SelfSimilarFamily, R: int) -> tuple[AsymptoticSeries, AsymptoticSeries]:
    """Residuals of the trivalent Toda equations ``-(1/n) d/ds = rhs``.

    The ``s``-derivative costs one order of ``s``-precision.
    """
    a_eq, b_eq = toda_system(1)
    h, f = _pad_top(h, R), _pad_top(f, R)
    res = []
    for eq, fam in ((a_eq, h), (b_eq, f)):
        rhs = evaluate_polynomial(eq.rhs, h, f, R)
        lhs = -offset_evaluate(fam, 0, R).derivative().shift_inverse_n(1)
        res.append(rhs - lhs)
    return res[0], res[1]


# --------------------------------------------------------------------------
# the leading-order matrix
# --------------------------------------------------------------------------


def leading_matrix(u0: PowerSeries, z0: PowerSeries) -> list[list[PowerSeries]]:
    s = PowerSeries.variable(u0.order)
    d = 1 + 6 * s * u0
    return [[d, 6 * s], [6 * s * z0, d]]


def leading_matrix_inverse(u0: PowerSeries, z0: PowerSeries) -> list[list[PowerSeries]]:
    """Inverse of :func:`leading_matrix` written with first ``w``-derivatives."""
    hw = self_similar_derivative(u0, Fraction(1, 2))
    fw = self_similar_derivative(z0, 1)
    return [[fw, hw], [hw * z0, fw]]


def matmul2(A, B):
    return [[A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2)] for i in range(2)]


# --------------------------------------------------------------------------
# the hierarchy
# --------------------------------------------------------------------------

def _padded(u, z, r, zero):
    # coefficients of grade r enter the residual only from order n^-(r+1) on
    hu = {g: u.get(g, zero) for g in range(r + 1)}
    fz = {g: z.get(g, zero) for g in range(r // 2 + 1)}
    return SelfSimilarFamily("h", hu), SelfSimilarFamily("f", fz)


def _diagonal_at(u, z, r, zero) -> PowerSeries:
    h, f = _padded(u, z, r, zero)
    return string_residual(h, f, r)[1][r]


ResonanceSource = Callable[[str, int, int], tuple[Fraction, str]]
"""``(series, g, power) -> (coefficient, provenance)`` for a pinned coefficient."""


@dataclass
class Hierarchy:
    u: dict[int, PowerSeries]
    z: dict[int, PowerSeries]
    provenance: dict[str, str]
    order: int

    def families(self) -> tuple[SelfSimilarFamily, SelfSimilarFamily]:
        return SelfSimilarFamily("h", dict(self.u)), SelfSimilarFamily("f", dict(self.z))


def solve_hierarchy(g_max: int, order: int, resonance: ResonanceSource | None = None,
                    equilibrium: EquilibriumSeries | None = None) -> Hierarchy:
    """Solve the string hierarchy for ``u_0..u_(2 g_max)`` and ``z_0..z_(g_max)``.

    Each ``z_g`` (``g >= 1``) carries two undetermined Taylor coefficients, at
    ``s^(4g-2)`` and ``s^(4g)``; ``resonance("z", g, power)`` supplies them.
    The resonant coefficient of each ``u_(2g-1)``, at ``s^(4g-3)``, is fixed
    by the diagonal string equation at the same order, which the
    subdiagonal one does not constrain there.
    """
    if resonance is None:
        from .genus import default_resonance_source

        resonance = default_resonance_source()
    eq = equilibrium or equilibrium_series(order)
    u0, z0 = eq.u0.truncate(order), eq.z0.truncate(order)
    s = PowerSeries.variable(order)
    u = {0: u0}
    z = {0: z0}
    prov: dict[str, str] = {}
    zero = PowerSeries([], order)
    d11 = 1 + 6 * s * u0
    Ainv = leading_matrix_inverse(u0, z0)
    for r in range(2, 2 * g_max + 2):
        if r % 2 == 0:
            j = r - 1  # unknown u_j, j odd
            u[j] = zero
            h, f = _padded(u, z, r, zero)
            forcing = string_residual(h, f, r)[0][r]
            X, k_res = inverse_self_similar_derivative(-forcing, Fraction(1, 2) - j)
            u[j] = X / d11
            if k_res is not None:
                # the diagonal equation at the same order is linear in the
                # free coefficient; choose it so that equation holds too
                base = _diagonal_at(u, z, r, zero)
                u[j] = (X + PowerSeries.monomial(k_res, order)) / d11
                slope = _diagonal_at(u, z, r, zero) - base
                k0 = slope.valuation()
                if k0 is None:
                    raise ArithmeticError(f"u_{j}: diagonal equation does not see the free coefficient")
                alpha = -base[k0] / slope[k0]
                u[j] = (X + PowerSeries.monomial(k_res, order, alpha)) / d11
                prov[f"u{j}[s^{k_res}]"] = "diagonal string equation"
            if not _diagonal_at(u, z, r, zero).is_zero():
                raise ArithmeticError(f"diagonal string equation fails at order n^-{r}")
            if not u[j].is_odd():
                raise ArithmeticError(f"u_{j} lost its parity")
        else:
            g = (r - 1) // 2
            u[2 * g] = zero
            z[g] = zero
            h, f = _padded(u, z, r, zero)
            r_sub, r_diag = string_residual(h, f, r)
            X1, k1 = inverse_self_similar_derivative(-r_sub[r], Fraction(1, 2) - 2 * g)
            X2, k2 = inverse_self_similar_derivative(-r_diag[r], 1 - 2 * g)
            zz = Ainv[1][0] * X1 + Ainv[1][1] * X2
            # pin z_g at s^(4g-2) through X2[k2], then at s^(4g) through X1[k1]
            lo, hi = 4 * g - 2, 4 * g
            if lo <= order:
                target, src = resonance("z", g, lo)
                beta = Fraction(target) - zz[lo]
                X2 = X2 + PowerSeries.monomial(k2, order, beta)
                prov[f"z{g}[s^{lo}]"] = src
            if hi <= order:
                zz = Ainv[1][0] * X1 + Ainv[1][1] * X2
                target, src = resonance("z", g, hi)
                slope = (Ainv[1][0] * PowerSeries.monomial(k1, order))[hi]
                alpha = (Fraction(target) - zz[hi]) / slope
                X1 = X1 + PowerSeries.monomial(k1, order, alpha)
                prov[f"z{g}[s^{hi}]"] = src
            u[2 * g] = Ainv[0][0] * X1 + Ainv[0][1] * X2
            z[g] = Ainv[1][0] * X1 + Ainv[1][1] * X2
    return Hierarchy(u, z, prov, order)


# --------------------------------------------------------------------------
# closed forms at first order
# --------------------------------------------------------------------------


def h2_f1_closed(u0: PowerSeries, z0: PowerSeries) -> tuple[PowerSeries, PowerSeries]:
    """``(u_2, z_1)`` from leading-order data alone, with no resonant constants.

    Both are ``-A^{-1}`` applied to the vector ``(B, 0)`` where
    ``B = 13/4 s h_w^2 + 5/2 s h h_ww + 4 s f_ww + 5/12 h_ww``.
    """
    s = PowerSeries.variable(u0.order)
    hw = self_similar_derivative(u0, Fraction(1, 2))
    hww = w_derivative(u0, Fraction(1, 2), 2)
    fww = w_derivative(z0, 1, 2)
    B = Fraction(13, 4) * s * hw * hw + Fraction(5, 2) * s * u0 * hww + 4 * s * fww + Fraction(5, 12) * hww
    Ainv = leading_matrix_inverse(u0, z0)
    return -(Ainv[0][0] * B), -(Ainv[1][0] * B)


def z1_from_derivatives(u0: PowerSeries, z0: PowerSeries) -> PowerSeries:
    """``z_1 = -3/2 s z0 h_w f_ww - 3/4 s z0 h_w^3``, a reduced form of the above."""
    s = PowerSeries.variable(u0.order)
    hw = self_similar_derivative(u0, Fraction(1, 2))
    fww = w_derivative(z0, 1, 2)
    return Fraction(-3, 2) * s * z0 * hw * fww - Fraction(3, 4) * s * z0 * hw * hw * hw


def z1_closed_in_z0(z0: PowerSeries) -> PowerSeries:
    """``z_1 = (z0^2 - 1)^2 (z0^2 + 9) z0 / (4 (z0^2 - 3)^4)``."""
    q = z0 * z0
    return (q - 1) * (q - 1) * (q + 9) * z0 / (4 * (q - 3) ** 4)


def z1_closed_numeric(z0):
    """The same closed form at a numeric ``z0``."""
    q = z0 * z0
    return (q - 1) ** 2 * (q + 9) * z0 / (4 * (q - 3) ** 4)
