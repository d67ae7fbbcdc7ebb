"""High-precision recurrence coefficients from the cubic weight on a contour.

The weight ``exp(-N V(l))`` with ``V = l^2/2 + t l^3`` is integrated along a
contour that agrees with the real axis where the Gaussian part dominates and
escapes to infinity in the sector around ``arg l = 2 pi/3``, where ``t l^3``
is real and positive (for ``t > 0``).  The contour leaves the real axis at
``c`` and runs vertically upward.  On the line ``Re l = c`` one has

    Re V(c + iy) = V(c) + y^2 (-1/2 - 3 t c),

so the integrand decays like a Gaussian there whenever ``c < -1/(6t)``.  The
default ``c = -1/(3t)`` is the saddle of ``V``, where ``exp(-N V)`` is
smallest along the real axis.  Any admissible ``c`` gives the same moments,
as does bending the real part of the path into the complex plane; both are
exposed to test contour independence.

Moments feed two independent routes to the recurrence coefficients: Hankel
determinants of the moments, and a discretised Stieltjes procedure run on the
quadrature nodes.  Negative couplings use the mirror contour, on which
``c_k(-t) = (-1)^k conj(c_k(t))``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath.calculus.quadrature import GaussLegendre

DEFAULT_DIGITS = int(os.environ.get("TODAMAPS_DIGITS", "50"))
MIN_DIGITS = 50


@dataclass(frozen=True)
class ContourSpec:
    """Contour and quadrature parameters.

    ``break_point`` is where the path leaves the real axis (default: the
    saddle ``-1/(3t)``); ``bend`` lifts the horizontal part by
    ``bend * sin(pi (x - c)/(L - c))``.  ``degree`` selects
    ``3 * 2^(degree-1)`` Gauss-Legendre nodes per panel.
    """

    t3: str
    N: int
    digits: int = DEFAULT_DIGITS
    break_point: str | None = None
    bend: str = "0"
    degree: int = 6
    panel: str = "0.5"


@dataclass
class MomentTable:
    spec: ContourSpec
    moments: list
    work_dps: int
    nodes: list = field(repr=False)
    weights: list = field(repr=False)
    max_imag: mpmath.mpf = mpmath.mpf(0)
    tail: mpmath.mpf = mpmath.mpf(0)


@dataclass
class RecurrenceTable:
    """``a[n]`` for ``n = 0..n_max`` and ``b2[n]`` for ``n = 1..n_max`` (``b2[0]`` unused)."""

    a: list
    b2: list
    route: str
    log_hankel: list | None = None
    first_zero: int | None = None


@lru_cache(maxsize=None)
def _gl_nodes(degree: int, dps: int):
    with mpmath.workdps(dps):
        return GaussLegendre(mpmath.mp).calc_nodes(degree, mpmath.mp.prec)


def _work_dps(digits: int, k_max: int) -> int:
    # Hankel determinants lose roughly one digit per moment index
    return digits + k_max + 15


def _panels(a, b, width):
    n = max(1, int(mpmath.ceil((b - a) / width)))
    h = (b - a) / n
    return [(a + i * h, a + (i + 1) * h) for i in range(n)]


def _log_integrand_bound(lam, N, t, k_max):
    V = lam * lam / 2 + t * lam**3
    r = abs(lam)
    lk = k_max * mpmath.log(r) if r > 1 else 0
    return -N * mpmath.re(V) + lk


def _truncate(path, N, t, k_max, cutoff, step=mpmath.mpf("0.25"), start=0):
    """Smallest parameter beyond which the integrand (times |l|^k_max) stays below ``cutoff``."""
    x = mpmath.mpf(start)
    while True:
        x += step
        if _log_integrand_bound(path(x), N, t, k_max) < cutoff and x > start + 1:
            # confirm the decay persists a little further
            if all(_log_integrand_bound(path(x + i * step), N, t, k_max) < cutoff for i in range(1, 4)):
                return x


def _rule(spec: ContourSpec, k_max: int, work: int, degree: int):
    """Quadrature nodes and weights (including the exponential weight) on the contour."""
    N = spec.N
    t = mpmath.mpf(spec.t3)
    mirror = t < 0
    t = abs(t)
    cutoff = -(work + 10) * mpmath.log(10)
    width = mpmath.mpf(spec.panel)
    ref = _gl_nodes(degree, work)
    pieces = []  # (panel endpoints a, b in parameter, path(x), dpath(x))
    if t == 0:
        L = _truncate(lambda x: x, N, t, k_max, cutoff)
        pieces.append((-L, L, lambda x: x, lambda x: 1))
    else:
        c = -1 / (3 * t) if spec.break_point is None else mpmath.mpf(spec.break_point)
        if -mpmath.mpf(1) / 2 - 3 * t * c <= 0:
            raise ValueError("break point must lie left of -1/(6 t) for the vertical ray to decay")
        Y = _truncate(lambda y: mpmath.mpc(c, y), N, t, k_max, cutoff)
        # downward along Re l = c: l = c + i (Y - y), dl = -i dy
        pieces.append((mpmath.mpf(0), Y, lambda y: mpmath.mpc(c, Y - y), lambda y: mpmath.mpc(0, -1)))
        L = _truncate(lambda x: x, N, t, k_max, cutoff)
        beta = mpmath.mpf(spec.bend)
        span = L - c
        if beta:
            path = lambda x: mpmath.mpc(x, beta * mpmath.sin(mpmath.pi * (x - c) / span))
            dpath = lambda x: mpmath.mpc(1, beta * mpmath.pi / span * mpmath.cos(mpmath.pi * (x - c) / span))
        else:
            path, dpath = (lambda x: x), (lambda x: 1)
        pieces.append((c, L, path, dpath))
    nodes, weights = [], []
    for a, b, path, dpath in pieces:
        for lo, hi in _panels(a, b, width):
            half, mid = (hi - lo) / 2, (hi + lo) / 2
            for x, w in ref:
                xx = mid + half * x
                lam = path(xx)
                wt = w * half * dpath(xx) * mpmath.exp(-N * (lam * lam / 2 + t * lam**3))
                nodes.append(lam)
                weights.append(wt)
    if mirror:
        nodes = [-mpmath.conj(x) for x in nodes]
        weights = [mpmath.conj(w) for w in weights]
    return nodes, weights


def _power_sums(nodes, weights, k_max):
    c = [mpmath.mpf(0)] * (k_max + 1)
    for x, w in zip(nodes, weights):
        p = w
        for k in range(k_max + 1):
            c[k] += p
            p *= x
    return c


def compute_moments(spec: ContourSpec, k_max: int) -> MomentTable:
    """Moments ``c_0 .. c_k_max`` with a node-doubling convergence estimate."""
    if spec.digits < MIN_DIGITS:
        raise ValueError(f"working precision must be at least {MIN_DIGITS} digits")
    if spec.N < 1:
        raise ValueError("N must be positive")
    from .equilibrium import critical_coupling

    if abs(mpmath.mpf(spec.t3)) >= critical_coupling(spec.digits):
        raise ValueError("|t3| must be below the critical coupling")
    work = _work_dps(spec.digits, k_max)
    with mpmath.workdps(work):
        nodes, weights = _rule(spec, k_max, work, spec.degree)
        moments = _power_sums(nodes, weights, k_max)
        coarse = _power_sums(*_rule(spec, k_max, work, spec.degree - 1), k_max)
        # scale by the absolute integral: odd moments may cancel to nearly 0
        scale = _power_sums([abs(x) for x in nodes], [abs(w) for w in weights], k_max)
        tail = max(abs(a - b) / s for a, b, s in zip(moments, coarse, scale))
        max_imag = max(abs(mpmath.im(m)) / abs(m) for m in moments if m != 0)
    return MomentTable(spec, moments, work, nodes, weights, max_imag, tail)


def gaussian_moment(k: int, N: int):
    """``int_R l^k exp(-N l^2/2) dl`` in closed form."""
    if k % 2:
        return mpmath.mpf(0)
    df = 1
    for i in range(k - 1, 0, -2):
        df *= i
    return mpmath.sqrt(2 * mpmath.pi / N) * df / mpmath.mpf(N) ** (k // 2)


# --------------------------------------------------------------------------
# recurrence coefficients
# --------------------------------------------------------------------------


def _hankel(moments, n, shift_last=False):
    if n == 0:
        return mpmath.mpf(1)
    M = mpmath.matrix(n, n)
    for i in range(n):
        for j in range(n):
            col = j if not (shift_last and j == n - 1) else n
            M[i, j] = moments[i + col]
    return mpmath.det(M)


def _hadamard_bound(moments, n):
    out = mpmath.mpf(1)
    for j in range(n):
        out *= mpmath.sqrt(mpmath.fsum(abs(moments[i + j]) ** 2 for i in range(n)))
    return out


def hankel_recurrence(table: MomentTable, n_max: int) -> RecurrenceTable:
    """``b_n^2 = D_{n+1} D_{n-1} / D_n^2`` and ``a_n = p_n - p_{n+1}`` with
    ``p_n = -Dshift_n / D_n`` the subleading coefficient of the monic polynomial.

    Hankel matrices are badly conditioned, so ``|D_n|`` falls far below its
    Hadamard bound even when nonzero; only a determinant at the rounding
    level of the working precision counts as zero.  In that case
    the tables are cut before the first index that needs it and the index is
    recorded in ``first_zero``.
    """
    c = table.moments
    if len(c) < 2 * n_max + 3:
        raise ValueError(f"need moments up to index {2 * n_max + 2}")
    with mpmath.workdps(table.work_dps):
        D = [_hankel(c, n) for n in range(n_max + 2)]
        eps = mpmath.mpf(10) ** -(table.work_dps - 5)
        first_zero = next((n for n in range(1, n_max + 2) if abs(D[n]) <= eps * _hadamard_bound(c, n)), None)
        if first_zero is not None:
            n_max = first_zero - 2
            D = D[:first_zero]
            if n_max < 0:
                return RecurrenceTable([], [None], "hankel", [mpmath.mpf(0)], first_zero)
        Ds = [_hankel(c, n, shift_last=True) if n else mpmath.mpf(0) for n in range(n_max + 2)]
        p = [-Ds[n] / D[n] for n in range(n_max + 2)]
        a = [p[n] - p[n + 1] for n in range(n_max + 1)]
        b2 = [None] + [D[n + 1] * D[n - 1] / D[n] ** 2 for n in range(1, n_max + 1)]
        logs = [mpmath.log(d) for d in D]
    return RecurrenceTable(a, b2, "hankel", logs, first_zero)


def stieltjes_recurrence(table: MomentTable, n_max: int) -> RecurrenceTable:
    """Discretised Stieltjes procedure on the contour quadrature (no moments used)."""
    x, w = table.nodes, table.weights
    with mpmath.workdps(table.work_dps):
        prev = [mpmath.mpf(0)] * len(x)
        cur = [mpmath.mpf(1)] * len(x)
        norm_prev = None
        a, b2 = [], [None]
        for k in range(n_max + 1):
            norm = mpmath.fsum(wi * ci * ci for wi, ci in zip(w, cur))
            ak = mpmath.fsum(wi * xi * ci * ci for wi, xi, ci in zip(w, x, cur)) / norm
            a.append(ak)
            bk = norm / norm_prev if k else mpmath.mpf(0)
            if k:
                b2.append(bk)
            nxt = [(xi - ak) * ci - bk * pi for xi, ci, pi in zip(x, cur, prev)]
            prev, cur, norm_prev = cur, nxt, norm
    return RecurrenceTable(a, b2, "stieltjes")


def recurrence_extract(table: MomentTable, n_max: int, route: str = "hankel") -> RecurrenceTable:
    if route == "hankel":
        return hankel_recurrence(table, n_max)
    if route == "stieltjes":
        return stieltjes_recurrence(table, n_max)
    raise ValueError(f"unknown route {route!r}")


def agreement_digits(x, y) -> float:
    """Number of agreeing significant digits between two numbers."""
    d = abs(x - y)
    scale = max(abs(x), abs(y))
    if d == 0:
        return float("inf")
    return float(-mpmath.log10(d / scale)) if scale else float(-mpmath.log10(d))


# --------------------------------------------------------------------------
# comparison with the asymptotic expansion
# --------------------------------------------------------------------------


@dataclass
class Prediction:
    u: list
    z: list


def predicted_coefficients(t3, digits: int = DEFAULT_DIGITS, series_order: int = 64) -> Prediction:
    """``u0, u1, u2`` and ``z0, z1`` at a numeric coupling.

    ``u0`` and ``z0`` come from the algebraic equations; ``u1``, ``u2`` from
    exact series evaluated at ``t3`` (the tail beyond ``series_order`` is far
    below the comparison scale for ``|t3|`` well inside the disc); ``z1`` from
    its closed form in ``z0``.
    """
    from .asymptotics import h2_f1_closed, self_similar_derivative, z1_closed_numeric
    from .equilibrium import equilibrium_numeric, equilibrium_series

    point = equilibrium_numeric(t3, digits)
    eq = equilibrium_series(series_order)
    u1s = self_similar_derivative(eq.u0, Fraction(1, 2)) * Fraction(1, 2)
    u2s, _ = h2_f1_closed(eq.u0, eq.z0)
    with mpmath.workdps(digits + 10):
        t = mpmath.mpf(t3)
        u = [point.u0, u1s.evaluate(t), u2s.evaluate(t)]
        z = [point.z0, z1_closed_numeric(point.z0)]
    return Prediction(u, z)


@dataclass
class ComparisonRow:
    n: int
    a: object
    b2: object
    a_err: object
    b2_err: object
    route_agreement: float
    contour_tail: object
    max_imag: object


@dataclass
class ComparisonReport:
    t3: str
    rows: list[ComparisonRow]
    a_exponent: float
    b2_exponent: float

    def ratios(self) -> list[tuple[int, int, float, float]]:
        out = []
        for r1, r2 in zip(self.rows, self.rows[1:]):
            out.append((r1.n, r2.n, float(abs(r1.a_err) / abs(r2.a_err)), float(abs(r1.b2_err) / abs(r2.b2_err))))
        return out


def _slope(ns, errs) -> float:
    xs = [mpmath.log(n) for n in ns]
    ys = [mpmath.log(abs(e)) for e in errs]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    return float(-num / den)


def compare_asymptotics(t3: str, n_list, digits: int = DEFAULT_DIGITS) -> ComparisonReport:
    """Recurrence coefficients at ``n = N`` against the truncated expansions.

    The ``a`` error is measured against ``u0 + u1/n + u2/n^2`` and the ``b^2``
    error against ``z0 + z1/n^2``; the fitted decay exponents should be
    near 3 and 4.
    """
    pred = predicted_coefficients(t3, digits)
    rows = []
    for n in n_list:
        table = compute_moments(ContourSpec(str(t3), n, digits), 2 * n + 2)
        hk = hankel_recurrence(table, n)
        st = stieltjes_recurrence(table, n)
        with mpmath.workdps(table.work_dps):
            a, b2 = mpmath.re(hk.a[n]), mpmath.re(hk.b2[n])
            a_pred = pred.u[0] + pred.u[1] / n + pred.u[2] / n**2
            b_pred = pred.z[0] + pred.z[1] / n**2
            agree = min(agreement_digits(hk.a[n], st.a[n]), agreement_digits(hk.b2[n], st.b2[n]))
            rows.append(ComparisonRow(n, a, b2, a - a_pred, b2 - b_pred, agree, table.tail, table.max_imag))
    ns = [r.n for r in rows]
    return ComparisonReport(str(t3), rows, _slope(ns, [r.a_err for r in rows]), _slope(ns, [r.b2_err for r in rows]))


# --------------------------------------------------------------------------
# the tau-function identity
# --------------------------------------------------------------------------


@dataclass
class HirotaRow:
    n: int
    second_difference: object
    log_b2_ratio: object
    residual: object
    leading: object


def hirota_check(t3: str, N: int, n_range, digits: int = DEFAULT_DIGITS) -> list[HirotaRow]:
    """Second difference of ``log tau_n^2`` against ``log b_n^2 - log(n/N)``.

    ``tau_n^2`` is the Hankel determinant normalised by its Gaussian value,
    which is known in closed form; ``b_n^2`` comes from the Stieltjes route.
    ``leading`` is ``log z0(sqrt(n/N) t)``, the genus-zero prediction.
    """
    from .equilibrium import equilibrium_numeric

    n_range = list(n_range)
    n_hi = max(n_range) + 1
    table = compute_moments(ContourSpec(str(t3), N, digits), 2 * n_hi + 2)
    hk = hankel_recurrence(table, n_hi)
    st = stieltjes_recurrence(table, n_hi)
    rows = []
    with mpmath.workdps(table.work_dps):
        c0 = mpmath.sqrt(2 * mpmath.pi / N)
        log_gauss = [mpmath.mpf(0)]
        for k in range(n_hi + 1):
            log_gauss.append(log_gauss[-1] + mpmath.log(c0 * mpmath.factorial(k) / mpmath.mpf(N) ** k))
        log_tau = [hk.log_hankel[n] - log_gauss[n] for n in range(n_hi + 1)]
        t = mpmath.mpf(t3)
        for n in n_range:
            second = log_tau[n + 1] - 2 * log_tau[n] + log_tau[n - 1]
            rhs = mpmath.log(st.b2[n]) - mpmath.log(mpmath.mpf(n) / N)
            x = mpmath.mpf(n) / N
            lead = mpmath.log(equilibrium_numeric(mpmath.sqrt(x) * t, digits).z0)
            rows.append(HirotaRow(n, second, rhs, abs(second - rhs), lead))
    return rows
