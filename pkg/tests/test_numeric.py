from fractions import Fraction

import mpmath
import pytest

from todamaps.motzkin import difference_string_system
from todamaps.numeric import (
    ContourSpec,
    agreement_digits,
    compute_moments,
    gaussian_moment,
    hankel_recurrence,
    hirota_check,
    recurrence_extract,
    stieltjes_recurrence,
)

DIGITS = 50
N = 8


@pytest.fixture(scope="module")
def table():
    return compute_moments(ContourSpec("0.03", N, DIGITS), 2 * N + 2)


@pytest.fixture(scope="module")
def recurrences(table):
    return hankel_recurrence(table, N), stieltjes_recurrence(table, N)


def test_gaussian_moments_match_quad():
    with mpmath.workdps(40):
        for k in (0, 2, 5, 6):
            ref = mpmath.quad(lambda x: x**k * mpmath.exp(-N * x * x / 2), [-mpmath.inf, mpmath.inf])
            assert abs(gaussian_moment(k, N) - ref) < mpmath.mpf(10) ** -35


def test_gaussian_case():
    tab = compute_moments(ContourSpec("0", 12, DIGITS), 26)
    with mpmath.workdps(80):
        for k, c in enumerate(tab.moments):
            assert agreement_digits(c, gaussian_moment(k, 12)) >= 40 or (k % 2 and abs(c) < mpmath.mpf(10) ** -60)
    for route in ("hankel", "stieltjes"):
        rec = recurrence_extract(tab, 12, route)
        with mpmath.workdps(80):
            for n in range(1, 13):
                assert abs(rec.b2[n] - mpmath.mpf(n) / 12) < mpmath.mpf(10) ** -40
                assert abs(rec.a[n]) < mpmath.mpf(10) ** -40


def test_routes_agree(recurrences):
    hk, st = recurrences
    assert hk.first_zero is None
    for n in range(1, N + 1):
        assert agreement_digits(hk.a[n], st.a[n]) >= 40
        assert agreement_digits(hk.b2[n], st.b2[n]) >= 40


def test_moments_are_real_and_converged(table):
    assert table.max_imag < mpmath.mpf(10) ** -40
    assert table.tail < mpmath.mpf(10) ** -40


@pytest.mark.parametrize("change", [{"break_point": "-6"}, {"bend": "0.3"}, {"panel": "0.4"}])
def test_contour_independence(table, change):
    other = compute_moments(ContourSpec("0.03", N, DIGITS, **change), 2 * N + 2)
    for a, b in zip(table.moments, other.moments):
        assert agreement_digits(a, b) >= 40


def test_mirror_symmetry(table):
    neg = compute_moments(ContourSpec("-0.03", N, DIGITS), 2 * N + 2)
    with mpmath.workdps(80):
        for k, (a, b) in enumerate(zip(table.moments, neg.moments)):
            assert agreement_digits((-1) ** k * mpmath.conj(a), b) >= 40


def test_numeric_coefficients_satisfy_string_equations(recurrences):
    hk, _ = recurrences
    diag, sub = difference_string_system(1)
    with mpmath.workdps(60):
        for n in range(2, N - 1):
            args = dict(a=lambda k: hk.a[n + k], b2=lambda k: hk.b2[n + k], t=mpmath.mpf("0.03"), one=mpmath.mpf(1))
            assert abs(diag.rhs.evaluate(**args) - mpmath.mpf(1) / N) < mpmath.mpf(10) ** -40
            assert abs(sub.rhs.evaluate(**args)) < mpmath.mpf(10) ** -40


def test_hirota_identity_small():
    rows = hirota_check("0.03", N, range(2, N), DIGITS)
    assert max(r.residual for r in rows) < mpmath.mpf(10) ** -20


def test_hankel_zero_is_reported_and_truncated(table):
    # a point mass has D_2 = 0, so only a_0 exists
    point_mass = type(table)(table.spec, [mpmath.mpf(1)] * 7, table.work_dps, [], [])
    rec = hankel_recurrence(point_mass, 2)
    assert rec.first_zero == 2 and rec.a == [1] and rec.b2 == [None]


@pytest.mark.parametrize("spec", [
    ContourSpec("0.03", N, 30),
    ContourSpec("0.08", N, DIGITS),
    ContourSpec("0.03", 0, DIGITS),
    ContourSpec("0.03", N, DIGITS, break_point="-1"),
])
def test_bad_configurations(spec):
    with pytest.raises(ValueError):
        compute_moments(spec, 4)


def test_unknown_route(table):
    with pytest.raises(ValueError):
        recurrence_extract(table, 2, "lanczos")
