import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy.combinatorics import Permutation

from todamaps import oracle
from todamaps.oracle import (
    OracleInfeasible,
    count_maps,
    double_factorial,
    faces_required,
    free_energy_coefficient,
    genus_census,
    genus_of_map,
    resonance_table,
    recurrence_coefficient,
    rotation,
    taylor_from_count,
)


def matchings(darts):
    if not darts:
        yield []
        return
    first, rest = darts[0], darts[1:]
    for i, other in enumerate(rest):
        for m in matchings(rest[:i] + rest[i + 1:]):
            yield [(first, other)] + m


def brute_force_census(profile):
    """Reference census using sympy permutation cycles and edge-graph search."""
    sigma = rotation(profile)
    n = len(sigma)
    vertex = [v for v, d in enumerate(profile) for _ in range(d)]
    by_genus, disconnected = {}, 0
    for m in matchings(list(range(n))):
        omega = [0] * n
        for x, y in m:
            omega[x], omega[y] = y, x
        seen, stack = {0}, [0]
        adj = {v: set() for v in range(len(profile))}
        for x, y in m:
            adj[vertex[x]].add(vertex[y])
            adj[vertex[y]].add(vertex[x])
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) < len(profile):
            disconnected += 1
            continue
        faces = Permutation([sigma[omega[i]] for i in range(n)]).cycles
        g = (2 - len(profile) + n // 2 - faces) // 2
        by_genus[g] = by_genus.get(g, 0) + 1
    return dict(sorted(by_genus.items())), disconnected


small_profiles = st.lists(st.integers(1, 4), min_size=1, max_size=4).filter(lambda p: sum(p) % 2 == 0 and sum(p) <= 10)


def test_two_vertex_pins():
    assert genus_census((3, 3)).by_genus == {0: 12, 1: 3}
    c = genus_census((3, 3))
    assert sum(c.by_genus.values()) + c.disconnected == 15


def test_genus_one_pins():
    assert count_maps((1, 1, 3, 3), 1).count == 0
    assert count_maps((1, 1, 3, 3, 3, 3), 1).count == 19440


def test_recurrence_and_free_energy_coefficients():
    assert recurrence_coefficient(1, 4) == 810
    assert recurrence_coefficient(1, 2) == 0
    assert free_energy_coefficient(1, 2) == Fraction(3, 2)
    assert free_energy_coefficient(1, 3) == 0


@settings(max_examples=25, deadline=None)
@given(small_profiles)
def test_matching_total_is_double_factorial(profile):
    c = genus_census(profile)
    assert sum(c.by_genus.values()) + c.disconnected == double_factorial(sum(profile) - 1)


@settings(max_examples=25, deadline=None)
@given(small_profiles)
def test_census_matches_brute_force(profile):
    c = genus_census(profile)
    assert (c.by_genus, c.disconnected) == brute_force_census(profile)


@pytest.mark.skipif(oracle.BACKEND != "compiled", reason="compiled kernel not built")
@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=1, max_size=5).filter(lambda p: sum(p) % 2 == 0 and sum(p) <= 12))
def test_backends_agree(profile):
    assert genus_census(profile, backend="python") == genus_census(profile, backend="compiled")


def test_parallel_branches_sum_to_serial():
    assert genus_census((3, 3, 2, 2), workers=2) == genus_census((3, 3, 2, 2))


def test_odd_dart_total_is_rejected():
    with pytest.raises(ValueError):
        genus_census((3,))


def test_budget_is_enforced():
    with pytest.raises(OracleInfeasible):
        genus_census((3,) * 8, max_darts=20)


def test_euler_shortcut_skips_enumeration():
    assert faces_required((3,) * 8, 4) < 1
    rec = count_maps((3,) * 8, 4)
    assert rec.count == 0 and rec.matchings_examined == 0


def test_rotation_blocks():
    assert rotation((3, 1, 2)) == [1, 2, 0, 3, 5, 4]


def test_taylor_sign_and_factorial():
    assert taylor_from_count(19440, 4) == 810
    assert taylor_from_count(3, 1) == -3


def test_pure_python_switch():
    env = dict(os.environ, TODAMAPS_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from todamaps import oracle; print(oracle.BACKEND, oracle.genus_census((3, 3)).by_genus)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python {0: 12, 1: 3}"


@pytest.mark.slow
@pytest.mark.skipif(oracle.BACKEND != "compiled", reason="18-dart census is slow without the compiled kernel")
def test_six_vertex_census_gives_genus_two_coefficient():
    c = genus_census((3,) * 6)
    assert c.by_genus == {0: 9797760, 1: 19362240, 2: 3061800}
    assert taylor_from_count(c.by_genus[2], 6) == Fraction(8505, 2)


def test_genus_of_map_examples():
    assert genus_of_map([1, 0], [1, 0]) == 0
    sigma = rotation((3, 3))
    assert genus_of_map(sigma, [3, 4, 5, 0, 1, 2]) == 1
    # one self-matched pair in each vertex leaves a bridge: still connected
    assert genus_of_map(sigma, [1, 0, 5, 4, 3, 2]) == 0
    assert genus_of_map(rotation((2, 2)), [1, 0, 3, 2]) == "disconnected"
    with pytest.raises(ValueError):
        genus_of_map([1, 0], [0, 1])


@settings(max_examples=15, deadline=None)
@given(small_profiles)
def test_genus_of_map_agrees_with_census(profile):
    sigma = rotation(profile)
    by_genus, disconnected = {}, 0
    for m in matchings(list(range(len(sigma)))):
        omega = [0] * len(sigma)
        for x, y in m:
            omega[x], omega[y] = y, x
        g = genus_of_map(sigma, omega)
        if g == "disconnected":
            disconnected += 1
        else:
            by_genus[g] = by_genus.get(g, 0) + 1
    c = genus_census(profile)
    assert (dict(sorted(by_genus.items())), disconnected) == (c.by_genus, c.disconnected)


def test_resonance_table():
    assert resonance_table(1, {2}, kind="e") == {2: Fraction(3, 2)}
    assert resonance_table(1, [2, 4], kind="z") == {2: 0, 4: 810}
    with pytest.raises(OracleInfeasible):
        resonance_table(2, [6], kind="e", max_darts=14)
    with pytest.raises(ValueError):
        resonance_table(1, [2], kind="x")
