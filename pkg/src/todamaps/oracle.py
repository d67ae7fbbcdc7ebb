"""Brute-force counts of labelled maps with prescribed vertex valences.

A map on ``2E`` darts is a pair of permutations: ``sigma`` cycles the darts
around each vertex (vertex ``i`` owns a contiguous block of darts) and a
fixed-point-free involution ``omega`` glues darts into edges.  Faces are the
cycles of ``sigma o omega`` (apply ``omega`` first).  A connected map has
genus ``g`` with ``V - E + F = 2 - 2g``.

Every perfect matching is visited once, so ``(2E - 1)!!`` matchings are
examined; the enumeration is refused above :data:`MAX_DARTS`.  Counts are of
vertex- and dart-labelled maps, the normalisation in which a Taylor
coefficient of a free energy is ``(-1)^m count / m!`` for ``m`` vertices of
the expanded valence.

The hot loop lives in a compiled extension when it is available; setting
``TODAMAPS_PURE_PYTHON=1`` forces the pure-Python kernel.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Iterable, Sequence

from . import _kernels_py

MAX_DARTS = 20

if os.environ.get("TODAMAPS_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"


class OracleInfeasible(ValueError):
    """The requested enumeration exceeds the dart budget."""


@dataclass(frozen=True)
class MapCountRecord:
    profile: tuple[int, ...]
    genus: int
    count: int
    matchings_examined: int


@dataclass(frozen=True)
class GenusCensus:
    profile: tuple[int, ...]
    by_genus: dict[int, int]
    disconnected: int
    matchings_examined: int


def rotation(profile: Sequence[int]) -> list[int]:
    """Vertex rotation with vertex ``i`` owning a contiguous block of darts."""
    sigma = []
    start = 0
    for v in profile:
        if v < 1:
            raise ValueError("valences must be positive")
        sigma.extend(start + (k + 1) % v for k in range(v))
        start += v
    return sigma


def double_factorial(n: int) -> int:
    return prod(range(n, 0, -2)) if n > 0 else 1


def _check(profile: Sequence[int], max_darts: int) -> tuple[int, ...]:
    profile = tuple(int(v) for v in profile)
    darts = sum(profile)
    if darts % 2:
        raise ValueError(f"profile {profile} has an odd number of darts, so no matching exists")
    if darts > max_darts:
        raise OracleInfeasible(
            f"profile {profile} needs {double_factorial(darts - 1)} matchings "
            f"({darts} darts > {max_darts}); use a closed-form source instead"
        )
    return profile


def _census_branch(args):
    sigma, first, force_python = args
    kernel = _kernels_py if (force_python or _compiled is None) else _compiled
    return kernel.face_census(sigma, first)


def genus_census(profile: Sequence[int], max_darts: int = MAX_DARTS, workers: int = 1,
                 backend: str | None = None) -> GenusCensus:
    """Counts of connected labelled maps of every genus for a valence profile.

    >>> genus_census((3, 3)).by_genus
    {0: 12, 1: 3}
    """
    profile = _check(profile, max_darts)
    sigma = rotation(profile)
    n = len(sigma)
    force_python = backend == "python"
    if backend == "compiled" and _compiled is None:
        raise RuntimeError("compiled kernel is not available")
    if n == 0:
        return GenusCensus(profile, {}, 0, 0)
    firsts = [-1] if workers <= 1 else list(range(1, n))
    jobs = [(sigma, f, force_python) for f in firsts]
    if workers <= 1:
        results = [_census_branch(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_census_branch, jobs))
    faces = [0] * (n + 1)
    disconnected = examined = 0
    for f, dis, ex in results:
        faces = [a + b for a, b in zip(faces, f)]
        disconnected += dis
        examined += ex
    V, E = len(profile), n // 2
    by_genus: dict[int, int] = {}
    for F, c in enumerate(faces):
        if c:
            two_g = 2 - V + E - F
            by_genus[two_g // 2] = by_genus.get(two_g // 2, 0) + c
    return GenusCensus(profile, dict(sorted(by_genus.items())), disconnected, examined)


def faces_required(profile: Sequence[int], genus: int) -> int:
    """Face count forced by Euler's formula."""
    return 2 - 2 * genus - len(profile) + sum(profile) // 2


def count_maps(profile: Sequence[int], genus: int, **kw) -> MapCountRecord:
    """Number of connected labelled maps of the given genus.

    When Euler's formula demands fewer than one face the answer is zero and
    nothing is enumerated, whatever the dart budget.

    >>> count_maps((3, 3), 1).count
    3
    >>> count_maps((3,) * 8, 4).matchings_examined
    0
    """
    if sum(profile) % 2 == 0 and faces_required(profile, genus) < 1:
        return MapCountRecord(tuple(profile), genus, 0, 0)
    census = genus_census(profile, **kw)
    return MapCountRecord(census.profile, genus, census.by_genus.get(genus, 0), census.matchings_examined)


def genus_of_map(sigma: Sequence[int], omega: Sequence[int]) -> int | str:
    """Genus of the map ``(sigma, omega)``, or ``"disconnected"``.

    Faces are the cycles of ``sigma o omega`` (``omega`` applied first);
    vertices are the cycles of ``sigma``.  Darts are 0-based.

    >>> genus_of_map([1, 0], [1, 0])
    0
    >>> genus_of_map([1, 2, 0, 4, 5, 3], [3, 4, 5, 0, 1, 2])
    1
    """
    n = len(sigma)
    if len(omega) != n or any(omega[i] == i or omega[omega[i]] != i for i in range(n)):
        raise ValueError("omega must be a fixed-point-free involution on the darts")
    if n == 0:
        return "disconnected"
    seen, stack = {0}, [0]
    while stack:
        d = stack.pop()
        for e in (sigma[d], omega[d]):
            if e not in seen:
                seen.add(e)
                stack.append(e)
    if len(seen) < n:
        return "disconnected"

    def cycles(perm) -> int:
        done, count = [False] * n, 0
        for i in range(n):
            if not done[i]:
                count += 1
                while not done[i]:
                    done[i] = True
                    i = perm[i]
        return count

    V = cycles(sigma)
    F = cycles([sigma[omega[i]] for i in range(n)])
    return (2 - V + n // 2 - F) // 2


def taylor_from_count(count: int, m: int) -> Fraction:
    """Taylor coefficient ``(-1)^m count / m!`` for ``m`` expanded vertices."""
    return Fraction((-1) ** m * count, factorial(m))


def free_energy_coefficient(g: int, power: int, max_darts: int = MAX_DARTS) -> Fraction:
    """Coefficient of ``s^power`` in ``e_g``: maps with ``power`` trivalent vertices."""
    if 3 * power % 2:
        return Fraction(0)
    return taylor_from_count(count_maps((3,) * power, g, max_darts=max_darts).count, power)


def recurrence_coefficient(g: int, power: int, max_darts: int = MAX_DARTS) -> Fraction:
    """Coefficient of ``s^power`` in ``z_g``: two univalent plus ``power`` trivalent vertices."""
    if (2 + 3 * power) % 2:
        return Fraction(0)
    prof = (1, 1) + (3,) * power
    return taylor_from_count(count_maps(prof, g, max_darts=max_darts).count, power)


def resonance_table(g: int, needed_orders: Iterable[int], kind: str = "e",
                    max_darts: int = MAX_DARTS) -> dict[int, Fraction]:
    """Series coefficients of ``e_g`` (``kind="e"``) or ``z_g`` (``kind="z"``)
    at the given powers of ``s``, from exhaustive map counts.

    Raises :class:`OracleInfeasible` when a count exceeds the dart budget;
    closed-form injection is the fallback then.

    >>> resonance_table(1, [2, 4], kind="z")
    {2: Fraction(0, 1), 4: Fraction(810, 1)}
    """
    fn = {"e": free_energy_coefficient, "z": recurrence_coefficient}.get(kind)
    if fn is None:
        raise ValueError(f"kind must be 'e' or 'z', not {kind!r}")
    return {j: fn(g, j, max_darts=max_darts) for j in sorted(set(needed_orders))}
