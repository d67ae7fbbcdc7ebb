"""Pure-Python map enumeration kernel (fallback for the compiled one)."""
from __future__ import annotations


def face_census(sigma, first_partner: int = -1):
    """Enumerate perfect matchings of the darts and tally their face counts.

    Parameters
    ----------
    sigma : sequence of int
        Vertex rotation: ``sigma[d]`` is the dart after ``d`` around its vertex.
    first_partner : int
        If non-negative, only matchings pairing dart 0 with this dart.

    Returns
    -------
    faces : list of int
        ``faces[F]`` is the number of connected maps with ``F`` faces.
    disconnected : int
        Number of matchings giving a disconnected surface.
    examined : int
        Number of matchings visited.
    """
    sigma = list(sigma)
    n = len(sigma)
    faces = [0] * (n + 1)
    mate = [-1] * n
    seen = [0] * n
    stamp = [0]
    disconnected = 0
    examined = 0

    def leaf():
        nonlocal disconnected, examined
        examined += 1
        stamp[0] += 1
        tag = stamp[0]
        # connectivity: orbit of dart 0 under sigma and the matching
        stack = [0]
        seen[0] = tag
        reached = 1
        while stack:
            d = stack.pop()
            for e in (sigma[d], mate[d]):
                if seen[e] != tag:
                    seen[e] = tag
                    reached += 1
                    stack.append(e)
        if reached != n:
            disconnected += 1
            return
        stamp[0] += 1
        tag = stamp[0]
        count = 0
        for d in range(n):
            if seen[d] != tag:
                count += 1
                e = d
                while seen[e] != tag:
                    seen[e] = tag
                    e = sigma[mate[e]]
        faces[count] += 1

    def rec(free):
        if free == n:
            leaf()
            return
        i = 0
        while mate[i] >= 0:
            i += 1
        for j in range(i + 1, n):
            if mate[j] < 0:
                if i == 0 and first_partner >= 0 and j != first_partner:
                    continue
                mate[i] = j
                mate[j] = i
                rec(free + 2)
                mate[i] = -1
                mate[j] = -1

    if n == 0:
        return faces, 0, 0
    rec(0)
    return faces, disconnected, examined
