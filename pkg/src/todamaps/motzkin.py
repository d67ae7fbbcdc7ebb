"""Motzkin paths on the integer lattice and the operator entries they weight.

The tridiagonal recursion operator has ``L[l, l+1] = 1``, ``L[l, l] = a[l]`` and
``L[l, l-1] = b2[l]``, with levels measured from a reference index ``n``.  A
matrix entry of ``L^j`` is the weighted count of lattice paths of length ``j``:
an up step weighs 1, a horizontal step at level ``l`` weighs ``a[l]`` and a
down step leaving level ``l`` weighs ``b2[l]``.  Paths live on all of Z, so
there is no floor at level 0.

Operator entries are :class:`OperatorPolynomial` objects: integer linear
combinations of monomials in the symbols ``a[k]``, ``b2[k]`` and an optional
power of the coupling ``t``.
"""
from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass
from math import factorial
from typing import Callable, Iterator, Mapping

STEP_DELTA = {"D": -1, "H": 0, "U": 1}
STEP_ORDER = ("D", "H", "U")  # lexicographic enumeration order


@dataclass(frozen=True)
class MotzkinPath:
    """A lattice path given by its starting level and its step letters."""

    start: int
    steps: tuple[str, ...]

    def levels(self) -> list[int]:
        out = [self.start]
        for st in self.steps:
            out.append(out[-1] + STEP_DELTA[st])
        return out

    @property
    def end(self) -> int:
        return self.levels()[-1]

    def horizontal_count(self) -> int:
        return self.steps.count("H")

    def weight(self) -> "OperatorPolynomial":
        """The monomial ``prod`` of step weights."""
        a, b2 = [], []
        level = self.start
        for st in self.steps:
            if st == "H":
                a.append(level)
            elif st == "D":
                b2.append(level)
            level += STEP_DELTA[st]
        return OperatorPolynomial({Monomial.make(a, b2): 1})


def enumerate_motzkin(length: int, m1: int, m2: int) -> Iterator[MotzkinPath]:
    """All paths of ``length`` steps from level ``m1`` to ``m2``, lexicographically."""
    if length < 0:
        raise ValueError("length must be non-negative")
    steps: list[str] = []

    def walk(level: int, remaining: int):
        if remaining == 0:
            if level == m2:
                yield MotzkinPath(m1, tuple(steps))
            return
        for st in STEP_ORDER:
            nxt = level + STEP_DELTA[st]
            if abs(nxt - m2) <= remaining - 1:
                steps.append(st)
                yield from walk(nxt, remaining - 1)
                steps.pop()

    yield from walk(m1, length)


# --------------------------------------------------------------------------
# operator polynomials
# --------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Monomial:
    t: int
    a: tuple[int, ...]
    b2: tuple[int, ...]

    @classmethod
    def make(cls, a=(), b2=(), t: int = 0) -> "Monomial":
        return cls(t, tuple(sorted(a)), tuple(sorted(b2)))

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial.make(self.a + other.a, self.b2 + other.b2, self.t + other.t)

    def shift(self, k: int) -> "Monomial":
        return Monomial(self.t, tuple(x + k for x in self.a), tuple(x + k for x in self.b2))

    def degree(self) -> int:
        return len(self.a) + 2 * len(self.b2)


class OperatorPolynomial:
    """Integer polynomial in ``a[k]``, ``b2[k]`` and ``t``.

    >>> p = operator_entry(1, 1, 0)
    >>> str(p)
    'b2[1]'
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        self.terms: dict[Monomial, int] = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def constant(cls, c: int) -> "OperatorPolynomial":
        return cls({Monomial.make(): c})

    @classmethod
    def a(cls, k: int) -> "OperatorPolynomial":
        return cls({Monomial.make(a=(k,)): 1})

    @classmethod
    def b2(cls, k: int) -> "OperatorPolynomial":
        return cls({Monomial.make(b2=(k,)): 1})

    @classmethod
    def t(cls, power: int = 1) -> "OperatorPolynomial":
        return cls({Monomial.make(t=power): 1})

    def __add__(self, other: "OperatorPolynomial") -> "OperatorPolynomial":
        out = Counter(self.terms)
        for m, c in other.terms.items():
            out[m] += c
        return OperatorPolynomial(out)

    def __neg__(self) -> "OperatorPolynomial":
        return OperatorPolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "OperatorPolynomial") -> "OperatorPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "OperatorPolynomial":
        if isinstance(other, int):
            return OperatorPolynomial({m: c * other for m, c in self.terms.items()})
        out: Counter = Counter()
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                out[m1 * m2] += c1 * c2
        return OperatorPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, OperatorPolynomial) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def shift(self, k: int) -> "OperatorPolynomial":
        """Re-index every symbol by ``k`` (the map ``n -> n + k``)."""
        return OperatorPolynomial({m.shift(k): c for m, c in self.terms.items()})

    def coefficient_sum(self) -> int:
        return sum(self.terms.values())

    def divide_b2(self, k: int) -> "OperatorPolynomial":
        """Exact division by ``b2[k]``; every monomial must contain it."""
        out = {}
        for m, c in self.terms.items():
            if k not in m.b2:
                raise ValueError(f"monomial {m} is not divisible by b2[{k}]")
            rest = list(m.b2)
            rest.remove(k)
            out[Monomial(m.t, m.a, tuple(rest))] = c
        return OperatorPolynomial(out)

    def evaluate(self, a: Callable[[int], object], b2: Callable[[int], object], t=None, one=1):
        """Substitute values; ``a`` and ``b2`` map an offset to a ring element."""
        total = None
        for m, c in sorted(self.terms.items()):
            val = one
            for k in m.a:
                val = val * a(k)
            for k in m.b2:
                val = val * b2(k)
            if m.t:
                if t is None:
                    raise ValueError("polynomial involves t but no value was given")
                for _ in range(m.t):
                    val = val * t
            term = val * c
            total = term if total is None else total + term
        return one * 0 if total is None else total

    def to_list(self) -> list[dict]:
        out = []
        for m, c in sorted(self.terms.items()):
            d = {"coeff": c, "a": list(m.a), "b2": list(m.b2)}
            if m.t:
                d["t"] = m.t
            out.append(d)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_list(), separators=(",", ":"))

    @classmethod
    def from_list(cls, items) -> "OperatorPolynomial":
        out: Counter = Counter()
        for d in items:
            out[Monomial.make(d.get("a", ()), d.get("b2", ()), d.get("t", 0))] += int(d["coeff"])
        return cls(out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            syms = ["t" if m.t == 1 else f"t^{m.t}"] if m.t else []
            syms += [f"a[{k}]" for k in m.a] + [f"b2[{k}]" for k in m.b2]
            body = "*".join(syms)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def operator_entry(j: int, m1: int, m2: int) -> OperatorPolynomial:
    """Entry ``(n+m1, n+m2)`` of ``L^j`` as a sum over Motzkin path weights.

    >>> str(operator_entry(3, 1, -1))
    'a[-1]*b2[0]*b2[1] + a[0]*b2[0]*b2[1] + a[1]*b2[0]*b2[1]'
    """
    total = OperatorPolynomial()
    for path in enumerate_motzkin(j, m1, m2):
        total = total + path.weight()
    return total


def operator_entry_band(j: int, m1: int, m2: int) -> OperatorPolynomial:
    """Same entry computed by repeated multiplication with the band matrix."""
    row: dict[int, OperatorPolynomial] = {m1: OperatorPolynomial.constant(1)}
    for _ in range(j):
        nxt: dict[int, OperatorPolynomial] = defaultdict(OperatorPolynomial)
        for level, poly in row.items():
            nxt[level + 1] = nxt[level + 1] + poly
            nxt[level] = nxt[level] + poly * OperatorPolynomial.a(level)
            nxt[level - 1] = nxt[level - 1] + poly * OperatorPolynomial.b2(level)
        row = nxt
    return row.get(m2, OperatorPolynomial())


# --------------------------------------------------------------------------
# path censuses
# --------------------------------------------------------------------------


def horizontal_count_census(length: int, m1: int, m2: int) -> dict[int, int]:
    """Map ``number of horizontal steps -> number of paths``."""
    census: Counter = Counter(p.horizontal_count() for p in enumerate_motzkin(length, m1, m2))
    return dict(sorted(census.items()))


def multinomial_count(length: int, m1: int, m2: int, horizontal: int) -> int:
    """Closed-form count of paths with a given number of horizontal steps."""
    vertical = length - horizontal
    drop = m1 - m2
    if vertical < 0 or (vertical + drop) % 2 or abs(drop) > vertical:
        return 0
    downs = (vertical + drop) // 2
    ups = vertical - downs
    return factorial(length) // (factorial(horizontal) * factorial(ups) * factorial(downs))


def path_count_dp(length: int, m1: int, m2: int) -> int:
    """Total path count by a transfer-matrix walk over levels."""
    counts = {m1: 1}
    for _ in range(length):
        nxt: Counter = Counter()
        for level, c in counts.items():
            for d in (-1, 0, 1):
                nxt[level + d] += c
        counts = nxt
    return counts.get(m2, 0)


# --------------------------------------------------------------------------
# equation systems
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EquationSystem:
    """One scalar equation ``lhs = rhs`` from a matrix identity.

    ``lhs`` names the non-polynomial side: ``"1/N"``, ``"0"`` or a
    time-derivative marker.  ``divided_by`` records an exact factor that was
    cancelled from both sides.
    """

    kind: str
    valence: int
    component: str
    lhs: str
    rhs: OperatorPolynomial
    divided_by: str | None = None


def _string_operator(j: int, m1: int, m2: int) -> OperatorPolynomial:
    """Entry of ``L + j t L^(j-1)``."""
    return operator_entry(1, m1, m2) + OperatorPolynomial.t() * operator_entry(j - 1, m1, m2) * j


def difference_string_system(nu: int) -> tuple[EquationSystem, EquationSystem]:
    """Diagonal and subdiagonal string equations for valence ``2*nu + 1``.

    The subdiagonal equation is divided by ``b2[1]``, which divides every
    term because each contributing path must step down out of level 1.
    """
    if nu < 1:
        raise ValueError("nu must be at least 1")
    j = 2 * nu + 1
    diag = _string_operator(j, 1, 0) - _string_operator(j, 0, -1)
    sub = (
        (OperatorPolynomial.a(1) - OperatorPolynomial.a(0)) * _string_operator(j, 1, 0)
        + _string_operator(j, 2, 0)
        - _string_operator(j, 1, -1)
    )
    return (
        EquationSystem("string", j, "diagonal", "1/N", diag),
        EquationSystem("string", j, "subdiagonal", "0", sub.divide_b2(1), divided_by="b2[1]"),
    )


def toda_system(nu: int) -> tuple[EquationSystem, EquationSystem]:
    """Toda flow equations for the coupling of valence ``2*nu + 1``."""
    if nu < 0:
        raise ValueError("nu must be non-negative")
    j = 2 * nu + 1
    a_eq = operator_entry(j, 1, 0) - operator_entry(j, 0, -1)
    b_eq = (
        (OperatorPolynomial.a(0) - OperatorPolynomial.a(-1)) * operator_entry(j, 0, -1)
        + operator_entry(j, 1, -1)
        - operator_entry(j, 0, -2)
    )
    return (
        EquationSystem("toda", j, "a", "-(1/N) d a[0]/dt", a_eq),
        EquationSystem("toda", j, "b2", "-(1/N) d b2[0]/dt", b_eq),
    )
