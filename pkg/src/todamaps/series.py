"""Truncated power series with exact rational coefficients.

A :class:`PowerSeries` stores the coefficients ``c_0, ..., c_R`` of a series
known modulo ``s^(R+1)``.  Binary operations truncate to the smaller of the
two orders, so a result never claims more precision than its inputs carry.
Plain ints and Fractions behave as exact constants of unlimited order.
"""
from __future__ import annotations

import json
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterable, Mapping, Union

Number = Union[int, Fraction]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _integer_root(n: int, q: int) -> int | None:
    """Exact q-th root of a non-negative integer, or None."""
    if n in (0, 1):
        return n
    if q == 2:
        r = isqrt(n)
        return r if r * r == n else None
    r = round(n ** (1.0 / q))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**q == n:
            return cand
    # float guess can be off for huge n; fall back to bisection
    lo, hi = 0, 1 << (n.bit_length() // q + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        p = mid**q
        if p == n:
            return mid
        if p < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def rational_power(c: Fraction, alpha: Fraction) -> Fraction:
    """Return ``c**alpha`` when it is rational, else raise ValueError."""
    c, alpha = _frac(c), _frac(alpha)
    p, q = alpha.numerator, alpha.denominator
    if c == 0:
        if alpha > 0:
            return Fraction(0)
        raise ValueError("zero raised to a non-positive power")
    sign = 1
    if c < 0:
        if q % 2 == 0:
            raise ValueError(f"{c} has no real root of order {q}")
        sign = -1 if p % 2 else 1
        c = -c
    num = _integer_root(c.numerator, q)
    den = _integer_root(c.denominator, q)
    if num is None or den is None:
        raise ValueError(f"{c}**{alpha} is irrational")
    return sign * Fraction(num, den) ** p


class PowerSeries:
    """Exact power series in one variable, truncated at a fixed order.

    Parameters
    ----------
    coeffs : iterable of int, Fraction or str
        Leading coefficients; missing entries up to ``order`` are zero.
    order : int, optional
        Highest known power.  Defaults to ``len(coeffs) - 1``.
    var : str
        Display name of the variable.

    Examples
    --------
    >>> z = PowerSeries([1, 0, 36], order=4)
    >>> (z * z)[2]
    Fraction(72, 1)
    """

    __slots__ = ("coeffs", "order", "var")

    def __init__(self, coeffs: Iterable = (), order: int | None = None, var: str = "s"):
        cs = [_frac(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("order must be non-negative")
        if len(cs) > order + 1:
            cs = cs[: order + 1]
        else:
            cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self.order: int = order
        self.var: str = var

    # construction helpers -------------------------------------------------
    @classmethod
    def constant(cls, c: Number, order: int, var: str = "s") -> "PowerSeries":
        return cls([c], order, var)

    @classmethod
    def monomial(cls, k: int, order: int, coeff: Number = 1, var: str = "s") -> "PowerSeries":
        cs = [0] * (order + 1)
        if k <= order:
            cs[k] = coeff
        return cls(cs, order, var)

    @classmethod
    def variable(cls, order: int, var: str = "s") -> "PowerSeries":
        return cls.monomial(1, order, 1, var)

    # access ---------------------------------------------------------------
    def __getitem__(self, k: int) -> Fraction:
        if k < 0:
            return Fraction(0)
        if k > self.order:
            raise IndexError(f"coefficient s^{k} lies beyond order {self.order}")
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.order + 1

    def valuation(self) -> int | None:
        """Index of the first non-zero coefficient, None for the zero series."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def is_zero(self) -> bool:
        return self.valuation() is None

    def is_even(self) -> bool:
        return all(c == 0 for c in self.coeffs[1::2])

    def is_odd(self) -> bool:
        return all(c == 0 for c in self.coeffs[0::2])

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return PowerSeries(self.coeffs[: order + 1], order, self.var)

    def map_coefficients(self, fn: Callable[[int, Fraction], Number]) -> "PowerSeries":
        """Apply ``fn(k, c_k)`` to each coefficient (diagonal operators)."""
        return PowerSeries([fn(k, c) for k, c in enumerate(self.coeffs)], self.order, self.var)

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "PowerSeries | None":
        if isinstance(other, PowerSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return PowerSeries([other], self.order, self.var)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        r = min(self.order, o.order)
        return PowerSeries([a + b for a, b in zip(self.coeffs[: r + 1], o.coeffs[: r + 1])], r, self.var)

    __radd__ = __add__

    def __neg__(self) -> "PowerSeries":
        return PowerSeries([-c for c in self.coeffs], self.order, self.var)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            return PowerSeries([c * a for a in self.coeffs], self.order, self.var)
        if not isinstance(other, PowerSeries):
            return NotImplemented
        r = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        va, vb = self.valuation(), other.valuation()
        if va is None or vb is None:
            return PowerSeries([], r, self.var)
        out = [Fraction(0)] * (r + 1)
        for i in range(va, r + 1):
            ai = a[i]
            if not ai:
                continue
            for j in range(vb, r - i + 1):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return PowerSeries(out, r, self.var)

    __rmul__ = __mul__

    def reciprocal(self) -> "PowerSeries":
        b0 = self.coeffs[0]
        if b0 == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        r = self.order
        b = self.coeffs
        inv0 = 1 / b0
        q = [inv0]
        for k in range(1, r + 1):
            acc = sum((b[i] * q[k - i] for i in range(1, k + 1) if b[i]), Fraction(0))
            q.append(-acc * inv0)
        return PowerSeries(q, r, self.var)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            if c == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / c)
        if not isinstance(other, PowerSeries):
            return NotImplemented
        r = min(self.order, other.order)
        return self.truncate(r) * other.truncate(r).reciprocal()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int) -> "PowerSeries":
        if not isinstance(n, int):
            return self.pow(_frac(n))
        if n < 0:
            return self.reciprocal() ** (-n)
        result = PowerSeries.constant(1, self.order, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        o = self._coerce(other) if not isinstance(other, PowerSeries) else other
        if o is None:
            return NotImplemented
        return self.order == o.order and self.coeffs == o.coeffs

    def __hash__(self) -> int:
        return hash((self.coeffs, self.order))

    def agrees_with(self, other: "PowerSeries", order: int | None = None) -> bool:
        """Coefficientwise equality up to ``order`` (default: the common order)."""
        r = min(self.order, other.order) if order is None else order
        return self.coeffs[: r + 1] == other.coeffs[: r + 1]

    # calculus -------------------------------------------------------------
    def derivative(self) -> "PowerSeries":
        """d/ds; the result is known one order less."""
        if self.order == 0:
            return PowerSeries([0], 0, self.var)
        return PowerSeries([k * self.coeffs[k] for k in range(1, self.order + 1)], self.order - 1, self.var)

    def antiderivative(self) -> "PowerSeries":
        """Integral from 0; the result is known one order more."""
        return PowerSeries([0] + [c / (k + 1) for k, c in enumerate(self.coeffs)], self.order + 1, self.var)

    def log(self) -> "PowerSeries":
        if self.coeffs[0] != 1:
            raise ValueError("log needs constant term 1")
        if self.order == 0:
            return PowerSeries([0], 0, self.var)
        return (self.derivative() / self.truncate(self.order - 1)).antiderivative()

    def exp(self) -> "PowerSeries":
        if self.coeffs[0] != 0:
            raise ValueError("exp needs constant term 0")
        a = self.coeffs
        e = [Fraction(1)]
        for k in range(1, self.order + 1):
            e.append(sum((i * a[i] * e[k - i] for i in range(1, k + 1) if a[i]), Fraction(0)) / k)
        return PowerSeries(e, self.order, self.var)

    def pow(self, alpha: Number) -> "PowerSeries":
        """Rational power, using the Miller recurrence.

        The constant term must have an exact rational ``alpha``-th power.
        """
        alpha = _frac(alpha)
        if alpha.denominator == 1 and alpha >= 0:
            return self ** int(alpha)
        a = self.coeffs
        a0 = a[0]
        if a0 == 0:
            raise ValueError("rational power of a series with zero constant term")
        p = [rational_power(a0, alpha)]
        for k in range(1, self.order + 1):
            acc = sum(((alpha * i - (k - i)) * a[i] * p[k - i] for i in range(1, k + 1) if a[i]), Fraction(0))
            p.append(acc / (k * a0))
        return PowerSeries(p, self.order, self.var)

    def sqrt(self) -> "PowerSeries":
        return self.pow(Fraction(1, 2))

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """``self(inner(s))``; ``inner`` must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("inner series must vanish at 0")
        r = min(self.order, inner.order)
        out = PowerSeries.constant(self.coeffs[r], r, self.var)
        inner = inner.truncate(r)
        for c in reversed(self.coeffs[:r]):
            out = out * inner + c
        return out

    def evaluate(self, x):
        """Horner evaluation of the truncated polynomial at ``x``.

        ``x`` may be a Fraction, float or mpmath number; coefficients are
        converted by the number type's own arithmetic.
        """
        acc = 0 * x
        for c in reversed(self.coeffs):
            if isinstance(x, Fraction):
                acc = acc * x + c
            else:
                acc = acc * x + type(x)(c.numerator) / c.denominator
        return acc

    # io -------------------------------------------------------------------
    def to_dict(self) -> dict:
        return {"var": self.var, "order": self.order, "coeffs": [str(c) for c in self.coeffs]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: Mapping) -> "PowerSeries":
        return cls([Fraction(c) for c in d["coeffs"]], int(d["order"]), d.get("var", "s"))

    @classmethod
    def from_json(cls, text: str) -> "PowerSeries":
        return cls.from_dict(json.loads(text))

    def __repr__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*{self.var}^{k}")
        body = " + ".join(terms) or "0"
        return f"{body} + O({self.var}^{self.order + 1})"


# --------------------------------------------------------------------------
# implicit equations
# --------------------------------------------------------------------------

Bivariate = Mapping[tuple[int, int], Number]
"""Polynomial ``F(z, s)`` as ``{(deg_z, deg_s): coeff}``."""


def _eval_bivariate(F: Bivariate, z: PowerSeries, order: int, dz: bool = False) -> PowerSeries:
    z = z.truncate(order) if z.order > order else PowerSeries(z.coeffs, order, z.var)
    max_i = max(i for i, _ in F)
    powers = [PowerSeries.constant(1, order, z.var)]
    for _ in range(max_i):
        powers.append(powers[-1] * z)
    out = PowerSeries([], order, z.var)
    for (i, j), c in F.items():
        c = _frac(c)
        if dz:
            if i == 0:
                continue
            c, i = c * i, i - 1
        if j <= order and c:
            out = out + PowerSeries.monomial(j, order, 1, z.var) * powers[i] * c
    return out


def implicit_solve(F: Bivariate, z_init: Number, order: int, var: str = "s") -> PowerSeries:
    """Series root ``z(s)`` of ``F(z, s) = 0`` with ``z(0) = z_init``.

    Newton iteration with precision doubling; requires ``F(z_init, 0) = 0``
    and ``F_z(z_init, 0) != 0``.

    Examples
    --------
    >>> u = implicit_solve({(3, 2): 18, (2, 1): 9, (1, 0): 1, (0, 1): 6}, 0, 3)
    >>> [int(c) for c in u.coeffs]
    [0, -6, 0, -324]
    """
    z0 = _frac(z_init)
    start = PowerSeries([z0], 0, var)
    if _eval_bivariate(F, start, 0)[0] != 0:
        raise ValueError("F(z_init, 0) != 0: not a root at s = 0")
    if _eval_bivariate(F, start, 0, dz=True)[0] == 0:
        raise ValueError("F_z(z_init, 0) = 0: root is not simple")
    z = start
    prec = 1  # z is exact modulo s^prec
    while prec < order + 1:
        prec = min(2 * prec, order + 1)
        r = prec - 1
        zr = PowerSeries(z.coeffs, r, var)
        z = zr - _eval_bivariate(F, zr, r) / _eval_bivariate(F, zr, r, dz=True)
    z = PowerSeries(z.coeffs, order, var)
    if not _eval_bivariate(F, z, order).is_zero():
        raise ArithmeticError("Newton iteration failed to produce an exact root")
    return z
