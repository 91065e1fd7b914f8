"""Exact rational scalars and dense univariate polynomials.

Scalars are :class:`fractions.Fraction` (always reduced, positive
denominator, zero is ``0/1``).  A :class:`Poly` is an immutable tuple of
coefficients in ascending degree with no trailing zeros; the zero polynomial
is the empty tuple and has degree ``-1``.
"""

from __future__ import annotations

import enum
import threading
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Union

from .errors import InexactDivision, TableTooSmall

Rational = Fraction
Scalar = Union[int, Fraction]

ZERO_DEGREE = -1  # degree of the zero polynomial


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, float):
        raise TypeError(f"floating point value {value!r} refused; use 'p/q' strings")
    if isinstance(value, (int, Fraction, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def rational_str(value: Fraction) -> str:
    return str(Fraction(value))


class Poly:
    """Dense univariate polynomial with rational coefficients.

    ``Poly([1, 0, 2])`` is ``1 + 2x^2``.  The variable name is only a
    presentation concern (see :meth:`to_str`).
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "_c", tuple(cs))

    @classmethod
    def _raw(cls, cs: list) -> "Poly":
        # cs already Fractions; only trailing zeros need stripping
        while cs and cs[-1] == 0:
            cs.pop()
        p = object.__new__(cls)
        object.__setattr__(p, "_c", tuple(cs))
        return p

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    def __reduce__(self):
        return (Poly, (self._c,))

    # constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def monomial(cls, n: int, c=1) -> "Poly":
        return cls([0] * n + [c])

    @classmethod
    def falling_factorial(cls, n: int, shift=0) -> "Poly":
        """(x + shift)_n = (x+shift)(x+shift-1)...(x+shift-n+1), expanded."""
        p = cls([1])
        s = as_rational(shift)
        for k in range(n):
            p = p * cls([s - k, 1])
        return p

    # accessors ------------------------------------------------------------
    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    @property
    def lead(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self._c[k] if 0 <= k < len(self._c) else Fraction(0)

    def is_monic(self) -> bool:
        return bool(self._c) and self._c[-1] == 1

    # ring operations ----------------------------------------------------
    def __add__(self, other) -> "Poly":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw([-c for c in self._c])

    def __sub__(self, other) -> "Poly":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._c, other._c
        if not a or not b:
            return Poly()
        # integer convolution over a common denominator, one reduction per output
        ia, da = _integerize(a)
        ib, db = _integerize(b)
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(ia):
            if ai == 0:
                continue
            for j, bj in enumerate(ib):
                out[i + j] += ai * bj
        return Poly._raw(_rationalize(out, da * db))

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = as_rational(c)
        if c == 0:
            return Poly()
        return Poly._raw([c * a for a in self._c])

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        out, base = Poly([1]), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, divisor: "Poly") -> tuple["Poly", "Poly"]:
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self._c)
        dd = divisor.degree
        lead = divisor.lead
        if len(rem) - 1 < dd:
            return Poly(), self
        quot = [Fraction(0)] * (len(rem) - dd)
        for k in range(len(rem) - 1 - dd, -1, -1):
            c = rem[k + dd] / lead
            quot[k] = c
            if c:
                for i, dc in enumerate(divisor._c):
                    rem[k + i] -= c * dc
        return Poly._raw(quot), Poly._raw(rem[:dd])

    def exact_div(self, divisor: "Poly") -> "Poly":
        q, r = self.divmod(divisor)
        if not r.is_zero():
            raise InexactDivision(f"{self} is not divisible by {divisor}")
        return q

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, Poly):
            return self.exact_div(other)
        return self.scale(1 / as_rational(other))

    # calculus -----------------------------------------------------------
    def __call__(self, value):
        """Horner evaluation; ``value`` may be a rational or a Poly."""
        if isinstance(value, Poly):
            out = Poly()
            for c in reversed(self._c):
                out = out * value + c
            return out
        v = as_rational(value)
        acc = Fraction(0)
        for c in reversed(self._c):
            acc = acc * v + c
        return acc

    def derivative(self, k: int = 1) -> "Poly":
        cs = self._c
        for _ in range(k):
            cs = [i * c for i, c in enumerate(cs)][1:]
        return Poly._raw(list(cs))

    # comparisons / hashing ---------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._c == Poly([other])._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("Poly", self._c))

    def __bool__(self) -> bool:
        return bool(self._c)

    # presentation -------------------------------------------------------------
    def to_json(self) -> list[str]:
        return [rational_str(c) for c in self._c]

    @classmethod
    def from_json(cls, data: Sequence) -> "Poly":
        return cls(as_rational(c) for c in data)

    def to_str(self, var: str = "x") -> str:
        if not self._c:
            return "0"
        parts = []
        for k in range(len(self._c) - 1, -1, -1):
            c = self._c[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self.to_str()})"

    __str__ = to_str


def _integerize(cs) -> tuple[list[int], int]:
    """Integers ``m_k`` and ``den`` with ``cs[k] == m_k / den``."""
    den = lcm(*(c.denominator for c in cs)) if cs else 1
    return [c.numerator * (den // c.denominator) for c in cs], den


def _rationalize(ints: list[int], den: int) -> list[Fraction]:
    if den == 1:
        return [Fraction(m) for m in ints]
    return [Fraction(m, den) for m in ints]


def _coerce(other):
    if isinstance(other, Poly):
        return other
    if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
        return Poly([other])
    return NotImplemented


def taylor_shift(p: Poly, s) -> Poly:
    """Return p(x + s).

    Repeated synthetic division: O(deg^2) exact operations.
    """
    s = as_rational(s)
    if s == 0 or p.degree < 1:
        return p
    if s.denominator == 1:
        a, den = _integerize(p.coeffs)
        s = s.numerator
    else:
        a, den = list(p.coeffs), None
    n = len(a) - 1
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            a[j] += s * a[j + 1]
    return Poly._raw(a if den is None else _rationalize(a, den))


def forward_diff(p: Poly, j: int = 1) -> Poly:
    """Return the j-th forward difference, (Δp)(n) = p(n+1) - p(n)."""
    if j < 0:
        raise ValueError("difference order must be non-negative")
    for _ in range(j):
        if p.is_zero():
            break
        p = taylor_shift(p, 1) - p
    return p


# -----------------------------------------------------------------------------
# Stirling numbers and basis conversion


class BasisTag(enum.Enum):
    MONOMIAL = "monomial"
    FALLING_FACTORIAL = "falling_factorial"


class StirlingTable:
    """Signed Stirling numbers of the first kind ``s1[n][k]`` and second kind
    ``s2[n][k]`` for ``0 <= k <= n <= size``.

    ``(x)_n = sum_k s1[n][k] x^k`` and ``x^n = sum_k s2[n][k] (x)_k``.
    """

    __slots__ = ("size", "s1", "s2")

    def __init__(self, size: int):
        if size < 0:
            raise ValueError("table size must be non-negative")
        s1 = [[1]]
        s2 = [[1]]
        for n in range(size):
            prev1, prev2 = s1[-1], s2[-1]
            row1 = [0] * (n + 2)
            row2 = [0] * (n + 2)
            for k in range(1, n + 2):
                a1 = prev1[k - 1]
                b1 = prev1[k] if k <= n else 0
                row1[k] = a1 - n * b1
                a2 = prev2[k - 1]
                b2 = prev2[k] if k <= n else 0
                row2[k] = a2 + k * b2
            s1.append(row1)
            s2.append(row2)
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "s1", tuple(tuple(r) for r in s1))
        object.__setattr__(self, "s2", tuple(tuple(r) for r in s2))

    def __setattr__(self, name, value):
        raise AttributeError("StirlingTable is immutable")

    def __reduce__(self):
        # pickle the rows so worker processes need not recompute them
        return (_restore_table, (self.size, self.s1, self.s2))

    def first(self, n: int, k: int) -> int:
        return self.s1[n][k] if 0 <= k <= n else 0

    def second(self, n: int, k: int) -> int:
        return self.s2[n][k] if 0 <= k <= n else 0


def _restore_table(size: int, s1: tuple, s2: tuple) -> StirlingTable:
    table = object.__new__(StirlingTable)
    for name, value in (("size", size), ("s1", s1), ("s2", s2)):
        object.__setattr__(table, name, value)
    return table


_TABLE_LOCK = threading.Lock()
_TABLE: StirlingTable | None = None


def stirling_table(size: int) -> StirlingTable:
    """Shared table of at least ``size``; grows (never shrinks) on demand."""
    global _TABLE
    table = _TABLE
    if table is not None and table.size >= size:
        return table
    with _TABLE_LOCK:
        if _TABLE is None or _TABLE.size < size:
            grow = max(size, 2 * _TABLE.size if _TABLE is not None else 64)
            _TABLE = StirlingTable(grow)
        return _TABLE


def to_basis(
    p: Poly,
    source: BasisTag,
    target: BasisTag,
    table: StirlingTable | None = None,
) -> Poly:
    """Reinterpret a coefficient vector from one basis into another.

    The returned ``Poly`` is only a coefficient container: its entries are
    coefficients with respect to ``target``.
    """
    if source is target or p.is_zero():
        return p
    if table is None:
        table = stirling_table(p.degree)
    elif table.size < p.degree:
        raise TableTooSmall(f"table size {table.size} < degree {p.degree}")
    cs = p.coeffs
    rows = table.s2 if source is BasisTag.MONOMIAL else table.s1
    out = [Fraction(0)] * len(cs)
    for n, c in enumerate(cs):
        if c == 0:
            continue
        for k, s in enumerate(rows[n]):
            if s:
                out[k] += c * s
    return Poly._raw(out)


def falling_factorial_str(p: Poly, var: str = "x") -> str:
    """Render a falling-factorial coefficient vector as (x)_k terms."""
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeff(k)
        if c == 0:
            continue
        mono = "1" if k == 0 else f"({var})_{k}"
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _latex_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return rf"\frac{{{c.numerator}}}{{{c.denominator}}}"


def poly_latex(p: Poly, var: str = "x", falling: bool = False) -> str:
    """LaTeX for ``p``; with ``falling`` the coefficients are read as
    weights of ``(var)_k`` rather than ``var^k``."""
    if p.is_zero():
        return "0"
    out = ""
    for k in range(p.degree, -1, -1):
        c = p.coeff(k)
        if c == 0:
            continue
        if k == 0:
            mono = ""
        elif falling:
            mono = f"({var})_{{{k}}}"
        else:
            mono = var if k == 1 else f"{var}^{{{k}}}"
        mag = abs(c)
        body = _latex_coeff(mag) if (not mono or mag != 1) else ""
        body += mono
        if not out:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    return out


def newton_interpolate(points: Sequence[tuple]) -> Poly:
    """Minimal-degree polynomial through ``(node, value)`` pairs.

    Newton divided differences on exact rationals; nodes must be distinct.
    """
    xs = [as_rational(x) for x, _ in points]
    table = [as_rational(y) for _, y in points]
    coef = []
    n = len(xs)
    for level in range(n):
        coef.append(table[0])
        table = [
            (table[i + 1] - table[i]) / (xs[i + level + 1] - xs[i])
            for i in range(n - level - 1)
        ]
    out = Poly()
    for k in range(n - 1, -1, -1):
        out = out * Poly([-xs[k], 1]) + coef[k]
    return out


__all__ = [
    "Rational",
    "Poly",
    "BasisTag",
    "StirlingTable",
    "ZERO_DEGREE",
    "as_rational",
    "rational_str",
    "taylor_shift",
    "forward_diff",
    "stirling_table",
    "to_basis",
    "falling_factorial_str",
    "poly_latex",
    "newton_interpolate",
]
