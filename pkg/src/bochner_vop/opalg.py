"""Normal-form operators in the two Weyl-algebra realizations.

``Differential`` operators are stored as ``sum_k a_k(x) d^k`` (``k >= 0``);
``Shift`` operators as ``sum_s c_s(x) D^s`` with ``D f(x) = f(x+1)`` and
``s`` any integer.  Coefficients are :class:`~bochner_vop.exact.Poly` in
``x`` (monomial basis).  Values are immutable; all functions are pure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterator, Mapping

from .errors import NilpotencyCapExceeded, NotDegreeLowering, RealizationMismatch
from .exact import BasisTag, Poly, as_rational, taylor_shift


class Realization(enum.Enum):
    DIFFERENTIAL = "differential"
    SHIFT = "shift"


@dataclass(frozen=True)
class OperatorExpr:
    realization: Realization
    terms: tuple = ()  # sorted ((order, Poly), ...), zero coefficients dropped

    def __post_init__(self):
        merged: dict[int, Poly] = {}
        for order, coeff in self.terms:
            if self.realization is Realization.DIFFERENTIAL and order < 0:
                raise ValueError("differential orders must be non-negative")
            merged[order] = merged.get(order, Poly()) + coeff
        clean = tuple(sorted((k, c) for k, c in merged.items() if not c.is_zero()))
        object.__setattr__(self, "terms", clean)

    # construction -------------------------------------------------------
    @classmethod
    def from_mapping(cls, realization: Realization, terms: Mapping[int, Poly]) -> "OperatorExpr":
        return cls(realization, tuple(terms.items()))

    @classmethod
    def zero(cls, realization: Realization) -> "OperatorExpr":
        return cls(realization, ())

    @classmethod
    def scalar(cls, realization: Realization, c) -> "OperatorExpr":
        return cls(realization, ((0, Poly([c])),))

    @classmethod
    def identity(cls, realization: Realization) -> "OperatorExpr":
        return cls.scalar(realization, 1)

    @classmethod
    def multiplication(cls, realization: Realization, p: Poly) -> "OperatorExpr":
        return cls(realization, ((0, p),))

    # queries --------------------------------------------------------------
    def as_dict(self) -> dict[int, Poly]:
        return dict(self.terms)

    def coeff(self, order: int) -> Poly:
        for k, c in self.terms:
            if k == order:
                return c
        return Poly()

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.terms)

    def __iter__(self) -> Iterator:
        return iter(self.terms)

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "OperatorExpr"):
        if not isinstance(other, OperatorExpr):
            raise TypeError(f"expected OperatorExpr, got {type(other).__name__}")
        if other.realization is not self.realization:
            raise RealizationMismatch(
                f"{self.realization.value} vs {other.realization.value} operator"
            )

    def __add__(self, other: "OperatorExpr") -> "OperatorExpr":
        self._check(other)
        return OperatorExpr(self.realization, self.terms + other.terms)

    def __neg__(self) -> "OperatorExpr":
        return OperatorExpr(self.realization, tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: "OperatorExpr") -> "OperatorExpr":
        return self + (-other)

    def scale(self, c) -> "OperatorExpr":
        c = as_rational(c)
        return OperatorExpr(self.realization, tuple((k, p.scale(c)) for k, p in self.terms))

    def __mul__(self, other):
        if isinstance(other, OperatorExpr):
            return compose(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __matmul__(self, other: "OperatorExpr") -> "OperatorExpr":
        return compose(self, other)

    def __pow__(self, k: int) -> "OperatorExpr":
        out = OperatorExpr.identity(self.realization)
        for _ in range(k):
            out = compose(out, self)
        return out

    def __call__(self, p: Poly) -> Poly:
        return apply(self, p)

    # serialization ----------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "realization": self.realization.value,
            "terms": [{"order": k, "coeff": c.to_json()} for k, c in self.terms],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "OperatorExpr":
        real = Realization(data["realization"])
        return cls(real, tuple((int(t["order"]), Poly.from_json(t["coeff"])) for t in data["terms"]))

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        sym = "d" if self.realization is Realization.DIFFERENTIAL else "D"
        parts = []
        for k, c in reversed(self.terms):
            if k == 0:
                op = ""
            elif k == 1:
                op = sym
            else:
                op = f"{sym}^{k}" if k > 0 else f"{sym}^({k})"
            cs = c.to_str()
            if not op:
                parts.append(f"({cs})")
            elif cs == "1":
                parts.append(op)
            else:
                parts.append(f"({cs})*{op}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"OperatorExpr[{self.realization.value}]({self.to_str()})"


@dataclass(frozen=True)
class AdSeriesReport:
    steps: int  # first j with ad^j(A) == 0
    cap: int
    vanished: bool = field(default=True)


DIFF = Realization.DIFFERENTIAL
SHIFT = Realization.SHIFT


# ---------------------------------------------------------------------------
# core operations


def apply(A: OperatorExpr, p: Poly, basis: BasisTag = BasisTag.MONOMIAL) -> Poly:
    """Apply ``A`` to a polynomial given by monomial coefficients."""
    if basis is not BasisTag.MONOMIAL:
        raise RealizationMismatch("operators act on monomial-basis coefficient vectors")
    out = Poly()
    if A.realization is DIFF:
        for k, a in A.terms:
            if k > p.degree:
                continue
            out = out + a * p.derivative(k)
    else:
        for s, c in A.terms:
            out = out + c * taylor_shift(p, s)
    return out


def compose(A: OperatorExpr, B: OperatorExpr) -> OperatorExpr:
    """Normal form of ``A o B``."""
    A._check(B)
    acc: dict[int, Poly] = {}
    if A.realization is DIFF:
        # d^k o b = sum_m C(k, m) b^(m) d^(k-m)
        for k, a in A.terms:
            for m_ord, b in B.terms:
                for m in range(min(k, b.degree) + 1):
                    term = a * b.derivative(m).scale(comb(k, m))
                    order = k - m + m_ord
                    acc[order] = acc.get(order, Poly()) + term
    else:
        for s, a in A.terms:
            for t, b in B.terms:
                order = s + t
                acc[order] = acc.get(order, Poly()) + a * taylor_shift(b, s)
    return OperatorExpr(A.realization, tuple(acc.items()))


def commutator(A: OperatorExpr, B: OperatorExpr) -> OperatorExpr:
    return compose(A, B) - compose(B, A)


def poly_of(A: OperatorExpr, p: Poly) -> OperatorExpr:
    """Evaluate the polynomial ``p`` at the operator ``A`` (Horner)."""
    out = OperatorExpr.zero(A.realization)
    one = OperatorExpr.identity(A.realization)
    for c in reversed(p.coeffs):
        out = compose(out, A) + one.scale(c)
    return out


def default_cap(l: int, d: int) -> int:
    """Iteration cap for ad-series under a degree-``l`` polynomial in ``G``
    with ``deg R = d``; the proven bound for ``Y`` is ``d + 2``."""
    return l * (d + 2) + 4


def ad_exp(generator: OperatorExpr, A: OperatorExpr, cap: int) -> tuple[OperatorExpr, AdSeriesReport]:
    """``exp(ad_generator)(A) = sum_j ad^j(A) / j!`` for a locally nilpotent action."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    total = A
    term = A
    for j in range(1, cap + 1):
        term = commutator(generator, term).scale(Fraction(1, j))
        if term.is_zero():
            return total, AdSeriesReport(steps=j, cap=cap, vanished=True)
        total = total + term
    raise NilpotencyCapExceeded(
        f"ad-series did not vanish within {cap} steps; generator is not locally nilpotent here"
    )


def exp_apply(A: OperatorExpr, p: Poly) -> Poly:
    """``sum_j A^j p / j!`` for a degree-lowering ``A``.

    Every nonzero term must have strictly smaller degree than the previous
    one; otherwise :class:`NotDegreeLowering` is raised.
    """
    total = p
    term = p
    j = 0
    while not term.is_zero():
        j += 1
        nxt = apply(A, term).scale(Fraction(1, j))
        if not nxt.is_zero() and nxt.degree >= term.degree:
            raise NotDegreeLowering(
                f"series term {j} has degree {nxt.degree} >= previous degree {term.degree}"
            )
        term = nxt
        total = total + term
    return total


def conjugation_check(generator: OperatorExpr, A: OperatorExpr, bound: int, cap: int = 64) -> bool:
    """Check ``exp(ad_gen)(A) e^gen p == e^gen (A p)`` on ``x^m``, ``m <= bound``."""
    conj, _ = ad_exp(generator, A, cap)
    for m in range(bound + 1):
        p = Poly.monomial(m)
        if apply(conj, exp_apply(generator, p)) != exp_apply(generator, apply(A, p)):
            return False
    return True


# ---------------------------------------------------------------------------
# named operators


def x_hat(realization: Realization) -> OperatorExpr:
    return OperatorExpr.multiplication(realization, Poly.x())


def d_x() -> OperatorExpr:
    return OperatorExpr(DIFF, ((1, Poly([1])),))


def shift(s: int = 1) -> OperatorExpr:
    """``D^s``: f(x) -> f(x + s)."""
    return OperatorExpr(SHIFT, ((s, Poly([1])),))


def delta() -> OperatorExpr:
    """Forward difference ``D - 1``."""
    return shift(1) - OperatorExpr.identity(SHIFT)


def nabla() -> OperatorExpr:
    """Backward difference ``D^{-1} - 1``."""
    return shift(-1) - OperatorExpr.identity(SHIFT)


def euler_continuous() -> OperatorExpr:
    """``H = x d``."""
    return compose(x_hat(DIFF), d_x())


def euler_discrete() -> OperatorExpr:
    """``H = -x nabla``; the falling factorials are its eigenbasis."""
    return -compose(x_hat(SHIFT), nabla())


def g_discrete() -> OperatorExpr:
    """``g = x - H``; raises ``(x)_n`` to ``(x)_{n+1}``."""
    return x_hat(SHIFT) - euler_discrete()


def euler(realization: Realization) -> OperatorExpr:
    return euler_continuous() if realization is DIFF else euler_discrete()


def lowering_base(realization: Realization) -> OperatorExpr:
    """The Weyl ``Z`` of the realization: ``d`` or ``Delta``."""
    return d_x() if realization is DIFF else delta()


def raising_base(realization: Realization) -> OperatorExpr:
    """The Weyl ``Y`` paired with :func:`lowering_base`: ``x`` or ``g``."""
    return x_hat(DIFF) if realization is DIFF else g_discrete()


def lowering_generator(realization: Realization, R: Poly) -> OperatorExpr:
    """``G = R(H) Z``."""
    return compose(poly_of(euler(realization), R), lowering_base(realization))


__all__ = [
    "Realization",
    "OperatorExpr",
    "AdSeriesReport",
    "DIFF",
    "SHIFT",
    "apply",
    "compose",
    "commutator",
    "poly_of",
    "default_cap",
    "ad_exp",
    "exp_apply",
    "conjugation_check",
    "x_hat",
    "d_x",
    "shift",
    "delta",
    "nabla",
    "euler",
    "euler_continuous",
    "euler_discrete",
    "g_discrete",
    "lowering_base",
    "raising_base",
    "lowering_generator",
]
