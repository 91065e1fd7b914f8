"""Construction and verification of VOP families.

A family is fixed by a realization, a polynomial ``R`` (giving the lowering
element ``G = R(H) Z``) and a polynomial ``q`` without constant term.  The
polynomials are ``P_n = exp(q(G)) psi_n`` with ``psi_n = x^n`` (continuous)
or ``(x)_n`` (discrete), always stored in the monomial basis.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import IdentityViolation, RodriguesMismatch, SpecError
from .exact import BasisTag, Poly, as_rational, to_basis
from .opalg import (
    OperatorExpr,
    Realization,
    ad_exp,
    apply,
    compose,
    default_cap,
    euler,
    exp_apply,
    lowering_generator,
    nabla,
    poly_of,
    raising_base,
    x_hat,
)


class Kind(enum.Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"

    @property
    def realization(self) -> Realization:
        return Realization.DIFFERENTIAL if self is Kind.CONTINUOUS else Realization.SHIFT


@dataclass(frozen=True)
class FamilySpec:
    kind: Kind
    R: Poly
    q: Poly
    max_n: int
    name: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.kind, Kind):
            object.__setattr__(self, "kind", Kind(self.kind))
        if self.R.is_zero():
            raise SpecError("R must not be identically zero")
        if self.q.degree < 1:
            raise SpecError("q must have degree >= 1")
        if self.q.coeff(0) != 0:
            raise SpecError("q must have zero constant term")
        if not isinstance(self.max_n, int) or isinstance(self.max_n, bool) or self.max_n < 0:
            raise SpecError("max_n must be a non-negative integer")

    @property
    def d(self) -> int:
        """Degree of ``R``."""
        return self.R.degree

    @property
    def l(self) -> int:
        """Degree of ``q``."""
        return self.q.degree

    def with_max_n(self, max_n: int) -> "FamilySpec":
        return FamilySpec(self.kind, self.R, self.q, max_n, self.name)

    def with_kind(self, kind: Kind) -> "FamilySpec":
        return FamilySpec(kind, self.R, self.q, self.max_n, self.name)

    def to_json(self) -> dict:
        out = {
            "realization": self.kind.value,
            "R": self.R.to_json(),
            "q": self.q.to_json(),
            "max_n": self.max_n,
        }
        if self.name is not None:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "FamilySpec":
        try:
            kind = Kind(data["realization"])
        except (KeyError, ValueError) as exc:
            raise SpecError(f"bad or missing realization: {exc}") from None
        for key in ("R", "q", "max_n"):
            if key not in data:
                raise SpecError(f"missing field {key!r}")
        try:
            R = Poly.from_json(data["R"])
            q_raw = list(data["q"])
            q = Poly.from_json(q_raw)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"bad coefficient: {exc}") from None
        if q_raw and as_rational(q_raw[0]) != 0:
            raise SpecError("q must have zero constant term")
        return cls(kind, R, q, data["max_n"], data.get("name"))


@dataclass(frozen=True)
class FamilyOperators:
    G: OperatorExpr
    H: OperatorExpr
    L: OperatorExpr
    M: OperatorExpr
    qG: OperatorExpr
    sigma_x: OperatorExpr  # image of multiplication by x


def build_operators(spec: FamilySpec) -> FamilyOperators:
    """``G = R(H)Z``, ``L = H + q'(G)G`` and the raising operator ``M``.

    ``M`` is the image of the Weyl generator ``Y`` under ``exp(ad_q(G))``:
    ``Y = x`` for the continuous realization and ``Y = g = x - H`` for the
    discrete one, since only ``g`` sends ``(x)_n`` to ``(x)_{n+1}``.  The
    image of multiplication by ``x`` is kept separately as ``sigma_x``.
    """
    real = spec.kind.realization
    H = euler(real)
    G = lowering_generator(real, spec.R)
    qG = poly_of(G, spec.q)
    L = H + compose(poly_of(G, spec.q.derivative()), G)
    cap = default_cap(spec.l, spec.d)
    M, _ = ad_exp(qG, raising_base(real), cap)
    if spec.kind is Kind.CONTINUOUS:
        sigma_x = M
    else:
        # x = g + H, pushed through the automorphism piece by piece
        sigma_h, _ = ad_exp(qG, H, cap)
        sigma_x = M + sigma_h
    return FamilyOperators(G=G, H=H, L=L, M=M, qG=qG, sigma_x=sigma_x)


def basis_poly(kind: Kind, n: int) -> Poly:
    return Poly.monomial(n) if kind is Kind.CONTINUOUS else Poly.falling_factorial(n)


@dataclass(frozen=True)
class Family:
    spec: FamilySpec
    polys: tuple
    ops: FamilyOperators

    @property
    def G(self) -> OperatorExpr:
        return self.ops.G

    @property
    def H(self) -> OperatorExpr:
        return self.ops.H

    @property
    def L(self) -> OperatorExpr:
        return self.ops.L

    @property
    def M(self) -> OperatorExpr:
        return self.ops.M

    @property
    def N(self) -> int:
        return len(self.polys) - 1

    def falling_factorial(self, n: int) -> Poly:
        return to_basis(self.polys[n], BasisTag.MONOMIAL, BasisTag.FALLING_FACTORIAL)

    def to_json(self) -> dict:
        rows = []
        for n, p in enumerate(self.polys):
            row = {"n": n, "monomial": p.to_json()}
            if self.spec.kind is Kind.DISCRETE:
                row["falling_factorial"] = self.falling_factorial(n).to_json()
            rows.append(row)
        return {"spec": self.spec.to_json(), "polynomials": rows}


def _series_term(args):
    qG, p = args
    return exp_apply(qG, p)


def generate(spec: FamilySpec, jobs: int = 1, ops: FamilyOperators | None = None) -> Family:
    """Generate ``P_0 .. P_N``; ``jobs > 1`` spreads the indices over processes."""
    if ops is None:
        ops = build_operators(spec)
    bases = [basis_poly(spec.kind, n) for n in range(spec.max_n + 1)]
    if jobs > 1 and len(bases) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            polys = list(pool.map(_series_term, [(ops.qG, b) for b in bases]))
    else:
        polys = [exp_apply(ops.qG, b) for b in bases]
    for n, p in enumerate(polys):
        if p.degree != n or not p.is_monic():
            raise IdentityViolation(f"P_{n} is not monic of degree {n}: {p}")
    return Family(spec=spec, polys=tuple(polys), ops=ops)


# ---------------------------------------------------------------------------
# verification


@dataclass
class CheckResult:
    name: str
    passed: bool = True
    first_failure: Optional[int] = None
    checked: int = 0
    ops: int = 0  # operator applications performed

    def fail(self, n: int):
        if self.passed:
            self.passed = False
            self.first_failure = n

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "first_failure": self.first_failure,
            "checked": self.checked,
            "operator_applications": self.ops,
        }


@dataclass
class VerificationReport:
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def add(self, result: CheckResult) -> "VerificationReport":
        self.checks[result.name] = result
        return self

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        for c in other.checks.values():
            self.add(c)
        return self

    def __getitem__(self, name: str) -> CheckResult:
        return self.checks[name]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [self.checks[k].to_json() for k in self.checks],
        }


def check_eigen(fam: Family) -> VerificationReport:
    res = CheckResult("eigen")
    for n, p in enumerate(fam.polys):
        res.ops += 1
        res.checked += 1
        if apply(fam.L, p) != p.scale(n):
            res.fail(n)
    return VerificationReport().add(res)


def check_ladder(fam: Family) -> VerificationReport:
    R = fam.spec.R
    low = CheckResult("lowering")
    rai = CheckResult("raising")
    P = fam.polys
    for n, p in enumerate(P):
        low.ops += 1
        low.checked += 1
        expected = P[n - 1].scale(n * R(n - 1)) if n > 0 else Poly()
        if apply(fam.G, p) != expected:
            low.fail(n)
        if n + 1 < len(P):
            rai.ops += 1
            rai.checked += 1
            if apply(fam.M, p) != P[n + 1]:
                rai.fail(n)
    return VerificationReport().add(low).add(rai)


def rodrigues(fam: Family, n: int) -> Poly:
    """``M^n 1``; raises :class:`RodriguesMismatch` unless it equals ``P_n``."""
    if not 0 <= n <= fam.N:
        raise ValueError(f"index {n} outside 0..{fam.N}")
    p = Poly([1])
    for _ in range(n):
        p = apply(fam.M, p)
    if p != fam.polys[n]:
        raise RodriguesMismatch(f"M^{n} 1 = {p} differs from P_{n} = {fam.polys[n]}")
    return p


def check_rodrigues(fam: Family, upto: int | None = None) -> VerificationReport:
    res = CheckResult("rodrigues")
    top = fam.N if upto is None else min(upto, fam.N)
    p = Poly([1])
    for n in range(top + 1):
        res.checked += 1
        if p != fam.polys[n]:
            res.fail(n)
        if n < top:
            p = apply(fam.M, p)
            res.ops += 1
    return VerificationReport().add(res)


def check_operator_identities(fam: Family) -> VerificationReport:
    """Operator-level (not pointwise) identities of the construction.

    * ``exp(ad_q(G))(H) == H + q'(G) G``
    * discrete: ``L == q'(G) G - x nabla``
    * discrete: ``sigma_x == exp(ad_q(G))(x)`` computed directly on ``x``
    * discrete: ``sigma_x P_n == P_{n+1} + n P_n``
    """
    spec = fam.spec
    real = spec.kind.realization
    cap = default_cap(spec.l, spec.d)
    qpG = compose(poly_of(fam.G, spec.q.derivative()), fam.G)
    sig_h = CheckResult("sigma_H")
    sigma_H, _ = ad_exp(fam.ops.qG, fam.H, cap)
    sig_h.checked = 1
    if sigma_H != fam.H + qpG or sigma_H != fam.L:
        sig_h.fail(0)
    report = VerificationReport().add(sig_h)
    if spec.kind is Kind.DISCRETE:
        lform = CheckResult("L_discrete_form", checked=1)
        if fam.L != qpG - compose(x_hat(real), nabla()):
            lform.fail(0)
        xform = CheckResult("sigma_x_direct", checked=1)
        direct, _ = ad_exp(fam.ops.qG, x_hat(real), cap)
        if direct != fam.ops.sigma_x:
            xform.fail(0)
        xact = CheckResult("sigma_x_action")
        P = fam.polys
        for n in range(len(P) - 1):
            xact.checked += 1
            xact.ops += 1
            if apply(fam.ops.sigma_x, P[n]) != P[n + 1] + P[n].scale(n):
                xact.fail(n)
        report.add(lform).add(xform).add(xact)
    return report


def verify_family(fam: Family, rodrigues_upto: int | None = None) -> VerificationReport:
    report = VerificationReport()
    report.merge(check_eigen(fam))
    report.merge(check_ladder(fam))
    report.merge(check_rodrigues(fam, rodrigues_upto))
    report.merge(check_operator_identities(fam))
    return report


__all__ = [
    "Kind",
    "FamilySpec",
    "FamilyOperators",
    "Family",
    "CheckResult",
    "VerificationReport",
    "build_operators",
    "basis_poly",
    "generate",
    "check_eigen",
    "check_ladder",
    "rodrigues",
    "check_rodrigues",
    "check_operator_identities",
    "verify_family",
]
