"""The coefficient map ``t^n -> (x)_n`` between continuous and discrete families.

Algebraically this is a change of basis through Stirling numbers: the
monomial coefficients of a polynomial in ``t`` are reused as falling
factorial coefficients in ``x``.  It intertwines ``R(H) d`` with
``R(H) Delta``, so it carries ``exp(q(G^c)) t^n`` to ``exp(q(G^d)) (x)_n``.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import classical
from .errors import CorrespondenceMismatch, RealizationMismatch, TableTooSmall
from .exact import BasisTag, Poly, StirlingTable, as_rational, stirling_table, to_basis
from .family import Family, Kind, check_eigen, generate
from .opalg import DIFF, SHIFT, apply, g_discrete, lowering_generator
from .recurrence import RecurrenceTable, extract, infer_d


@dataclass(frozen=True)
class MellinMap:
    max_degree: int
    table: StirlingTable = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.max_degree < 0:
            raise ValueError("max_degree must be >= 0")
        object.__setattr__(self, "table", stirling_table(self.max_degree))

    def _check(self, p: Poly):
        if p.degree > self.max_degree:
            raise TableTooSmall(f"degree {p.degree} exceeds max_degree {self.max_degree}")

    def __call__(self, p: Poly) -> Poly:
        self._check(p)
        return to_basis(p, BasisTag.FALLING_FACTORIAL, BasisTag.MONOMIAL, self.table)

    def inverse(self, p: Poly) -> Poly:
        self._check(p)
        return to_basis(p, BasisTag.MONOMIAL, BasisTag.FALLING_FACTORIAL, self.table)


def mellin_star(p: Poly) -> Poly:
    return MellinMap(max(p.degree, 0))(p)


def mellin_inverse(p: Poly) -> Poly:
    return MellinMap(max(p.degree, 0)).inverse(p)


@dataclass
class CorrespondenceReport:
    verdicts: list  # per n: M*(P^c_n) == P^d_n
    inverse_ok: bool
    eigen_ok: bool
    g_recurrence_failures: list
    d_continuous: Optional[int] = None
    d_discrete: Optional[int] = None

    @property
    def passed(self) -> bool:
        return all(self.verdicts) and self.inverse_ok and self.eigen_ok and not self.g_recurrence_failures

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "per_n": [{"n": n, "match": ok} for n, ok in enumerate(self.verdicts)],
            "inverse_ok": self.inverse_ok,
            "eigen_ok": self.eigen_ok,
            "g_recurrence_failures": self.g_recurrence_failures,
            "d_continuous": self.d_continuous,
            "d_discrete": self.d_discrete,
        }


def _image(args):
    mmap, p = args
    return mmap(p)


def correspondence(cont: Family, jobs: int = 1) -> tuple[Family, CorrespondenceReport]:
    """Regenerate the discrete family for ``cont.spec`` and compare it with
    the image of ``cont`` term by term (never raises on mismatch)."""
    if cont.spec.kind is not Kind.CONTINUOUS:
        raise RealizationMismatch("correspondence starts from a continuous family")
    disc = generate(cont.spec.with_kind(Kind.DISCRETE), jobs=jobs)
    mmap = MellinMap(cont.N)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            images = list(pool.map(_image, [(mmap, p) for p in cont.polys]))
    else:
        images = [mmap(p) for p in cont.polys]
    verdicts = [img == pd for img, pd in zip(images, disc.polys)]
    inverse_ok = all(mmap.inverse(pd) == pc for pd, pc in zip(disc.polys, cont.polys))
    eigen_ok = check_eigen(disc).passed
    report = CorrespondenceReport(verdicts, inverse_ok, eigen_ok, [])
    if cont.N >= 2:
        ct = extract(cont)
        report.g_recurrence_failures = g_recurrence_failures(disc, ct)
        report.d_continuous = infer_d(ct, cont.spec)
        if all(verdicts):
            # a mismatched discrete side has no meaningful bandwidth to report
            report.d_discrete = infer_d(extract(disc), disc.spec)
    return disc, report


def map_family(cont: Family, jobs: int = 1) -> Family:
    """Discrete family with the same ``(R, q)``; raises
    :class:`CorrespondenceMismatch` unless ``M*(P^c_n) == P^d_n`` for all n."""
    disc, report = correspondence(cont, jobs)
    bad = [n for n, ok in enumerate(report.verdicts) if not ok]
    if bad:
        raise CorrespondenceMismatch(f"image of P^c_n differs from P^d_n at n = {bad[0]}")
    return disc


def g_recurrence_failures(disc: Family, cont_table: RecurrenceTable) -> list[int]:
    """Rows where ``g P_n != P_{n+1} + sum_j gamma_j(n) P_{n-j}`` using the
    continuous recurrence coefficients and ``g = x - H``."""
    g = g_discrete()
    bad = []
    for n in range(min(cont_table.N, disc.N)):
        rhs = disc.polys[n + 1]
        for j, v in cont_table.row(n).items():
            rhs = rhs + disc.polys[n - j].scale(v)
        if apply(g, disc.polys[n]) != rhs:
            bad.append(n)
    return bad


def intertwine_check(R: Poly, bound: int) -> bool:
    """``M* o R(H) d == R(H) Delta o M*`` on ``t^n`` for ``n <= bound``."""
    Gc = lowering_generator(DIFF, R)
    Gd = lowering_generator(SHIFT, R)
    mmap = MellinMap(max(bound, 0))
    for n in range(bound + 1):
        lhs = mmap(apply(Gc, Poly.monomial(n)))
        rhs = apply(Gd, Poly.falling_factorial(n))
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# Laguerre / Meixner dictionary


def published_dictionary(beta, c) -> tuple[Fraction, Fraction]:
    """``(mu, alpha)`` as stated with the correspondence: ``c/(1-c)``, ``-beta-1``."""
    beta, c = as_rational(beta), as_rational(c)
    return c / (1 - c), -beta - 1


def derived_dictionary(beta, c) -> tuple[Fraction, Fraction]:
    """``(mu, alpha)`` for which ``M*(L_n^alpha(-mu t))`` is monic Meixner up to scale.

    The continuous family for ``R = m (H + beta)`` is ``lam^n L_n^(beta-1)(t/lam)``
    with ``lam = -m``, and the discrete one is monic Meixner when
    ``m = c/(c-1)``; hence ``mu = 1/m = (c-1)/c`` and ``alpha = beta - 1``.
    """
    beta, c = as_rational(beta), as_rational(c)
    return (c - 1) / c, beta - 1


def laguerre_meixner_failures(beta, c, n_max: int, mu=None, alpha=None) -> list[int]:
    """Indices ``n <= n_max`` where the image of ``L_n^alpha(-mu t)`` is not a
    multiple of ``M_n(x; beta, c)`` (both from their hypergeometric sums).

    ``mu`` and ``alpha`` default to :func:`published_dictionary`.
    """
    beta, c = as_rational(beta), as_rational(c)
    pm, pa = published_dictionary(beta, c)
    mu = pm if mu is None else as_rational(mu)
    alpha = pa if alpha is None else as_rational(alpha)
    mmap = MellinMap(max(n_max, 0))
    bad = []
    for n in range(n_max + 1):
        lag = classical.rescale(classical.laguerre(n, alpha, monic=False), -mu)
        image = mmap(lag)
        target = classical.meixner(n, beta, c)
        if image.is_zero() or image / image.lead != target:
            bad.append(n)
    return bad


__all__ = [
    "MellinMap",
    "mellin_star",
    "mellin_inverse",
    "CorrespondenceReport",
    "correspondence",
    "map_family",
    "g_recurrence_failures",
    "intertwine_check",
    "published_dictionary",
    "derived_dictionary",
    "laguerre_meixner_failures",
]
