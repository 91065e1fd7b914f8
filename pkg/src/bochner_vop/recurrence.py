"""Recurrence relations ``x P_n = P_{n+1} + sum_j gamma_j(n) P_{n-j}``.

The table of ``gamma_j(n)`` is read off a generated family by greedy
reduction against the monic basis; :func:`fit` turns each column into a
polynomial in ``n`` and :func:`infer_d` reads the orthogonality order.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Mapping, Sequence, Union

from .errors import (
    BandwidthExceeded,
    FitMismatch,
    IdentityViolation,
    InsufficientSamples,
    SpecNotQEqualsG,
)
from .exact import Poly, newton_interpolate, poly_latex, rational_str
from .family import Family, FamilySpec, Kind

DEFAULT_HOLDOUT = 3


@dataclass(frozen=True)
class RecurrenceTable:
    """``gamma[(j, n)]`` for ``0 <= j <= J`` and ``j <= n <= N - 1``.

    Offsets past the observed bandwidth ``J`` are absent; offsets inside it
    are stored even when zero.
    """

    gamma: Mapping
    J: int
    N: int
    kind: Kind = Kind.CONTINUOUS

    def value(self, j: int, n: int) -> Fraction:
        if j > self.J:
            return Fraction(0)
        return self.gamma[(j, n)]

    def column(self, j: int) -> list[tuple[int, Fraction]]:
        return [(n, self.gamma[(j, n)]) for n in range(j, self.N)]

    def row(self, n: int) -> dict[int, Fraction]:
        return {j: self.gamma[(j, n)] for j in range(min(self.J, n) + 1)}

    def zero_offsets(self) -> list[int]:
        return [j for j in range(self.J + 1) if all(v == 0 for _, v in self.column(j))]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "j", "gamma"])
        for n in range(self.N):
            for j in range(min(self.J, n) + 1):
                w.writerow([n, j, rational_str(self.gamma[(j, n)])])
        return buf.getvalue()


def _reduce_row(args) -> dict[int, Fraction]:
    polys, n = args
    r = polys[n] * Poly.x() - polys[n + 1]
    if r.degree > n:
        raise IdentityViolation(f"x P_{n} - P_{n+1} has degree {r.degree} > {n}")
    row: dict[int, Fraction] = {}
    for k in range(n, -1, -1):
        c = r.coeff(k)
        row[n - k] = c
        if c:
            r = r - polys[k].scale(c)
    if not r.is_zero():
        raise IdentityViolation(f"reduction of x P_{n} left remainder {r}")
    return row


def extract(fam: Family, jobs: int = 1) -> RecurrenceTable:
    """Exact recurrence table of ``fam`` (rows ``n = 0 .. N-1``)."""
    N = fam.N
    if N < 2:
        raise ValueError("recurrence extraction needs max_n >= 2")
    tasks = [(fam.polys[: n + 2], n) for n in range(N)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_reduce_row, tasks))
    else:
        rows = [_reduce_row(t) for t in tasks]
    J = max((j for row in rows for j, v in row.items() if v), default=0)
    gamma = {}
    for n, row in enumerate(rows):
        for j in range(min(J, n) + 1):
            gamma[(j, n)] = row[j]
    return RecurrenceTable(gamma=gamma, J=J, N=N, kind=fam.spec.kind)


def reconstruction_failures(table: RecurrenceTable, fam: Family) -> list[int]:
    """Indices ``n`` where ``x P_n != P_{n+1} + sum_j gamma(j, n) P_{n-j}``."""
    bad = []
    for n in range(table.N):
        rhs = fam.polys[n + 1]
        for j, v in table.row(n).items():
            rhs = rhs + fam.polys[n - j].scale(v)
        if rhs != fam.polys[n] * Poly.x():
            bad.append(n)
    return bad


@dataclass(frozen=True)
class RecurrenceForm:
    gamma_polys: tuple  # Poly in n, index j
    d_inferred: int
    bandwidth: int
    validated_range: tuple[int, int]
    kind: Kind = Kind.CONTINUOUS

    def gamma(self, j: int) -> Poly:
        return self.gamma_polys[j] if j < len(self.gamma_polys) else Poly()

    def evaluate(self, j: int, n: int) -> Fraction:
        return self.gamma(j)(n)

    def to_json(self) -> dict:
        return {
            "d": self.d_inferred,
            "bandwidth": self.bandwidth,
            "gamma": [
                {"j": j, "poly_in_n": p.to_json(), "identically_zero": p.is_zero()}
                for j, p in enumerate(self.gamma_polys)
            ],
        }

    def to_latex(self, symbol: str = "P") -> str:
        lhs = f"x {symbol}_{{n}}(x)"
        parts = [f"{symbol}_{{n+1}}(x)"]
        for j, p in enumerate(self.gamma_polys):
            if p.is_zero():
                continue
            idx = "n" if j == 0 else f"n-{j}"
            body = poly_latex(p, "n")
            term = f"{symbol}_{{{idx}}}(x)"
            if body == "1":
                parts.append(term)
            elif body == "-1":
                parts.append(f"-{term}")
            elif sum(1 for c in p.coeffs if c) == 1:
                parts.append(f"{body} {term}")
            else:
                parts.append(rf"\left({body}\right) {term}")
        rhs = parts[0]
        for t in parts[1:]:
            rhs += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return f"{lhs} = {rhs}"


def fit(table: RecurrenceTable, holdout: int = DEFAULT_HOLDOUT) -> RecurrenceForm:
    """Interpolate each column of ``table`` and verify on ``holdout`` samples.

    A held-out disagreement raises :class:`FitMismatch` when the interpolant
    had spare degrees of freedom, and :class:`InsufficientSamples` when it
    passed through every training point at full degree.
    """
    if holdout < 0:
        raise ValueError("holdout must be >= 0")
    polys = []
    for j in range(table.J + 1):
        samples = table.column(j)
        if len(samples) < holdout + 2:
            raise InsufficientSamples(
                f"offset {j} has {len(samples)} samples; need at least {holdout + 2}"
            )
        train = samples[: len(samples) - holdout]
        p = newton_interpolate(train)
        for n, v in samples[len(samples) - holdout:]:
            if p(n) != v:
                if p.degree >= len(train) - 1:
                    # the interpolant had no spare freedom: too few rows, not a bad family
                    raise InsufficientSamples(
                        f"offset {j}: {len(train)} training samples do not determine "
                        f"gamma_{j}; increase max_n"
                    )
                raise FitMismatch(f"gamma_{j}({n}) = {v} but fitted polynomial gives {p(n)}")
        polys.append(p)
    d = _last_nonzero(polys)
    return RecurrenceForm(
        gamma_polys=tuple(polys),
        d_inferred=d,
        bandwidth=d + 2,
        validated_range=(0, table.N - 1),
        kind=table.kind,
    )


def _last_nonzero(polys: Sequence[Poly]) -> int:
    for j in range(len(polys) - 1, -1, -1):
        if not polys[j].is_zero():
            return j
    return -1


def expected_max_offset(spec: FamilySpec) -> int:
    """Largest offset allowed by the bandwidth bound for ``spec``."""
    l, d = spec.l, spec.d
    if spec.kind is Kind.CONTINUOUS:
        return l * (d + 1) - 1
    return l * d + l - 1 if d > 0 else l


def infer_d(source: Union[RecurrenceForm, RecurrenceTable], spec: FamilySpec) -> int:
    """Largest offset with a non-vanishing coefficient, checked against the
    bandwidth bound of ``spec``."""
    if isinstance(source, RecurrenceForm):
        d = _last_nonzero(source.gamma_polys)
    else:
        d = max((j for (j, _), v in source.gamma.items() if v), default=-1)
    bound = expected_max_offset(spec)
    if d > bound:
        raise BandwidthExceeded(
            f"max offset {d} exceeds bound {bound} (l={spec.l}, d={spec.d}, {spec.kind.value})"
        )
    return d


def van_iseghem_violations(
    source: Union[RecurrenceForm, RecurrenceTable], n_max: int | None = None
) -> list[int]:
    """Integers ``n`` in ``[d, n_max]`` with ``gamma_d(n) == 0``.

    For a table the range stops at ``N - 1``; for a fitted form it defaults
    to ``N`` (one past the last tabulated row).
    """
    if isinstance(source, RecurrenceForm):
        d = source.d_inferred
        if d < 0:
            return []
        top = source.validated_range[1] + 1 if n_max is None else n_max
        return [n for n in range(d, top + 1) if source.evaluate(d, n) == 0]
    d = max((j for (j, _), v in source.gamma.items() if v), default=-1)
    if d < 0:
        return []
    top = source.N - 1 if n_max is None else min(n_max, source.N - 1)
    return [n for n in range(d, top + 1) if source.gamma[(d, n)] == 0]


def gamma_degree_bound(spec: FamilySpec, j: int) -> int:
    """Upper bound ``(j+1)(d+1)`` on ``deg gamma_j``."""
    return (j + 1) * (spec.d + 1)


def recommended_max_n(spec: FamilySpec, holdout: int = DEFAULT_HOLDOUT) -> int:
    """Smallest ``max_n`` for which :func:`fit` cannot saturate on ``spec``."""
    top = expected_max_offset(spec)
    return max(j + gamma_degree_bound(spec, j) + 1 + holdout for j in range(top + 1))


# ---------------------------------------------------------------------------
# closed form for q(G) = cG


def _delta_pow(S: Poly, j: int, m) -> Fraction:
    return sum(((-1) ** (j - i)) * comb(j, i) * S(m + i) for i in range(j + 1))


def closed_form_qG(spec: FamilySpec, n: int, printed: bool = False) -> list[tuple[int, Fraction]]:
    """``[(offset, gamma)]`` from the closed form for linear ``q``.

    ``q = cX`` is handled by folding ``c`` into ``R``.  Products
    ``[nR(n-1)T^{-1}]^{j-1}`` are expanded with each ``T^{-1}`` shifting
    every ``n`` to its right.  In the discrete realization the image of ``H``
    adds ``n`` at offset 0 and ``-nR(n-1)`` at offset 1.  ``printed=True``
    instead reproduces the published discrete display literally
    (``+nR(n-1)`` and ``Delta^j S(n-j)``), which disagrees with extraction.
    """
    q = spec.q
    if q.degree != 1:
        raise SpecNotQEqualsG(f"closed form needs q = cX, got q = {q.to_str('X')}")
    if n < 0:
        raise ValueError("n must be >= 0")
    R = spec.R.scale(q.coeff(1))
    S = Poly.x() * R(Poly([-1, 1]))  # S(m) = m R(m-1)
    d = R.degree
    out: dict[int, Fraction] = {}
    literal_discrete = printed and spec.kind is Kind.DISCRETE
    for j in range(1, d + 2):
        off = j - 1
        if off > n:
            break
        prod = Fraction(1)
        for k in range(j - 1):
            prod *= (n - k) * R(n - k - 1)
        arg = n - j if literal_discrete else n - j + 1
        val = Fraction((-1) ** j, factorial(j)) * prod * _delta_pow(S, j, arg)
        out[off] = out.get(off, Fraction(0)) + val
    if spec.kind is Kind.DISCRETE:
        out[0] = out.get(0, Fraction(0)) + n
        if n >= 1:
            sign = 1 if literal_discrete else -1
            out[1] = out.get(1, Fraction(0)) + sign * n * R(n - 1)
    return sorted(out.items())


def closed_form_mismatches(
    spec: FamilySpec, table: RecurrenceTable, printed: bool = False
) -> list[int]:
    """Rows where the closed form disagrees with the extracted table."""
    bad = []
    for n in range(table.N):
        cf = {j: v for j, v in closed_form_qG(spec, n, printed) if v}
        ex = {j: v for j, v in table.row(n).items() if v}
        if cf != ex:
            bad.append(n)
    return bad


__all__ = [
    "DEFAULT_HOLDOUT",
    "RecurrenceTable",
    "RecurrenceForm",
    "extract",
    "reconstruction_failures",
    "fit",
    "expected_max_offset",
    "infer_d",
    "van_iseghem_violations",
    "gamma_degree_bound",
    "recommended_max_n",
    "closed_form_qG",
    "closed_form_mismatches",
]
