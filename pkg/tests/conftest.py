from fractions import Fraction

import pytest
import sympy
from hypothesis import strategies as st

from bochner_vop.exact import Poly

ACCEPTANCE_LINES: list[str] = []


def small_rationals(bound: int = 9, nonzero: bool = False):
    nums = st.integers(-bound, bound)
    if nonzero:
        nums = nums.filter(bool)
    return st.builds(Fraction, nums, st.integers(1, bound))


def polys(max_degree: int = 6, bound: int = 9):
    return st.lists(small_rationals(bound), max_size=max_degree + 1).map(Poly)


def polys_of_degree(degree: int, bound: int = 9):
    """Polynomials of exactly ``degree`` with a nonzero leading coefficient."""
    body = st.lists(small_rationals(bound), min_size=degree, max_size=degree)
    return st.tuples(body, small_rationals(bound, nonzero=True)).map(lambda t: Poly(t[0] + [t[1]]))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def x():
    return Poly.x()


# ---------------------------------------------------------------------------
# sympy reference for exp(q(G)) psi_n, independent of the operator algebra

SX = sympy.Symbol("x")


def _sympy_H(kind: str, f):
    if kind == "continuous":
        return SX * sympy.diff(f, SX)
    return -SX * (f.subs(SX, SX - 1) - f)


def _sympy_Z(kind: str, f):
    if kind == "continuous":
        return sympy.diff(f, SX)
    return f.subs(SX, SX + 1) - f


def sympy_G(kind: str, R, f):
    """``R(H) Z f`` with ``R`` a list of rational coefficients."""
    z = sympy.expand(_sympy_Z(kind, f))
    out, power = sympy.Integer(0), z
    for c in R:
        out += sympy.Rational(c) * power
        power = sympy.expand(_sympy_H(kind, power))
    return sympy.expand(out)


def sympy_family(kind: str, R, q, N: int, basis=None):
    """``[exp(q(G)) psi_n for n <= N]`` as expanded sympy expressions.

    ``basis(n)`` overrides ``psi_n`` (default ``x^n`` or ``(x)_n``).
    """
    if basis is None:
        basis = (lambda n: SX**n) if kind == "continuous" else (lambda n: sympy.ff(SX, n))
    out = []
    for n in range(N + 1):
        f = sympy.expand(basis(n))

        def qG(g):
            acc, power = sympy.Integer(0), g
            for c in q[1:]:
                power = sympy_G(kind, R, power)
                acc += sympy.Rational(c) * power
            return sympy.expand(acc)

        total, term, k = f, f, 0
        while term != 0:
            k += 1
            term = sympy.expand(qG(term) / k)
            total += term
        out.append(sympy.expand(total))
    return out


def sympy_to_poly(expr) -> Poly:
    sp = sympy.Poly(sympy.expand(expr), SX)
    if sp.is_zero:
        return Poly()
    return Poly(Fraction(int(c.p), int(c.q)) for c in reversed(sp.all_coeffs()))
