"""Classical polynomials from their terminating hypergeometric sums.

These are written down directly from the standard series (no operators),
so they serve as an independent reference for generated families.  Every
function returns the monic normalization unless ``monic=False``.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .exact import Poly, as_rational


def rising(a, k: int) -> Fraction:
    """Pochhammer symbol ``(a)_k = a (a+1) ... (a+k-1)``."""
    out = Fraction(1)
    a = as_rational(a)
    for i in range(k):
        out *= a + i
    return out


def _neg_x_rising(k: int) -> Poly:
    # (-x)(-x+1)...(-x+k-1) = (-1)^k (x)_k
    return Poly.falling_factorial(k).scale((-1) ** k)


def _finish(p: Poly, monic: bool) -> Poly:
    return p / p.lead if monic else p


def hermite(n: int, monic: bool = True) -> Poly:
    """Probabilists' Hermite ``He_n``."""
    out = Poly()
    for k in range(n // 2 + 1):
        c = Fraction((-1) ** k * factorial(n), factorial(k) * factorial(n - 2 * k) * 2**k)
        out = out + Poly.monomial(n - 2 * k, c)
    return _finish(out, monic)


def laguerre(n: int, alpha, monic: bool = True) -> Poly:
    """``L_n^(alpha)(x) = sum_k (-1)^k binom(n+alpha, n-k) x^k / k!``."""
    alpha = as_rational(alpha)
    out = Poly()
    for k in range(n + 1):
        binom = rising(alpha + k + 1, n - k) / factorial(n - k)
        out = out + Poly.monomial(k, (-1) ** k * binom / factorial(k))
    return _finish(out, monic)


def charlier(n: int, a, monic: bool = True) -> Poly:
    """``C_n(x; a) = 2F0(-n, -x; ; -1/a)``."""
    a = as_rational(a)
    out = Poly()
    for k in range(n + 1):
        c = rising(-n, k) * (-1 / a) ** k / factorial(k)
        out = out + _neg_x_rising(k).scale(c)
    return _finish(out, monic)


def meixner(n: int, beta, c, monic: bool = True) -> Poly:
    """``M_n(x; beta, c) = 2F1(-n, -x; beta; 1 - 1/c)``."""
    beta, c = as_rational(beta), as_rational(c)
    z = 1 - 1 / c
    out = Poly()
    for k in range(n + 1):
        coef = rising(-n, k) * z**k / (rising(beta, k) * factorial(k))
        out = out + _neg_x_rising(k).scale(coef)
    return _finish(out, monic)


def kravchuk(n: int, p, N: int, monic: bool = True) -> Poly:
    """``K_n(x; p, N) = 2F1(-n, -x; -N; 1/p)`` for ``n <= N``."""
    if not 0 <= n <= N:
        raise ValueError("Kravchuk polynomials need 0 <= n <= N")
    p = as_rational(p)
    out = Poly()
    for k in range(n + 1):
        coef = rising(-n, k) * (1 / p) ** k / (rising(-N, k) * factorial(k))
        out = out + _neg_x_rising(k).scale(coef)
    return _finish(out, monic)


def rescale(p: Poly, lam) -> Poly:
    """``p(lam * x)``."""
    lam = as_rational(lam)
    return Poly([c * lam**k for k, c in enumerate(p.coeffs)])


__all__ = ["rising", "hermite", "laguerre", "charlier", "meixner", "kravchuk", "rescale"]
