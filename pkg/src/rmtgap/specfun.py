"""Double-precision special functions used by seeds, kernels and oracles.

Thin, domain-checked wrappers around :mod:`scipy.special`. Every function accepts scalars
or arrays and returns the same shape.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from .errors import DomainError, PoleError

__all__ = [
    "airy",
    "bessel_j",
    "bessel_j_prime",
    "bessel_product_gap",
    "gamma_fn",
    "gamma_upper",
    "gauss_legendre",
]


def _as_float(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def airy(x):
    """Return ``(Ai(x), Ai'(x))`` for real ``|x| <= 200``."""
    arr, scalar = _as_float(x)
    if np.any(np.isnan(arr)):
        raise DomainError("airy: argument is NaN")
    if np.any(np.abs(arr) > 200.0):
        raise DomainError("airy: |x| must not exceed 200")
    ai, aip, _, _ = special.airy(arr)
    if scalar:
        return float(ai), float(aip)
    return ai, aip


def bessel_j(nu, x):
    """Bessel function of the first kind J_nu(x) for nu > -1, 0 <= x <= 100."""
    nu = float(nu)
    arr, scalar = _as_float(x)
    if not nu > -1.0:
        raise DomainError(f"bessel_j: order {nu} must exceed -1")
    if np.any(np.isnan(arr)) or np.any(arr < 0.0) or np.any(arr > 100.0):
        raise DomainError("bessel_j: argument must lie in [0, 100]")
    out = special.jv(nu, arr)
    return float(out) if scalar else out


def bessel_j_prime(nu, x):
    """Derivative J_nu'(x) = (nu/x) J_nu(x) - J_{nu+1}(x), continuous at x=0."""
    nu = float(nu)
    arr, scalar = _as_float(x)
    if not nu > -1.0:
        raise DomainError(f"bessel_j_prime: order {nu} must exceed -1")
    out = special.jvp(nu, arr, 1)
    return float(out) if scalar else out


def bessel_product_gap(a, x):
    """J_a(x)^2 - J_{a+1}(x) J_{a-1}(x), using J_{a-1} = (2a/x) J_a - J_{a+1}.

    Only orders a and a+1 are evaluated, so a in (-1, 0) is fine. At x=0 the
    limit is 0 for a > 0 and 1 for a = 0.
    """
    a = float(a)
    arr, scalar = _as_float(x)
    ja = special.jv(a, arr)
    ja1 = special.jv(a + 1.0, arr)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = ja * ja + ja1 * ja1 - (2.0 * a / arr) * ja * ja1
    out = np.where(arr == 0.0, 1.0 if a == 0.0 else 0.0, out)
    return float(out) if scalar else out


def gamma_fn(x):
    """Euler Gamma function; raises PoleError at non-positive integers."""
    arr, scalar = _as_float(x)
    if np.any(np.isnan(arr)):
        raise DomainError("gamma_fn: argument is NaN")
    if np.any((arr <= 0.0) & (arr == np.round(arr))):
        raise PoleError("gamma_fn: pole at a non-positive integer")
    out = special.gamma(arr)
    return float(out) if scalar else out


def gamma_upper(a, t):
    """Non-normalised upper incomplete gamma, integral of u^(a-1) e^(-u) over (t, inf)."""
    a = float(a)
    arr, scalar = _as_float(t)
    if not a > 0.0:
        raise DomainError("gamma_upper: a must be positive")
    if np.any(arr < 0.0) or np.any(np.isnan(arr)):
        raise DomainError("gamma_upper: t must be non-negative")
    out = special.gamma(a) * special.gammaincc(a, arr)
    return float(out) if scalar else out


def gauss_legendre(n: int, lo: float, hi: float):
    """Gauss-Legendre nodes and weights on ``[lo, hi]`` (exact to degree 2n-1)."""
    n = int(n)
    if not 2 <= n <= 512:
        raise DomainError("gauss_legendre: need 2 <= n <= 512")
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError("gauss_legendre: need finite lo < hi")
    x, w = special.roots_legendre(n)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w
