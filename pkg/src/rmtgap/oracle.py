"""Independent verification routes for gap probabilities.

Nothing in here touches the sigma-form solvers. The routes are:

* Nystrom discretisations of the sine, Airy and Bessel Fredholm determinants;
* direct integration of the Painleve II (Hastings-McLeod) and hard-edge
  transcendents, with the integral formulas built on them;
* Gram determinants of classical weights in an orthonormal polynomial basis;
* tensor quadrature of the joint eigenvalue density for N <= 4.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special
from scipy.integrate import solve_ivp

from . import specfun
from .errors import (
    BlowUpError,
    ConditioningError,
    DomainError,
    OrderTooLowError,
    ParameterError,
    ResolutionError,
    SingularityError,
)

__all__ = [
    "KernelSpec",
    "TranscendentSolution",
    "Weight",
    "airy_truncation",
    "brute_force_pdf",
    "e2_gram",
    "e2_hard_from_q",
    "e1_hard_from_q",
    "f1_from_q",
    "f2_from_q",
    "fredholm_det",
    "gram_log_derivatives",
    "hard_edge_q",
    "hastings_mcleod",
]


# --------------------------------------------------------------------------
# Fredholm determinants
# --------------------------------------------------------------------------

KERNEL_KINDS = ("sine", "sine_even", "sine_odd", "airy", "bessel")


@dataclass(frozen=True)
class KernelSpec:
    """Kernel plus the interval it acts on; ``hi`` may be ``inf`` for airy."""

    kind: str
    lo: float
    hi: float
    a: float = 0.0

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ParameterError(f"unknown kernel {self.kind!r}")
        if self.hi < self.lo:
            raise ParameterError("kernel interval has hi < lo")
        if math.isinf(self.hi) and self.kind != "airy":
            raise ParameterError("only the airy kernel accepts an infinite endpoint")
        if self.kind == "bessel" and (self.a <= -1.0 or self.lo < 0.0):
            raise ParameterError("bessel kernel needs a > -1 and lo >= 0")
        if self.kind in ("sine_even", "sine_odd") and self.lo != 0.0:
            raise ParameterError("even/odd sine kernels act on (0, hi)")


def airy_truncation(lo: float, threshold: float = 1e-18) -> float:
    """Length L with Ai(lo + L)^2 = threshold, found by bisection."""
    left, right = max(lo, 0.0), max(lo, 0.0) + 1.0
    while specfun.airy(right)[0] ** 2 > threshold:
        right += 1.0
    left = right - 1.0 if right - 1.0 > lo else lo
    for _ in range(80):
        mid = 0.5 * (left + right)
        if specfun.airy(mid)[0] ** 2 > threshold:
            left = mid
        else:
            right = mid
    return right - lo


def _sine(x, y):
    return np.sinc(x[:, None] - y[None, :])


def _airy_kernel(x):
    ai, aip = specfun.airy(x)
    X, Y = np.meshgrid(x, x, indexing="ij")
    num = np.outer(ai, aip) - np.outer(aip, ai)
    with np.errstate(divide="ignore", invalid="ignore"):
        K = num / (X - Y)
    diag = aip * aip - x * ai * ai
    K[np.diag_indices_from(K)] = diag
    return K


def _bessel_power(a: float) -> int:
    """Substitution exponent m in x = s u^m that makes the Nystrom sum smooth."""
    if float(a).is_integer():
        return 1
    if float(2 * a).is_integer():
        return 2
    return 4


def _bessel_kernel_matrix(a: float, s: float, n: int):
    m = _bessel_power(a)
    u, wu = specfun.gauss_legendre(n, 0.0, 1.0)
    x = s * u**m
    wx = wu * m * s * u ** (m - 1)
    r = np.sqrt(x)
    ja = special.jv(a, r)
    # sqrt(x) J_a'(sqrt(x))
    rjp = r * special.jvp(a, r)
    X, Y = np.meshgrid(x, x, indexing="ij")
    num = np.outer(ja, rjp) - np.outer(rjp, ja)
    with np.errstate(divide="ignore", invalid="ignore"):
        K = num / (2.0 * (X - Y))
    K[np.diag_indices_from(K)] = 0.25 * specfun.bessel_product_gap(a, r)
    return K, wx


def _nystrom(kernel: KernelSpec, n: int) -> float:
    if kernel.hi == kernel.lo:
        return 1.0
    if kernel.kind == "bessel":
        K, w = _bessel_kernel_matrix(kernel.a, kernel.hi, n)
        # bessel kernel on (lo, hi) with lo > 0 is not needed by any route
        if kernel.lo != 0.0:
            raise ParameterError("bessel kernel is only implemented on (0, s)")
    else:
        hi = kernel.hi
        if math.isinf(hi):
            hi = kernel.lo + airy_truncation(kernel.lo)
        x, w = specfun.gauss_legendre(n, kernel.lo, hi)
        if kernel.kind == "sine":
            K = _sine(x, x)
        elif kernel.kind == "sine_even":
            K = _sine(x, x) + _sine(x, -x)
        elif kernel.kind == "sine_odd":
            K = _sine(x, x) - _sine(x, -x)
        else:
            K = _airy_kernel(x)
    sw = np.sqrt(w)
    M = np.eye(len(w)) - sw[:, None] * K * sw[None, :]
    return float(np.linalg.det(M))


def fredholm_det(kernel: KernelSpec, order: int = 60, check: bool = True) -> float:
    """Nystrom approximation of det(I - K) on Gauss-Legendre nodes.

    With ``check`` the value is recomputed at twice the order and an
    OrderTooLowError is raised if the two differ by more than 1e-8.
    """
    if not 10 <= order <= 300:
        raise DomainError("fredholm_det: order must lie in [10, 300]")
    value = _nystrom(kernel, order)
    if check:
        refined = _nystrom(kernel, 2 * order)
        if abs(refined - value) > 1e-8:
            raise OrderTooLowError(
                f"{kernel.kind} determinant moved by {abs(refined - value):.2e} under order doubling"
            )
        value = refined
    return value


# --------------------------------------------------------------------------
# Painleve transcendents
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TranscendentSolution:
    grid: np.ndarray
    q: np.ndarray
    q_prime: np.ndarray
    equation_tag: str
    residual_max: float
    # named cumulative integrals evaluated on ``grid``
    integrals: dict = field(default_factory=dict)


def _airy_tail_integrals(t0: float, n: int = 80):
    """Integrals over (t0, inf) of q, q^2 and t q^2 for q = -Ai."""
    x, w = specfun.gauss_legendre(n, t0, t0 + 25.0)
    ai, _ = specfun.airy(x)
    q = -ai
    return float(w @ q), float(w @ (q * q)), float(w @ (x * q * q))


def hastings_mcleod(grid, rtol: float = 1e-13) -> TranscendentSolution:
    """Integrate q'' = t q + 2 q^3 downward from q ~ -Ai at the largest grid point.

    The cumulative integrals over (t, inf) of q, q^2 and t q^2 are returned in
    ``integrals`` under the keys ``"q"``, ``"q2"`` and ``"tq2"``.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise DomainError("hastings_mcleod: grid needs at least two points")
    if np.any(np.diff(grid) >= 0):
        raise DomainError("hastings_mcleod: grid must be strictly decreasing")
    t0 = grid[0]
    if t0 < 8.0 or t0 > 12.0 or grid[-1] < -8.0:
        raise DomainError("hastings_mcleod: grid must lie in [-8, 12] and start at >= 8")
    ai, aip = specfun.airy(t0)
    tail_q, tail_q2, tail_tq2 = _airy_tail_integrals(t0)

    def rhs(t, y):
        q, qp = y[0], y[1]
        return [qp, t * q + 2.0 * q**3, -q, -q * q, -t * q * q]

    def blow(t, y):
        return 1e8 - abs(y[0])

    blow.terminal = True
    sol = solve_ivp(
        rhs,
        (t0, grid[-1]),
        [-ai, -aip, tail_q, tail_q2, tail_tq2],
        method="DOP853",
        t_eval=grid,
        rtol=rtol,
        atol=1e-30,
        events=blow,
    )
    if sol.status != 0 or sol.t.size != grid.size:
        raise BlowUpError("Hastings-McLeod trajectory left |q| < 1e8")
    q, qp = sol.y[0], sol.y[1]
    # self-consistency against a run at looser tolerance
    loose = solve_ivp(
        rhs, (t0, grid[-1]), [-ai, -aip, tail_q, tail_q2, tail_tq2],
        method="DOP853", t_eval=grid, rtol=rtol * 100.0, atol=1e-30,
    )
    resid = float(np.max(np.abs(loose.y[0] - q) / np.maximum(np.abs(q), 1e-300)))
    return TranscendentSolution(
        grid=grid,
        q=q,
        q_prime=qp,
        equation_tag="p2_hastings_mcleod",
        residual_max=resid,
        integrals={"q": sol.y[2], "q2": sol.y[3], "tq2": sol.y[4]},
    )


def f2_from_q(sol: TranscendentSolution) -> np.ndarray:
    """F2(s) = exp(-int_s^inf (t - s) q^2 dt) on the solution grid."""
    s = sol.grid
    return np.exp(-(sol.integrals["tq2"] - s * sol.integrals["q2"]))


def f1_from_q(sol: TranscendentSolution) -> np.ndarray:
    """F1(s) = exp(-1/2 int (t-s) q^2) exp(1/2 int q), both over (s, inf)."""
    s = sol.grid
    return np.exp(-0.5 * (sol.integrals["tq2"] - s * sol.integrals["q2"]) + 0.5 * sol.integrals["q"])


def _hard_seed_t(a: float) -> float:
    return min(1e-8, 10.0 ** (-13.0 / (a + 1.0)))


def hard_edge_q(a: float, grid, rtol: float = 1e-13) -> TranscendentSolution:
    """Solve t(q^2-1)(t q')' = q(t q')^2 + (t-a^2) q/4 + t q^3 (q^2-2)/4, q ~ J_a(sqrt t).

    Integration runs in u = log t from a seed abscissa far below ``grid[0]``.
    ``integrals`` holds, on the grid, the integrals over (0, t) of q^2
    (``"q2"``), q/sqrt(t) (``"q_sqrt"``) and log(t) q^2 (``"logt_q2"``).

    For a = 0 the equation admits q = 1 identically, which is the solution
    selected by q ~ J_0(sqrt t); it is returned in closed form because the
    leading coefficient t(q^2-1) vanishes along it.
    """
    a = float(a)
    if a <= -1.0:
        raise DomainError("hard_edge_q: a must exceed -1")
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0) or grid[0] <= 0:
        raise DomainError("hard_edge_q: grid must be positive and strictly increasing")
    if grid[0] > 1e-4:
        raise DomainError("hard_edge_q: grid must start at t0 <= 1e-4")

    if a == 0.0:
        one = np.ones_like(grid)
        return TranscendentSolution(
            grid=grid,
            q=one,
            q_prime=np.zeros_like(grid),
            equation_tag="hard_edge_q",
            residual_max=0.0,
            integrals={
                "q2": grid.copy(),
                "q_sqrt": 2.0 * np.sqrt(grid),
                "logt_q2": grid * np.log(grid) - grid,
            },
        )

    t_seed = min(_hard_seed_t(a), grid[0])
    r0 = math.sqrt(t_seed)
    q0 = special.jv(a, r0)
    # w = t dq/dt
    w0 = 0.5 * r0 * special.jvp(a, r0)
    heads = [
        q0 * q0 * t_seed / (a + 1.0),
        2.0 * q0 * r0 / (a + 1.0),
        q0 * q0 * t_seed * (math.log(t_seed) / (a + 1.0) - 1.0 / (a + 1.0) ** 2),
    ]

    def rhs(u, y):
        q, w = y[0], y[1]
        t = math.exp(u)
        den = q * q - 1.0
        if abs(den) < 1e-12:
            raise SingularityError("hard_edge_q: coefficient q^2 - 1 vanished")
        dw = q * (w * w - 0.25 * a * a + 0.25 * t * den * den) / den
        return [w, dw, t * q * q, math.sqrt(t) * q, u * t * q * q]

    u_grid = np.log(grid)
    sol = solve_ivp(
        rhs,
        (math.log(t_seed), u_grid[-1]),
        [q0, w0, *heads],
        method="DOP853",
        t_eval=u_grid if t_seed < grid[0] else None,
        dense_output=t_seed >= grid[0],
        rtol=rtol,
        atol=1e-30,
    )
    if sol.status != 0:
        raise BlowUpError(f"hard_edge_q: integration failed ({sol.message})")
    Y = sol.y if t_seed < grid[0] else sol.sol(u_grid)
    q, w = Y[0], Y[1]
    qp = w / grid
    dw = np.array([rhs(u, y)[1] for u, y in zip(u_grid, Y.T)])
    # residual of the original equation with (t q')' = dw/dt = dw/du / t
    lhs = grid * (q * q - 1.0) * dw / grid
    rhs_val = q * w * w + 0.25 * (grid - a * a) * q + 0.25 * grid * q**3 * (q * q - 2.0)
    scale = np.maximum(np.abs(lhs), np.abs(rhs_val)) + 1e-300
    return TranscendentSolution(
        grid=grid,
        q=q,
        q_prime=qp,
        equation_tag="hard_edge_q",
        residual_max=float(np.max(np.abs(lhs - rhs_val) / scale)),
        integrals={"q2": Y[2], "q_sqrt": Y[3], "logt_q2": Y[4]},
    )


def e2_hard_from_q(sol: TranscendentSolution) -> np.ndarray:
    """exp(-1/4 int_0^s log(s/t) q^2 dt) on the grid."""
    s = sol.grid
    log_int = np.log(s) * sol.integrals["q2"] - sol.integrals["logt_q2"]
    return np.exp(-0.25 * log_int)


def e1_hard_from_q(sol: TranscendentSolution) -> np.ndarray:
    """The product formula for E1 at the hard edge, weight exponent (a-1)/2."""
    s = sol.grid
    log_int = np.log(s) * sol.integrals["q2"] - sol.integrals["logt_q2"]
    return np.exp(-0.125 * log_int - 0.25 * sol.integrals["q_sqrt"])


# --------------------------------------------------------------------------
# Gram determinants
# --------------------------------------------------------------------------


def _jacobi_norms(n: int, al: float, be: float) -> np.ndarray:
    k = np.arange(n, dtype=float)
    out = np.empty(n)
    out[0] = (al + be + 1.0) * math.log(2.0) + special.gammaln(al + 1) + special.gammaln(be + 1) - special.gammaln(al + be + 2)
    if n > 1:
        kk = k[1:]
        out[1:] = (
            (al + be + 1.0) * math.log(2.0)
            - np.log(2 * kk + al + be + 1)
            + special.gammaln(kk + al + 1)
            + special.gammaln(kk + be + 1)
            - special.gammaln(kk + al + be + 1)
            - special.gammaln(kk + 1)
        )
    return np.exp(0.5 * out)


def _jacobi_basis(n: int, al: float, be: float, x, deriv: int = 0):
    """Orthonormal Jacobi polynomials (rows) and optionally their x-derivatives."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    norms = _jacobi_norms(n, al, be)
    P = np.array([special.eval_jacobi(k, al, be, x) for k in range(n)]) / norms[:, None]
    out = [P]
    for d in range(1, deriv + 1):
        D = np.zeros_like(P)
        for k in range(d, n):
            coef = np.prod([0.5 * (k + al + be + 1 + j) for j in range(d)])
            D[k] = coef * special.eval_jacobi(k - d, al + d, be + d, x)
        out.append(D / norms[:, None])
    return out if deriv else P


def _laguerre_basis(n: int, a: float, x):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    k = np.arange(n)
    norms = np.exp(0.5 * (special.gammaln(k + a + 1) - special.gammaln(k + 1)))
    return np.array([special.eval_genlaguerre(j, a, x) for j in range(n)]) / norms[:, None]


def _endpoint_rule(n: int, lo: float, hi: float, exponent: float, at: str):
    """Nodes/weights on [lo, hi] absorbing |x - endpoint|^exponent."""
    v, wv = special.roots_jacobi(n, 0.0, exponent)  # weight (1+v)^exponent
    half = 0.5 * (hi - lo)
    if at == "lo":
        x = lo + half * (1.0 + v)
    else:
        x = hi - half * (1.0 + v)
    return x, wv * half ** (exponent + 1.0)


def _excluded_matrix(weight: tuple, N: int, lo: float, hi: float, n: int) -> np.ndarray:
    kind = weight[0]
    if kind == "jacobi":
        _, al, be = weight
        mid = 0.5 * (lo + hi)
        xs, ws = [], []
        for (l, h, end) in ((lo, mid, "lo"), (mid, hi, "hi")):
            if end == "lo" and l == -1.0:
                x, w = _endpoint_rule(n, l, h, be, "lo")
                w = w * (1.0 - x) ** al
            elif end == "hi" and h == 1.0:
                x, w = _endpoint_rule(n, l, h, al, "hi")
                w = w * (1.0 + x) ** be
            else:
                x, w = specfun.gauss_legendre(n, l, h)
                w = w * (1.0 - x) ** al * (1.0 + x) ** be
            xs.append(x)
            ws.append(w)
        x, w = np.concatenate(xs), np.concatenate(ws)
        P = _jacobi_basis(N, al, be, x)
    elif kind == "laguerre":
        _, al = weight
        if math.isinf(hi):
            y, wy = special.roots_genlaguerre(n, 0.0)
            xs = [lo + y]
            wts = [wy * math.exp(-lo) * (lo + y) ** al]
            if lo == 0.0:
                y, wy = special.roots_genlaguerre(n, al)
                xs, wts = [y], [wy]
            x, w = np.concatenate(xs), np.concatenate(wts)
        elif lo == 0.0:
            x, w = _endpoint_rule(n, lo, hi, al, "lo")
            w = w * np.exp(-x)
        else:
            x, w = specfun.gauss_legendre(n, lo, hi)
            w = w * x**al * np.exp(-x)
        P = _laguerre_basis(N, al, x)
    else:
        raise ParameterError(f"unknown Gram weight {kind!r}")
    return (P * w) @ P.T


def _check_gram_args(weight, N, excluded):
    if not 1 <= N <= 30:
        raise DomainError("e2_gram: need 1 <= N <= 30")
    kind = weight[0]
    if kind == "jacobi":
        if weight[1] <= -1 or weight[2] <= -1:
            raise ParameterError("jacobi weight needs a, b > -1")
        support = (-1.0, 1.0)
    elif kind == "laguerre":
        if weight[1] <= -1:
            raise ParameterError("laguerre weight needs a > -1")
        support = (0.0, math.inf)
    else:
        raise ParameterError(f"unknown Gram weight {kind!r}")
    if excluded is None:
        return None
    lo, hi = map(float, excluded)
    if lo < support[0] or hi > support[1] or hi < lo:
        raise DomainError("excluded interval must lie inside the support")
    return lo, hi


def e2_gram(weight: tuple, N: int, excluded, nodes: int | None = None) -> float:
    """E_2(0; excluded; w; N) as det[I - A], A_jk = int_excluded p_j p_k w.

    ``weight`` is ``("laguerre", a)`` for x^a e^{-x} or ``("jacobi", a, b)``
    for (1-x)^a (1+x)^b. The p_j are orthonormal for w, so the moment matrix
    over the full support is the identity and only the excluded part is
    integrated (endpoint singularities are absorbed by Gauss-Jacobi rules).
    Self-convergence under node doubling is enforced at 1e-11 absolute.
    """
    ex = _check_gram_args(weight, N, excluded)
    if ex is None or ex[0] == ex[1]:
        return 1.0
    n = nodes or (2 * N + 40)
    vals = []
    for m in (n, 2 * n):
        A = _excluded_matrix(weight, N, ex[0], ex[1], m)
        sign, logdet = np.linalg.slogdet(np.eye(N) - A)
        if not np.isfinite(logdet):
            raise ConditioningError("e2_gram: determinant is not finite")
        vals.append(sign * math.exp(logdet))
    if abs(vals[1] - vals[0]) > 1e-11:
        raise OrderTooLowError("e2_gram: quadrature not self-converged")
    return vals[1]


def gram_log_derivatives(a: float, b: float, N: int, t: float, nodes: int | None = None):
    """log E and its first three t-derivatives for E = E_2(0;(-1,-1+2t);(1-x)^a(1+x)^b;N).

    Uses dA/dt = 2 w(x0) v v^T with v = p(x0), x0 = -1 + 2t, and the trace
    identities for derivatives of log det(I - A).
    """
    if not 0.0 < t < 1.0:
        raise DomainError("gram_log_derivatives: need 0 < t < 1")
    _check_gram_args(("jacobi", a, b), N, (-1.0, -1.0 + 2.0 * t))
    x0 = -1.0 + 2.0 * t
    n = nodes or (2 * N + 40)
    A = _excluded_matrix(("jacobi", a, b), N, -1.0, x0, n)
    I = np.eye(N)
    sign, logdet = np.linalg.slogdet(I - A)
    if sign <= 0:
        raise ConditioningError("gram_log_derivatives: I - A is not positive definite")
    G = np.linalg.inv(I - A)
    P, dP, d2P = (arr[:, 0] for arr in _jacobi_basis(N, a, b, [x0], deriv=2))
    w = (1.0 - x0) ** a * (1.0 + x0) ** b
    g1 = -a / (1.0 - x0) + b / (1.0 + x0)
    g1p = -a / (1.0 - x0) ** 2 - b / (1.0 + x0) ** 2
    w1 = w * g1
    w2 = w * (g1 * g1 + g1p)
    vv = np.outer(P, P)
    dvv = np.outer(dP, P) + np.outer(P, dP)
    d2vv = np.outer(d2P, P) + 2.0 * np.outer(dP, dP) + np.outer(P, d2P)
    A1 = 2.0 * w * vv
    A2 = 4.0 * (w1 * vv + w * dvv)
    A3 = 8.0 * (w2 * vv + 2.0 * w1 * dvv + w * d2vv)
    GA1 = G @ A1
    L1 = -np.trace(GA1)
    L2 = -np.trace(G @ A2) - np.trace(GA1 @ GA1)
    L3 = -np.trace(G @ A3) - 3.0 * np.trace(GA1 @ G @ A2) - 2.0 * np.trace(GA1 @ GA1 @ GA1)
    return float(logdet), float(L1), float(L2), float(L3)


# --------------------------------------------------------------------------
# Brute-force quadrature of the joint eigenvalue density
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Weight:
    """Weight g(x) of the joint density with its support.

    ``left``/``right`` are the exponents of algebraic endpoint factors, used
    to pick Gauss-Jacobi rules at finite support endpoints.
    """

    name: str
    g: Callable
    lo: float
    hi: float
    left: float = 0.0
    right: float = 0.0
    circular: bool = False

    @classmethod
    def gaussian(cls, c: float = 0.5) -> "Weight":
        """g(x) = exp(-c x^2)."""
        L = math.sqrt(48.0 / c)
        return cls(f"gaussian({c})", lambda x: np.exp(-c * x * x), -L, L)

    @classmethod
    def laguerre(cls, a: float, c: float = 1.0) -> "Weight":
        """g(x) = x^a exp(-c x) on (0, inf), truncated where e^{-cx} < 1e-21."""
        L = (48.0 + 2.0 * max(a, 0.0) * math.log(48.0)) / c
        return cls(f"laguerre({a},{c})", lambda x: np.exp(-c * x), 0.0, L, left=a)

    @classmethod
    def jacobi(cls, a: float, b: float) -> "Weight":
        """g(x) = (1-x)^a (1+x)^b on (-1, 1); endpoint factors go to the rules."""
        return cls(f"jacobi({a},{b})", lambda x: np.ones_like(x), -1.0, 1.0, left=b, right=a)

    @classmethod
    def circle(cls) -> "Weight":
        """Uniform weight on angles (-pi, pi] with chordal distances."""
        return cls("circular", lambda x: np.ones_like(x), -math.pi, math.pi, circular=True)

    @classmethod
    def cauchy_on_circle(cls, alpha: float, beta: int, N: int) -> "Weight":
        """(1+x^2)^(-(alpha+1)/2) moved to angles by x = tan(theta/2).

        With chordal distances the weight becomes cos(theta/2)^(alpha-1-beta(N-1)),
        so the interval (-s, s) maps to the arc (-2 arctan s, 2 arctan s).
        """
        e = alpha - 1.0 - beta * (N - 1)
        return cls(
            f"cauchy({alpha})", lambda x: np.abs(np.cos(0.5 * x)) ** e, -math.pi, math.pi, circular=True
        )


def _pieces(weight: Weight, excluded):
    lo, hi = weight.lo, weight.hi
    if excluded is None or excluded[0] >= excluded[1]:
        return [(lo, hi)]
    el, eh = map(float, excluded)
    if weight.circular:
        # complement of the arc (el, eh) is one arc; split it at pi, where
        # weights carried over from the line (x = infinity) may have a kink
        lo_c, hi_c = eh, el + 2.0 * math.pi
        if lo_c < math.pi < hi_c:
            return [(lo_c, math.pi), (math.pi, hi_c)]
        return [(lo_c, hi_c)]
    out = []
    if el > lo:
        out.append((lo, min(el, hi)))
    if eh < hi:
        out.append((max(eh, lo), hi))
    return out


def _simplex_rule(k: int, lo: float, hi: float, m: int, weight: Weight):
    """Tensor rule over lo < x_1 < ... < x_k < hi.

    Returned weights include the algebraic endpoint factors
    (x - weight.lo)^left (weight.hi - x)^right of every point. Where the block
    touches a support endpoint the singular part is absorbed into
    Gauss-Jacobi rules in the simplex coordinates.
    """
    circ = weight.circular
    at_left = (not circ) and lo == weight.lo and weight.left != 0.0
    at_right = (not circ) and hi == weight.hi and weight.right != 0.0
    grids, wts = [], []
    for j in range(k):
        eL = weight.left if (j == 0 and at_left) else 0.0
        eR = weight.right if at_right else 0.0
        v, w = special.roots_jacobi(m, eR, eL)
        grids.append(0.5 * (v + 1.0))
        wts.append(w / 2.0 ** (1.0 + eL + eR))
    U = [g.ravel() for g in np.meshgrid(*grids, indexing="ij")]
    W = np.prod([g.ravel() for g in np.meshgrid(*wts, indexing="ij")], axis=0)
    X = []
    prev = np.full_like(U[0], lo)
    for j in range(k):
        span = hi - prev
        x = prev + span * U[j]
        W = W * span
        if j == 0 and at_left:
            W = W * span**weight.left
        elif weight.left != 0.0 and not circ:
            W = W * (x - weight.lo) ** weight.left
        if at_right:
            W = W * span**weight.right
        elif weight.right != 0.0 and not circ:
            W = W * (weight.hi - x) ** weight.right
        X.append(x)
        prev = x
    return np.array(X), W


def _density_integral(beta: int, weight: Weight, N: int, pieces, m: int) -> float:
    total = 0.0
    for counts in itertools.product(range(N + 1), repeat=len(pieces)):
        if sum(counts) != N:
            continue
        X = np.zeros((0, 1))
        W = np.ones(1)
        for c, (lo, hi) in zip(counts, pieces):
            if c == 0:
                continue
            Xb, Wb = _simplex_rule(c, lo, hi, m, weight)
            nA, nB = W.size, Wb.size
            X = np.concatenate([np.repeat(X, nB, axis=1), np.tile(Xb, (1, nA))], axis=0)
            W = np.repeat(W, nB) * np.tile(Wb, nA)
        vals = W
        for j in range(N):
            vals = vals * weight.g(X[j])
            for k in range(j + 1, N):
                if weight.circular:
                    d = np.abs(2.0 * np.sin(0.5 * (X[k] - X[j])))
                else:
                    d = np.abs(X[k] - X[j])
                vals = vals * d**beta
        total += float(vals.sum())
    return total


def brute_force_pdf(
    beta: int,
    weight: Weight,
    N: int,
    excluded,
    nodes_per_dim: int = 40,
    check: bool = True,
    tol: float = 1e-6,
) -> float:
    """Ratio of tensor-quadrature integrals of the joint eigenvalue density.

    The numerator integrates over (support minus ``excluded``)^N, the
    denominator over the full support; ordered-simplex coordinates keep the
    integrand smooth across coincident eigenvalues. For the circle the
    ``excluded`` interval is an arc of angles. The check reruns with 1.5x
    the nodes per dimension.
    """
    if beta not in (1, 2, 4):
        raise DomainError("brute_force_pdf: beta must be 1, 2 or 4")
    if not 1 <= N <= 4:
        raise DomainError("brute_force_pdf: need 1 <= N <= 4")
    if excluded is None or excluded[0] >= excluded[1]:
        return 1.0

    def ratio(m):
        num = _density_integral(beta, weight, N, _pieces(weight, excluded), m)
        den = _density_integral(beta, weight, N, [(weight.lo, weight.hi)], m)
        return num / den

    value = ratio(nodes_per_dim)
    if check:
        refined = ratio(nodes_per_dim + nodes_per_dim // 2)
        if abs(refined - value) > tol:
            raise ResolutionError(
                f"brute_force_pdf moved by {abs(refined - value):.2e} under node refinement"
            )
        value = refined
    return value
