"""Gap probabilities E_1, E_2, E_4 assembled from sigma-form tau-functions.

Every probability is built from one or two tau-functions of a single
sigma-form family: the orthogonal case is one tau-function, the unitary
case the product of two, and the symplectic case their mean. Solved
trajectories are memoised per route and tolerance, so tabulating a grid
costs one integration per route.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass

import numpy as np

from . import sigma_ode
from .errors import CoverageError, DomainError, ParameterError
from .sigma_ode import DEFAULT_TOL, Family, FiniteLaguerre, HardEdge, SigmaSolution

__all__ = [
    "GapQuery",
    "GapResult",
    "Regime",
    "clear_cache",
    "e_bulk",
    "e_circular",
    "e_finite",
    "e_hard",
    "e_soft",
    "evaluate",
    "tau_integral",
]

BULK_S_MAX = 3.0
SOFT_S_RANGE = (-8.0, 10.0)
JACOBI_T_MAX = 1.0 - 1e-6
# looser rerun used for the error estimate
ESTIMATE_FACTOR = 100.0


class Regime(str, enum.Enum):
    BULK = "bulk"
    SOFT = "soft"
    HARD = "hard"
    FINITE_GAUSSIAN = "finite_gaussian"
    FINITE_JACOBI_SYMMETRIC = "finite_jacobi_symmetric"
    FINITE_CAUCHY = "finite_cauchy"
    FINITE_LAGUERRE_E2 = "finite_laguerre_e2"
    FINITE_JACOBI_E2 = "finite_jacobi_e2"
    CIRCULAR = "circular"


FINITE_REGIMES = (
    Regime.FINITE_GAUSSIAN,
    Regime.FINITE_JACOBI_SYMMETRIC,
    Regime.FINITE_CAUCHY,
    Regime.FINITE_LAGUERRE_E2,
    Regime.FINITE_JACOBI_E2,
)


@dataclass(frozen=True)
class GapQuery:
    """One gap-probability request.

    ``s`` is the half-width for bulk and the symmetric finite cases, the
    left endpoint of (s, inf) at the soft edge, the right endpoint of (0, s)
    at the hard edge and for Laguerre, the fraction t of (-1, -1 + 2t) for
    Jacobi E_2, and the half-angle phi for the circular ensembles.
    """

    regime: Regime
    beta: int
    s: float
    a: float = 0.0
    b: float = 0.0
    alpha: float = 0.0
    N: int = 0

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime(self.regime))
        if self.beta not in (1, 2, 4):
            raise ParameterError(f"beta must be 1, 2 or 4, got {self.beta}")
        s = float(self.s)
        if not math.isfinite(s):
            raise DomainError("s must be finite")
        object.__setattr__(self, "s", s)
        if self.regime is not Regime.SOFT and s < 0.0:
            raise DomainError("s must be non-negative")
        if self.regime is Regime.HARD and not self.a > -1.0:
            raise ParameterError("hard edge requires a > -1")
        if self.regime in FINITE_REGIMES or self.regime is Regime.CIRCULAR:
            if int(self.N) != self.N or self.N < 1:
                raise ParameterError("finite ensembles need an integer N >= 1")
            object.__setattr__(self, "N", int(self.N))
        if self.regime in (Regime.FINITE_GAUSSIAN, Regime.FINITE_JACOBI_SYMMETRIC, Regime.FINITE_CAUCHY):
            if self.beta != 1:
                raise ParameterError(f"{self.regime.value} is available for beta = 1 only")
            if self.N % 2:
                raise ParameterError(f"{self.regime.value} requires N even")
        if self.regime in (Regime.FINITE_LAGUERRE_E2, Regime.FINITE_JACOBI_E2) and self.beta != 2:
            raise ParameterError(f"{self.regime.value} is available for beta = 2 only")


@dataclass(frozen=True)
class GapResult:
    probability: float
    log_probability: float
    method: str
    quadrature_error_estimate: float


# --------------------------------------------------------------------------
# Routes: one tau-function each
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class _Route:
    """A tau-function: family, boundary condition and the sign of log tau.

    kind is one of "iiiprime" (a), "laguerre" (N, a), "hard" (a, branch),
    "soft" (branch, alpha) and "jacobi" (a, b, N).
    """

    kind: str
    args: tuple

    @property
    def sign(self) -> float:
        return -1.0 if self.kind in ("iiiprime", "soft") else 1.0

    @property
    def increasing(self) -> bool:
        return self.kind != "soft"

    def seed(self, t0=None):
        k, p = self.kind, self.args
        if k == "iiiprime":
            return sigma_ode.seed_sigma_iiiprime(p[0], t0)
        if k == "laguerre":
            return sigma_ode.seed_sigma_v(FiniteLaguerre(p[0], p[1]), t0)
        if k == "hard":
            return sigma_ode.seed_sigma_v(HardEdge(p[0], p[1]), t0)
        if k == "soft":
            return sigma_ode.seed_sigma_ii(p[0], alpha=p[1])
        return sigma_ode.seed_sigma_vi((p[0], p[1]), p[2], 1e-3 if t0 is None else t0)

    def small_log_tau(self, t: float) -> float:
        """log tau below the seed abscissa, from the seed series itself."""
        if self.kind == "jacobi":
            from .oracle import gram_log_derivatives

            a, b, N = self.args
            if t < _GRAM_T_MIN:
                # -1 + 2t loses t to rounding; log E ~ -c t^(b+1) at the edge
                return gram_log_derivatives(a, b, N, _GRAM_T_MIN)[0] * (t / _GRAM_T_MIN) ** (b + 1.0)
            return gram_log_derivatives(a, b, N, t)[0]
        if self.kind in ("iiiprime", "laguerre") and t < _HEAD_T_MIN:
            # a seed built this close to 0 overflows; log tau ~ t^(a+1)
            # with corrections in integer powers of t
            p = self.args[0] if self.kind == "iiiprime" else self.args[1]
            return self.sign * self.seed(_HEAD_T_MIN).head * (t / _HEAD_T_MIN) ** (p + 1.0)
        return self.sign * self.seed(t).head

    @property
    def tag(self) -> str:
        return f"{self.kind}({','.join(f'{x:g}' if not isinstance(x, str) else x for x in self.args)})"


_JACOBI_T0 = (1e-3, 1e-4, 1e-5, 1e-6)
_GRAM_T_MIN = 1e-9
_HEAD_T_MIN = 1e-30


def _jacobi_t0(t_min: float) -> float:
    for t0 in _JACOBI_T0:
        if t0 <= t_min:
            return t0
    return _JACOBI_T0[-1]


class _Memo:
    """Solved trajectories keyed by (route, tol, t0).

    A lock guards both lookup and insertion; a stored solution is reused
    whenever its span covers the request, and otherwise replaced by one
    reaching at least twice as far.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._store: dict = {}

    def clear(self):
        with self._lock:
            self._store.clear()

    def get(self, key, reach: float):
        with self._lock:
            sol = self._store.get(key)
        if sol is not None and _covers(sol, reach):
            return sol, None
        old = None if sol is None else sol.span[1]
        return None, old

    def put(self, key, sol: SigmaSolution):
        with self._lock:
            cur = self._store.get(key)
            if cur is None or _covers(sol, cur.span[1]):
                self._store[key] = sol


def _covers(sol: SigmaSolution, reach: float) -> bool:
    lo, hi = sol.span
    if hi >= lo:
        return reach <= hi
    return reach >= hi


_MEMO = _Memo()


def clear_cache() -> None:
    """Drop all memoised trajectories."""
    _MEMO.clear()


def _solution(route: _Route, reach: float, tol: float, t0=None) -> SigmaSolution:
    key = (route, float(tol), t0)
    sol, old = _MEMO.get(key, reach)
    if sol is not None:
        return sol
    seed = route.seed(t0)
    if not route.increasing:
        # the soft-edge range is short; cover all of it at once
        end = SOFT_S_RANGE[0]
    else:
        end = reach if old is None else max(reach, 2.0 * old)
        end = max(end, 2.0 * seed.t0)
        if route.kind == "jacobi":
            # t = 1 is a fixed singular point of sigma-VI
            end = max(reach, min(end, 0.5 * (1.0 + reach)))
    sol = sigma_ode.integrate(seed.family, seed, np.array([seed.t0, end]), tol=tol)
    _MEMO.put(key, sol)
    return sol


def _log_tau(route: _Route, targets, tol: float):
    """log tau and an absolute error estimate at each target."""
    targets = np.atleast_1d(np.asarray(targets, dtype=float))
    out = np.zeros_like(targets)
    err = np.zeros_like(targets)
    if route.increasing:
        pos = targets[targets > 0.0]
        if pos.size == 0:
            return out, err
        t0 = _jacobi_t0(float(pos.min())) if route.kind == "jacobi" else None
        seed_t0 = route.seed(t0).t0
        big = targets > seed_t0
        for i in np.flatnonzero((targets > 0.0) & ~big):
            out[i] = route.small_log_tau(float(targets[i]))
        if np.any(big):
            reach = float(targets[big].max())
            for tol_k, store in ((tol, out), (min(tol * ESTIMATE_FACTOR, 1e-3), None)):
                sol = _solution(route, reach, tol_k, t0)
                vals = route.sign * sol.integral(targets[big])
                if store is not None:
                    store[big] = vals
                else:
                    err[big] = np.abs(vals - out[big])
        return out, err
    # soft edge: log tau(s) = -int_s^inf h
    seed = route.seed()
    inside = targets < seed.t0
    for i in np.flatnonzero(~inside):
        out[i] = route.sign * sigma_ode.seed_sigma_ii(route.args[0], t0=float(targets[i]), alpha=route.args[1]).head
    if np.any(inside):
        reach = float(targets[inside].min())
        for tol_k, store in ((tol, out), (min(tol * ESTIMATE_FACTOR, 1e-3), None)):
            sol = _solution(route, reach, tol_k)
            vals = route.sign * sol.integral(targets[inside])
            if store is not None:
                store[inside] = vals
            else:
                err[inside] = np.abs(vals - out[inside])
    return out, err


# --------------------------------------------------------------------------
# Combining tau-functions
# --------------------------------------------------------------------------


def _single(lt, et, method):
    return [GapResult(float(math.exp(x)), float(x), method, float(math.exp(x) * e)) for x, e in zip(lt, et)]


def _product(l1, e1, l2, e2, method):
    res = []
    for x1, d1, x2, d2 in zip(l1, e1, l2, e2):
        lp = float(x1 + x2)
        p = math.exp(lp)
        res.append(GapResult(p, lp, method, float(p * (d1 + d2))))
    return res


def _mean(l1, e1, l2, e2, method):
    res = []
    for x1, d1, x2, d2 in zip(l1, e1, l2, e2):
        p1, p2 = math.exp(x1), math.exp(x2)
        p = 0.5 * (p1 + p2)
        lp = math.log(p) if p > 0.0 else -math.inf
        res.append(GapResult(float(p), float(lp), method, float(0.5 * (p1 * d1 + p2 * d2))))
    return res


def _pair(beta, r1, r2, targets, tol, label):
    l1, e1 = _log_tau(r1, targets, tol)
    if beta == 1:
        return _single(l1, e1, f"{label}:tau[{r1.tag}]")
    l2, e2 = _log_tau(r2, targets, tol)
    if beta == 2:
        return _product(l1, e1, l2, e2, f"{label}:tau[{r1.tag}]*tau[{r2.tag}]")
    return _mean(l1, e1, l2, e2, f"{label}:mean(tau[{r1.tag}],tau[{r2.tag}])")


def _check_beta(beta):
    if beta not in (1, 2, 4):
        raise ParameterError(f"beta must be 1, 2 or 4, got {beta}")


def _as_grid(s):
    arr = np.atleast_1d(np.asarray(s, dtype=float))
    if arr.ndim != 1 or not np.all(np.isfinite(arr)):
        raise DomainError("s must be a finite scalar or 1-d sequence")
    return arr


def bulk_many(beta: int, s, tol: float = DEFAULT_TOL) -> list:
    """Bulk-scaled E_beta on a grid of s; see :func:`e_bulk`."""
    _check_beta(beta)
    s = _as_grid(s)
    if np.any(s < 0.0) or np.any(s > BULK_S_MAX):
        raise DomainError(f"bulk: need 0 <= s <= {BULK_S_MAX:g}")
    t = (math.pi * s) ** 2
    return _pair(beta, _Route("iiiprime", (-0.5,)), _Route("iiiprime", (0.5,)), t, tol, "bulk")


def soft_many(beta: int, s, tol: float = DEFAULT_TOL) -> list:
    """Soft-edge E_beta(0;(s,inf)) on a grid of s; see :func:`e_soft`."""
    _check_beta(beta)
    s = _as_grid(s)
    lo, hi = SOFT_S_RANGE
    if np.any(s < lo) or np.any(s > hi):
        raise DomainError(f"soft: need {lo:g} <= s <= {hi:g}")
    return _pair(beta, _Route("soft", ("minus", 0.0)), _Route("soft", ("plus", 0.0)), s, tol, "soft")


def hard_many(beta: int, s, a: float, tol: float = DEFAULT_TOL) -> list:
    """Hard-edge E_beta(0;(0,s)) on a grid of s; see :func:`e_hard`."""
    _check_beta(beta)
    a = float(a)
    if not a > -1.0:
        raise ParameterError("hard edge requires a > -1")
    s = _as_grid(s)
    if np.any(s < 0.0):
        raise DomainError("hard: need s >= 0")
    x = np.sqrt(s)
    return _pair(beta, _Route("hard", (a, 1)), _Route("hard", (a, 2)), x, tol, "hard")


def circular_many(beta: int, N: int, phi, tol: float = DEFAULT_TOL) -> list:
    """Circular E_beta(0;(-phi,phi)) on a grid of phi; see :func:`e_circular`."""
    _check_beta(beta)
    if int(N) != N or N < 1:
        raise ParameterError("circular: need an integer N >= 1")
    N = int(N)
    phi = _as_grid(phi)
    if np.any(phi < 0.0) or np.any(phi >= math.pi):
        raise DomainError("circular: need 0 <= phi < pi")
    # s = tan(phi/2) and s^2/(s^2+1) = sin^2(phi/2)
    t = np.sin(0.5 * phi) ** 2
    if np.any(t > JACOBI_T_MAX):
        raise DomainError("circular: phi too close to pi")
    return _pair(beta, _Route("jacobi", (0.5, -0.5, N)), _Route("jacobi", (-0.5, 0.5, N)), t, tol, "circular")


def finite_many(query: GapQuery, s, tol: float = DEFAULT_TOL) -> list:
    """Finite-N gap probabilities for the regime and parameters of ``query`` on a grid of s."""
    s = _as_grid(s)
    if np.any(s < 0.0):
        raise DomainError("finite: need s >= 0")
    r, N = query.regime, query.N
    if r is Regime.FINITE_LAGUERRE_E2:
        if not query.a > -1.0:
            raise ParameterError("Laguerre weight needs a > -1")
        return _pair(1, _Route("laguerre", (N, float(query.a))), None, s, tol, "laguerre_e2")
    if r is Regime.FINITE_JACOBI_E2:
        if not (query.a > -1.0 and query.b > -1.0):
            raise ParameterError("Jacobi weight needs a, b > -1")
        if np.any(s > JACOBI_T_MAX):
            raise DomainError(f"jacobi_e2: need t <= {JACOBI_T_MAX}")
        return _pair(1, _Route("jacobi", (float(query.a), float(query.b), N)), None, s, tol, "jacobi_e2")
    M = N // 2
    if r is Regime.FINITE_GAUSSIAN:
        # E_1 of e^{-x^2/2} with N even is Laguerre E_2 with a = -1/2 and N/2
        return _pair(1, _Route("laguerre", (M, -0.5)), None, s * s, tol, "gaussian_e1")
    if r is Regime.FINITE_JACOBI_SYMMETRIC:
        if not query.a > -1.0:
            raise ParameterError("symmetric Jacobi weight (1-x^2)^((a-1)/2) needs a > -1")
        if np.any(s * s > JACOBI_T_MAX):
            raise DomainError("jacobi_symmetric: need s < 1")
        return _pair(1, _Route("jacobi", (float(query.a), -0.5, M)), None, s * s, tol, "jacobi_symmetric_e1")
    if r is Regime.FINITE_CAUCHY:
        ap = float(query.alpha) - N + 0.5
        if not ap > -1.0:
            raise ParameterError("Cauchy weight needs alpha > N - 3/2")
        t = s * s / (s * s + 1.0)
        if np.any(t > JACOBI_T_MAX):
            raise DomainError("cauchy: s too large")
        return _pair(1, _Route("jacobi", (ap, -0.5, M)), None, t, tol, "cauchy_e1")
    raise ParameterError(f"{r.value} is not a finite-N regime")


# --------------------------------------------------------------------------
# Public scalar API
# --------------------------------------------------------------------------


def e_bulk(beta: int, s: float, tol: float = DEFAULT_TOL) -> GapResult:
    """Bulk-scaled gap probability.

    beta=1 and 2 give E(0;2s), no eigenvalue in an interval of length 2s at
    unit mean spacing; beta=4 gives E_4(0;s) built from the same two
    tau-functions, so that E_4 = (E_1 + E_2/E_1)/2 holds at equal s.
    """
    return bulk_many(beta, [s], tol)[0]


def e_soft(beta: int, s: float, tol: float = DEFAULT_TOL) -> GapResult:
    """Soft-edge distribution E_beta(0;(s,inf)) of the largest eigenvalue."""
    return soft_many(beta, [s], tol)[0]


def e_hard(beta: int, s: float, a: float, tol: float = DEFAULT_TOL) -> GapResult:
    """Hard-edge E(0;(0,s)) built from the Bessel order a.

    beta=2 is the Laguerre exponent a, beta=1 the exponent (a-1)/2 and
    beta=4 the exponent a+1, all from the same pair of tau-functions.
    """
    return hard_many(beta, [s], a, tol)[0]


def e_circular(beta: int, N: int, phi: float, tol: float = DEFAULT_TOL) -> GapResult:
    """Circular ensembles, no eigenvalue on the arc (-phi, phi).

    beta=1 and 2 refer to 2N eigenvalues, beta=4 to N eigenvalues.
    """
    return circular_many(beta, N, [phi], tol)[0]


def e_finite(query: GapQuery, tol: float = DEFAULT_TOL) -> GapResult:
    """Finite-N gap probability described by ``query``."""
    if query.regime is Regime.CIRCULAR:
        return e_circular(query.beta, query.N, query.s, tol)
    return finite_many(query, [query.s], tol)[0]


def evaluate(query: GapQuery, s=None, tol: float = DEFAULT_TOL) -> list:
    """Results for ``query`` at each value of ``s`` (default: query.s)."""
    grid = [query.s] if s is None else s
    r = query.regime
    if r is Regime.BULK:
        return bulk_many(query.beta, grid, tol)
    if r is Regime.SOFT:
        return soft_many(query.beta, grid, tol)
    if r is Regime.HARD:
        return hard_many(query.beta, grid, query.a, tol)
    if r is Regime.CIRCULAR:
        return circular_many(query.beta, query.N, grid, tol)
    return finite_many(query, grid, tol)


# --------------------------------------------------------------------------
# tau integral on a given trajectory
# --------------------------------------------------------------------------


class Transform(str, enum.Enum):
    DT_OVER_T = "dt_over_t"
    DT = "dt"
    DX = "dx"
    DT_OVER_T_T_MINUS_1 = "dt_over_t_t_minus_1"


def _measure(fam) -> Transform:
    if fam.family is Family.SIGMA_II:
        return Transform.DT
    if fam.family is Family.SIGMA_VI:
        return Transform.DT_OVER_T_T_MINUS_1
    if fam.variant == "hard_edge":
        return Transform.DX
    return Transform.DT_OVER_T


def tau_integral(sol: SigmaSolution, transform, lower: float, upper: float) -> float:
    """Signed integral of the Hamiltonian over (lower, upper) in its measure.

    ``dt_over_t`` integrates sigma/t (sigma-III' and finite sigma-V), ``dx``
    the hard-edge h-tilde_V, ``dt`` h_II and ``dt_over_t_t_minus_1``
    h-tilde_VI/(t(t-1)). The integral is read from the solver's cumulative
    quadrature, anchored at 0 by the seed's series head (or at +inf for
    sigma-II by the Airy tail), so ``lower = 0`` (``upper = inf`` for
    sigma-II) is allowed even though the trajectory starts at the seed.
    """
    transform = Transform(transform)
    if transform is not _measure(sol.family):
        raise ParameterError(f"{sol.family.label} integrates against {_measure(sol.family).value}, not {transform.value}")
    lower, upper = float(lower), float(upper)
    if lower == upper:
        return 0.0
    if sol.family.family is Family.SIGMA_II:
        # cumulative(t) = int_t^inf h

        def anchored(t):
            return 0.0 if t == math.inf else sol.integral(t)

        return anchored(lower) - anchored(upper)

    def anchored(t):
        if t == 0.0:
            return 0.0
        if t < sol.seed.t0:
            raise CoverageError(f"{t} lies between 0 and the seed abscissa {sol.seed.t0}")
        return sol.integral(t)

    return anchored(upper) - anchored(lower)
