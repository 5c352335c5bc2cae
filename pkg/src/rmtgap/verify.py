"""Cross-checks of every tau-function route against an independent oracle.

Each check group returns a list of :class:`Check` rows. The groups back both
``rmtgap verify`` and the acceptance test-suite, and the thresholds are the
acceptance thresholds unless the caller overrides them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import gap_prob, oracle, sigma_ode, specfun
from .oracle import KernelSpec, Weight
from .sigma_ode import FiniteLaguerre, HardEdge

__all__ = ["Check", "GROUPS", "run"]


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    reference: float
    threshold: float
    relative: bool = False

    @property
    def diff(self) -> float:
        d = abs(self.value - self.reference)
        if self.relative:
            d /= max(abs(self.reference), 1e-300)
        return d

    @property
    def passed(self) -> bool:
        return bool(self.diff <= self.threshold)


def _fmt(x: float) -> str:
    return f"{x:g}"


# --------------------------------------------------------------------------
# Groups
# --------------------------------------------------------------------------

BULK_S = (0.1, 0.3, 0.5, 0.8, 1.2)
SOFT_S = (-4.0, -2.0, 0.0, 1.0, 3.0)
HARD_A = (0.0, 0.5, 1.0)
HARD_S = (0.5, 1.0, 2.0)
HARD_DM_S = (0.25, 0.5, 1.0, 2.0, 4.0)
CIRCULAR_PHI = (0.2, 0.6, 1.0, 1.8, 2.6)


def _dyson_mehta(name: str, e1, e2, e4, points) -> list:
    out = []
    for p, r1, r2, r4 in zip(points, e1, e2, e4):
        rel = 0.5 * (r1.probability + r2.probability / r1.probability)
        out.append(Check(f"Dyson-Mehta {name} s={_fmt(p)}", r4.probability, rel, 1e-10))
    return out


def bulk_checks(tol: float = sigma_ode.DEFAULT_TOL) -> list:
    e1 = gap_prob.bulk_many(1, BULK_S, tol)
    e2 = gap_prob.bulk_many(2, BULK_S, tol)
    e4 = gap_prob.bulk_many(4, BULK_S, tol)
    out = []
    for s, r1, r2 in zip(BULK_S, e1, e2):
        det = oracle.fredholm_det(KernelSpec("sine", -s, s))
        out.append(Check(f"E2_bulk vs sine determinant s={_fmt(s)}", r2.probability, det, 1e-6))
    for s, r1, r2 in zip(BULK_S, e1, e2):
        det = oracle.fredholm_det(KernelSpec("sine_even", 0.0, s))
        out.append(Check(f"E1_bulk vs even sine determinant s={_fmt(s)}", r1.probability, det, 1e-6))
        split = r1.probability * (r2.probability / r1.probability)
        out.append(Check(f"E1_bulk times E2/E1 recovers E2_bulk s={_fmt(s)}", split, r2.probability, 1e-12))
    out += _dyson_mehta("bulk", e1, e2, e4, BULK_S)
    return out


def soft_checks(tol: float = sigma_ode.DEFAULT_TOL) -> list:
    e1 = gap_prob.soft_many(1, SOFT_S, tol)
    e2 = gap_prob.soft_many(2, SOFT_S, tol)
    e4 = gap_prob.soft_many(4, SOFT_S, tol)
    grid = np.array((10.0,) + tuple(sorted(SOFT_S, reverse=True)))
    hm = oracle.hastings_mcleod(grid)
    f1 = dict(zip(grid, oracle.f1_from_q(hm)))
    f2 = dict(zip(grid, oracle.f2_from_q(hm)))
    out = []
    for s, r1, r2 in zip(SOFT_S, e1, e2):
        det = oracle.fredholm_det(KernelSpec("airy", s, math.inf))
        out.append(Check(f"F2 tau vs Airy determinant s={_fmt(s)}", r2.probability, det, 1e-6))
        out.append(Check(f"F1 tau vs Hastings-McLeod integral route s={_fmt(s)}", r1.probability, f1[s], 1e-6))
        out.append(Check(f"F2 tau vs Hastings-McLeod integral route s={_fmt(s)}", r2.probability, f2[s], 1e-6))
    out += _dyson_mehta("soft", e1, e2, e4, SOFT_S)
    out += r_prime_checks(tol)
    out += hamilton_checks(tol)
    return out


def r_prime_checks(tol: float = sigma_ode.DEFAULT_TOL) -> list:
    """R'(t) = -q(t;0)^2 with R from the alpha = -1/2 route."""
    pts = (4.0, 2.0, 0.0, -2.0)
    seed = sigma_ode.seed_sigma_ii("R", alpha=-0.5)
    sol = sigma_ode.integrate(seed.family, seed, np.array((seed.t0,) + pts), tol=tol)
    hm = oracle.hastings_mcleod(np.array((10.0,) + pts))
    return [
        Check(f"R' + q^2 vanishes t={_fmt(t)}", rp, -q * q, 1e-6)
        for t, rp, q in zip(pts, sol.h_prime[1:], hm.q[1:])
    ]


def hamilton_checks(tol: float = sigma_ode.DEFAULT_TOL) -> list:
    """Hamiltonian flow from Airy data against the sigma-II minus branch."""
    t0 = 10.0
    grid = np.concatenate([[t0, 9.0], np.linspace(8.0, 0.0, 9)])
    ai, aip = specfun.airy(t0)
    q0, r0 = -ai, -aip + ai * ai
    q, p, H = sigma_ode.hamilton_p2(0.0, t0, q0, r0 + 0.5 * t0, grid, r0=r0)
    seed = sigma_ode.seed_sigma_ii("minus", t0=t0)
    sol = sigma_ode.integrate(seed.family, seed, grid, tol=tol)
    return [
        Check(f"Hamiltonian equals h_II - t^2/8 t={_fmt(t)}", Ht, h - t * t / 8.0, 1e-7)
        for t, Ht, h in zip(grid[2:], H[2:], sol.h[2:])
    ]


def okamoto_e2_hard(s: float, a: float, tol: float = sigma_ode.DEFAULT_TOL) -> float:
    """E_2 at the hard edge as tau_III' at Okamoto time T = s/4.

    The sigma-III' variable is t = 4T, so the trajectory is read at t = s.
    """
    T = s / 4.0
    t = 4.0 * T
    seed = sigma_ode.seed_sigma_iiiprime(a)
    sol = sigma_ode.integrate(seed.family, seed, np.array([seed.t0, t]), tol=tol)
    return math.exp(-gap_prob.tau_integral(sol, "dt_over_t", 0.0, t))


def hard_checks(tol: float = sigma_ode.DEFAULT_TOL) -> list:
    out = []
    for a in HARD_A:
        e1 = gap_prob.hard_many(1, HARD_S, a, tol)
        e2 = gap_prob.hard_many(2, HARD_S, a, tol)
        hq = oracle.hard_edge_q(a, np.array((1e-6,) + HARD_S))
        e1q = oracle.e1_hard_from_q(hq)[1:]
        for s, r1, r2, ref1 in zip(HARD_S, e1, e2, e1q):
            tag = f"a={_fmt(a)} s={_fmt(s)}"
            det = oracle.fredholm_det(KernelSpec("bessel", 0.0, s, a))
            out.append(Check(f"E2_hard vs Bessel determinant {tag}", r2.probability, det, 1e-6))
            out.append(Check(f"E2_hard vs sigma-III' at Okamoto time s/4 {tag}", r2.probability, okamoto_e2_hard(s, a, tol), 1e-6))
            out.append(Check(f"E1_hard vs hard-edge transcendent route {tag}", r1.probability, ref1, 1e-6))
        dm = [gap_prob.hard_many(beta, HARD_DM_S, a, tol) for beta in (1, 2, 4)]
        out += _dyson_mehta(f"hard a={_fmt(a)}", *dm, HARD_DM_S)
    return out


def finite_checks(tol: float = sigma_ode.DEFAULT_TOL) -> list:
    Q = gap_prob.GapQuery
    out = [
        Check(
            "E2 Laguerre N=1 a=0 t=1 vs exp(-1)",
            gap_prob.e_finite(Q("finite_laguerre_e2", 2, 1.0, a=0.0, N=1), tol).probability,
            math.exp(-1.0),
            1e-10,
        ),
        Check(
            "E2 Jacobi N=1 a=b=0 t=0.25 vs 0.75",
            gap_prob.e_finite(Q("finite_jacobi_e2", 2, 0.25, a=0.0, b=0.0, N=1), tol).probability,
            0.75,
            1e-10,
        ),
        Check(
            "E1 Gaussian N=2 vs brute force s=0.5",
            gap_prob.e_finite(Q("finite_gaussian", 1, 0.5, N=2), tol).probability,
            oracle.brute_force_pdf(1, Weight.gaussian(0.5), 2, (-0.5, 0.5)),
            1e-6,
        ),
    ]
    for N in (2, 3):
        for a, t in ((0.0, 1.0), (1.5, 2.5)):
            val = gap_prob.e_finite(Q("finite_laguerre_e2", 2, t, a=a, N=N), tol).probability
            ref = oracle.e2_gram(("laguerre", a), N, (0.0, t))
            out.append(Check(f"E2 Laguerre vs Gram N={N} a={_fmt(a)} t={_fmt(t)}", val, ref, 1e-8))
        for a, b, t in ((0.0, 0.0, 0.3), (0.5, -0.5, 0.6)):
            val = gap_prob.e_finite(Q("finite_jacobi_e2", 2, t, a=a, b=b, N=N), tol).probability
            ref = oracle.e2_gram(("jacobi", a, b), N, (-1.0, -1.0 + 2.0 * t))
            out.append(Check(f"E2 Jacobi vs Gram N={N} a={_fmt(a)} b={_fmt(b)} t={_fmt(t)}", val, ref, 1e-8))
    return out


def circular_checks(tol: float = sigma_ode.DEFAULT_TOL) -> list:
    out = [
        Check(
            "E4 circular N=2 vs brute force phi=0.3",
            gap_prob.e_circular(4, 2, 0.3, tol).probability,
            oracle.brute_force_pdf(4, Weight.circle(), 2, (-0.3, 0.3)),
            1e-6,
        ),
        Check(
            "E2 circular N=1 vs brute force phi=pi/2",
            gap_prob.e_circular(2, 1, 0.5 * math.pi, tol).probability,
            oracle.brute_force_pdf(2, Weight.circle(), 2, (-0.5 * math.pi, 0.5 * math.pi)),
            1e-7,
        ),
    ]
    e1 = gap_prob.circular_many(1, 2, CIRCULAR_PHI, tol)
    e2 = gap_prob.circular_many(2, 2, CIRCULAR_PHI, tol)
    e4 = gap_prob.circular_many(4, 2, CIRCULAR_PHI, tol)
    out += _dyson_mehta("circular N=2", e1, e2, e4, CIRCULAR_PHI)
    return out


# --------------------------------------------------------------------------
# Seeds and residuals
# --------------------------------------------------------------------------


def _bessel_gap_form(a: float):
    return lambda t: 0.25 * t * specfun.bessel_product_gap(a, math.sqrt(t))


def _hard_form(a: float, branch: int):
    sgn = 1.0 if branch == 1 else -1.0

    def f(x):
        return -0.5 * sgn * x * specfun.bessel_j(a, x) - 0.25 * x * x * specfun.bessel_product_gap(a, x)

    return f


def _laguerre_form(N: int, a: float):
    c = math.exp(math.lgamma(N + a + 1) - math.lgamma(N) - math.lgamma(a + 1) - math.lgamma(a + 2))
    return lambda t: -c * t ** (a + 1.0)


def _airy_form(sign: float):
    def f(t):
        ai, aip = specfun.airy(t)
        return 0.5 * sign * ai + 0.5 * (aip * aip - t * ai * ai)

    return f


def _airy_r(t):
    ai, aip = specfun.airy(t)
    return aip * aip - t * ai * ai


def presets() -> list:
    """(regime, name, seed, end, asymptotic form or None) for every shipped trajectory."""
    out = []
    bulk_end = (math.pi * gap_prob.BULK_S_MAX) ** 2
    out.append((
        "bulk",
        "sigma-III' a=-1/2 (bulk, E1)",
        sigma_ode.seed_sigma_iiiprime(-0.5),
        bulk_end,
        lambda t: math.sqrt(t) / (2.0 * math.pi) * (1.0 + math.sin(2.0 * math.sqrt(t)) / (2.0 * math.sqrt(t))),
    ))
    out.append((
        "bulk",
        "sigma-III' a=1/2 (bulk, partner)",
        sigma_ode.seed_sigma_iiiprime(0.5),
        bulk_end,
        lambda t: math.sqrt(t) / (2.0 * math.pi) * (1.0 - math.sin(2.0 * math.sqrt(t)) / (2.0 * math.sqrt(t))),
    ))
    for a in HARD_A:
        out.append(("hard", f"sigma-III' a={_fmt(a)} (hard edge E2)", sigma_ode.seed_sigma_iiiprime(a), 4.0, _bessel_gap_form(a)))
        for br in (1, 2):
            out.append((
                "hard",
                f"sigma-V hard edge a={_fmt(a)} branch {br}",
                sigma_ode.seed_sigma_v(HardEdge(a, br)),
                2.0,
                _hard_form(a, br),
            ))
    for br, sg in (("minus", 1.0), ("plus", -1.0)):
        out.append(("soft", f"sigma-II {br} branch", sigma_ode.seed_sigma_ii(br), gap_prob.SOFT_S_RANGE[0], _airy_form(sg)))
    out.append(("soft", "sigma-II R (alpha=-1/2)", sigma_ode.seed_sigma_ii("R", alpha=-0.5), gap_prob.SOFT_S_RANGE[0], _airy_r))
    for N, a in ((1, 0.0), (2, 0.5), (3, -0.5), (2, 1.5)):
        out.append((
            "finite",
            f"sigma-V Laguerre N={N} a={_fmt(a)}",
            sigma_ode.seed_sigma_v(FiniteLaguerre(N, a)),
            4.0,
            _laguerre_form(N, a),
        ))
    for a, b, N in ((0.0, 0.0, 2), (0.5, -0.5, 2), (-0.5, 0.5, 2), (1.5, -0.5, 1)):
        out.append((
            "finite",
            f"sigma-VI Jacobi a={_fmt(a)} b={_fmt(b)} N={N}",
            sigma_ode.seed_sigma_vi((a, b), N),
            0.99,
            None,
        ))
    return out


def seed_checks(tol: float = sigma_ode.DEFAULT_TOL) -> list:
    """Trajectory residuals and agreement with the boundary asymptotics.

    The asymptotic form is compared at 2 t0 for the small-t families and at
    t0 - 2 for sigma-II, which is seeded at large t and runs downward.
    """
    out = []
    for _, name, seed, end, form in presets():
        if seed.direction is sigma_ode.Direction.INCREASING:
            probe = 2.0 * seed.t0
        else:
            probe = seed.t0 - 2.0
        grid = np.array([seed.t0, probe, end])
        sol = sigma_ode.integrate(seed.family, seed, grid, tol=tol)
        out.append(Check(f"residual along {name}", sol.residual_max, 0.0, 1e-8))
        if form is not None:
            out.append(Check(f"seed asymptotics {name}", float(sol.h[1]), float(form(probe)), 1e-6, relative=True))
    return out


GROUPS: dict[str, Callable] = {
    "bulk": bulk_checks,
    "soft": soft_checks,
    "hard": hard_checks,
    "finite": finite_checks,
    "circular": circular_checks,
    "seeds": seed_checks,
}


def run(groups=None, tol: float = sigma_ode.DEFAULT_TOL, threshold: float | None = None) -> list:
    """Run the named groups (all by default); ``threshold`` overrides every check's."""
    names = list(GROUPS) if groups is None else list(groups)
    rows = []
    for g in names:
        for c in GROUPS[g](tol):
            if threshold is not None:
                c = Check(c.name, c.value, c.reference, threshold, c.relative)
            rows.append((g, c))
    return rows
