"""Sigma-form Painleve equations: boundary seeds and trajectory integration.

Each second-order, second-degree sigma equation R(t, h, h', h'') = 0 is
differentiated once and divided by the common factor h'' (or h' for the
P-VI form), which gives an explicit third-order equation that is
polynomial in the state except for that one division. The undifferentiated
relation is then monitored along the trajectory as an invariant.

Families seeded near t = 0 (P-III', P-V) are integrated in u = log v with
the scaled state (h, v h', v^2 h''), which keeps the power-law behaviour at
the seed well conditioned however small the seed abscissa is. P-II and P-VI
use the plain variable.

Every trajectory also carries the cumulative integral of its tau-function
integrand (sigma/t for P-III' and P-V, y/x for the hard-edge P-V, the
h-tilde/(t(t-1)) combination for P-VI, and h for P-II), anchored at the
zero-size interval so that log tau needs no further quadrature.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special
from scipy.integrate import solve_ivp

from . import specfun
from .errors import (
    BlowUpError,
    CoverageError,
    DomainError,
    ParameterError,
    SeedInconsistencyError,
    SingularityError,
    ToleranceError,
)

__all__ = [
    "BoundarySeed",
    "Direction",
    "Family",
    "FiniteLaguerre",
    "HardEdge",
    "PainleveFamily",
    "SigmaSolution",
    "hamilton_p2",
    "hard_edge_nu",
    "integrate",
    "nu_from_v",
    "relative_residual",
    "seed_sigma_ii",
    "seed_sigma_iiiprime",
    "seed_sigma_v",
    "seed_sigma_vi",
]

DEFAULT_TOL = 1e-9
SEED_TOL = 1e-10
H2_LIMIT = 1e12


class Family(str, enum.Enum):
    SIGMA_II = "SigmaII"
    SIGMA_IIIPRIME = "SigmaIIIprime"
    SIGMA_V = "SigmaV"
    SIGMA_VI = "SigmaVI"


class Direction(str, enum.Enum):
    INCREASING = "increasing_t"
    DECREASING = "decreasing_t"


def _elementary(vals):
    v = list(vals)
    e1 = sum(v)
    e2 = sum(v[i] * v[j] for i in range(4) for j in range(i + 1, 4))
    e3 = sum(v[i] * v[j] * v[k] for i in range(4) for j in range(i + 1, 4) for k in range(j + 1, 4))
    e4 = v[0] * v[1] * v[2] * v[3]
    return e1, e2, e3, e4


def nu_from_v(v) -> tuple[float, float, float, float]:
    """P-V parameters nu_j = v_{j+1} - v_1 from v_1..v_4 with v_1+...+v_4 = 0."""
    v = tuple(float(x) for x in v)
    if len(v) != 4:
        raise ParameterError("need four v parameters")
    if abs(sum(v)) > 1e-12:
        raise ParameterError("v parameters must sum to zero")
    return (0.0, v[1] - v[0], v[2] - v[0], v[3] - v[0])


def hard_edge_v(a: float) -> tuple[float, float, float, float]:
    """v_1 = -v_3 = -(a-1)/4, v_2 = -v_4 = (a+1)/4."""
    v1 = -(a - 1.0) / 4.0
    v2 = (a + 1.0) / 4.0
    return (v1, v2, -v1, -v2)


def hard_edge_nu(a: float) -> tuple[float, float, float, float]:
    return nu_from_v(hard_edge_v(a))


# --------------------------------------------------------------------------
# Families
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PainleveFamily:
    """Tagged parameter record for one sigma-form equation.

    ``variant`` distinguishes the two P-II normalisations ("h" for h_II with
    alpha = 0, "u" for the alpha = -1/2 function R) and the two P-V uses
    ("finite" in the variable t, "hard_edge" in x with T = 2x).
    ``bessel_order`` is the hard-edge a, needed to undo the shift between
    sigma_V(T) and x h-tilde_V(x).
    """

    family: Family
    params: tuple
    variant: str = ""
    bessel_order: float = 0.0

    # constructors ---------------------------------------------------------
    @classmethod
    def sigma_ii(cls, alpha: float = 0.0) -> "PainleveFamily":
        if alpha == 0.0:
            return cls(Family.SIGMA_II, (0.0,), "h")
        if alpha == -0.5:
            return cls(Family.SIGMA_II, (-0.5,), "u")
        raise ParameterError("sigma-II presets support alpha in {0, -1/2} only")

    @classmethod
    def sigma_iiiprime(cls, v1: float, v2: float | None = None) -> "PainleveFamily":
        v2 = v1 if v2 is None else v2
        return cls(Family.SIGMA_IIIPRIME, (float(v1), float(v2)))

    @classmethod
    def sigma_v(cls, nu) -> "PainleveFamily":
        nu = tuple(float(x) for x in nu)
        if len(nu) != 4:
            raise ParameterError("sigma-V needs four nu parameters")
        return cls(Family.SIGMA_V, nu, "finite")

    @classmethod
    def sigma_v_laguerre(cls, N: int, a: float) -> "PainleveFamily":
        return cls.sigma_v((0.0, 0.0, N + a, float(N)))

    @classmethod
    def sigma_v_hard_edge(cls, a: float) -> "PainleveFamily":
        return cls(Family.SIGMA_V, hard_edge_nu(a), "hard_edge", float(a))

    @classmethod
    def sigma_vi(cls, b) -> "PainleveFamily":
        b = tuple(float(x) for x in b)
        if len(b) != 4:
            raise ParameterError("sigma-VI needs four b parameters")
        return cls(Family.SIGMA_VI, b)

    @classmethod
    def sigma_vi_jacobi(cls, a: float, b: float, N: int) -> "PainleveFamily":
        b12 = N + 0.5 * (a + b)
        return cls.sigma_vi((b12, b12, 0.5 * (a + b), 0.5 * (a - b)))

    # equation -------------------------------------------------------------
    @property
    def log_variable(self) -> bool:
        return self.family in (Family.SIGMA_IIIPRIME, Family.SIGMA_V)

    def residual_terms(self, t, h, h1, h2) -> list:
        """Additive terms of the undifferentiated equation at (t, h, h', h'')."""
        f = self.family
        if f is Family.SIGMA_II:
            (alpha,) = self.params
            c = (alpha + 0.5) ** 2
            if self.variant == "h":
                return [h2 * h2, -0.5 * h2, 4.0 * h1**3, -t * h1 * h1, -2.0 * h * h1, 0.5 * t * h, 1.0 / 16.0 - 0.25 * c]
            return [h2 * h2, 4.0 * h1**3, -4.0 * t * h1 * h1, 4.0 * h1 * h, -c]
        if f is Family.SIGMA_IIIPRIME:
            v1, v2 = self.params
            return [(t * h2) ** 2, -v1 * v2 * h1 * h1, h1 * (4.0 * h1 - 1.0) * (h - t * h1), -((v1 - v2) ** 2) / 64.0]
        if f is Family.SIGMA_V and self.variant == "hard_edge":
            # sigma-V in T = 2x rewritten for y(x), times 4, so that large a
            # does not cancel against the shift
            a2 = self.bessel_order ** 2
            x, y, y1, y2 = t, h, h1, h2
            return [
                x * x * y2 * y2, x * x * y2, 4.0 * x * y1**3, -x * y1, -4.0 * y * y,
                (1.0 - a2) * y, x * x * y, 4.0 * x * y * y1, -4.0 * y * y1 * y1,
                x * x * y1 * y1, -a2 * y1 * y1,
            ]
        if f is Family.SIGMA_V:
            T, S, X, TS2 = self._v_state(t, h, h1, h2)
            e1, e2, e3, e4 = _elementary(self.params)
            B0 = S - T * X
            return [TS2 * TS2, -B0 * B0, -2.0 * B0 * (2.0 * X * X + e1 * X), -(e1 * e1 - 4.0 * e2) * X * X, 4.0 * e3 * X, 4.0 * e4]
        b1, b2, b3, b4 = self.params
        x = h1
        P = t * (1.0 - t) * h2
        C = x * (2.0 * h - (2.0 * t - 1.0) * x) + b1 * b2 * b3 * b4
        Q = (x + b1 * b1) * (x + b2 * b2) * (x + b3 * b3) * (x + b4 * b4)
        return [x * P * P, C * C, -Q]

    def _v_state(self, t, h, h1, h2):
        """(T, S, S_T, T S_TT) of the P-V equation from the integration state."""
        if self.variant != "hard_edge":
            return t, h, h1, t * h2
        a = self.bessel_order
        x, y, y1, y2 = t, h, h1, h2
        T = 2.0 * x
        S = y + 0.25 * x * x - 0.5 * (a - 1.0) * x + 0.25 * a * (a - 1.0)
        X = 0.5 * (y1 + 0.5 * x - 0.5 * (a - 1.0))
        TS2 = 0.5 * x * (y2 + 0.5)
        return T, S, X, TS2

    def third(self, t, h, h1, h2):
        """h''' from the differentiated equation."""
        f = self.family
        if f is Family.SIGMA_II:
            if self.variant == "h":
                return h + t * h1 - 6.0 * h1 * h1
            return -6.0 * h1 * h1 + 4.0 * t * h1 - 2.0 * h
        if f is Family.SIGMA_IIIPRIME:
            v1, v2 = self.params
            J = -t * h2 - 0.5 * ((8.0 * h1 - 1.0) * (h - t * h1) - t * h1 * (4.0 * h1 - 1.0) - 2.0 * v1 * v2 * h1)
            return J / (t * t)
        if f is Family.SIGMA_V and self.variant == "hard_edge":
            a2 = self.bessel_order ** 2
            x, y, y1, y2 = t, h, h1, h2
            J = a2 * y1 - x * x * y1 - 2.0 * x * y - 6.0 * x * y1 * y1 - x * y2 + 4.0 * y * y1
            return J / (x * x)
        if f is Family.SIGMA_V:
            T, S, X, TS2 = self._v_state(t, h, h1, h2)
            e1, e2, e3, _ = _elementary(self.params)
            B0 = S - T * X
            J = -TS2 + B0 * (4.0 * X + e1 - T) - T * (2.0 * X * X + e1 * X) + (e1 * e1 - 4.0 * e2) * X - 2.0 * e3
            return J / (t * t)
        # Q(0) = (b1 b2 b3 b4)^2, so the equation is h' (P^2 - F) = 0 with F a
        # polynomial; d/dt of P^2 = F reduces to 2 P P' = F_x h'', which is
        # regular where h' or h'' vanishes
        b1, b2, b3, b4 = self.params
        e4 = b1 * b2 * b3 * b4
        s1, s2, _, _ = _elementary((b1 * b1, b2 * b2, b3 * b3, b4 * b4))
        x = h1
        D = 2.0 * h - (2.0 * t - 1.0) * x
        Fx = 3.0 * x * x + 2.0 * s1 * x + s2 - D * D + 2.0 * (2.0 * t - 1.0) * (x * D + e4)
        w = t * (1.0 - t)
        return Fx / (2.0 * w * w) - (1.0 - 2.0 * t) * h2 / w

    def stabilizer(self, t, h, h1, h2, rate: float = 2.0):
        """Correction to h''' that damps the invariant as dR/du = -rate R.

        The differentiated flow conserves R exactly, so a seed with a small
        relative residual near t = 0 keeps a fixed absolute R while the
        terms of the equation shrink like 1/t. The correction vanishes on
        exact solutions and fades out where dR/dh'' becomes small.
        """
        if self.family is Family.SIGMA_VI:
            return self._stabilizer_vi(t, h, h1, h2, rate)
        if not self.log_variable:
            return 0.0
        R = sum(self.residual_terms(t, h, h1, h2))
        # R depends on h'' only through P^2 with P = t h'' (or T S_TT)
        if self.variant == "hard_edge":
            X, P, dP = h1, t * (h2 + 0.5), t
        elif self.family is Family.SIGMA_V:
            _, _, X, P = self._v_state(t, h, h1, h2)
            dP = t
        else:
            X, P, dP = h1, t * h2, t
        # fade out where P is negligible against the first-derivative scale
        den = 2.0 * dP * t * (P * P + 1e-10 * X * X)
        if den == 0.0:
            return 0.0
        return -rate * R * P / den

    def _stabilizer_vi(self, t, h, h1, h2, rate):
        # the flow conserves G = P^2 - F; damp it as dG/dt = -rate G / t
        b1, b2, b3, b4 = self.params
        e4 = b1 * b2 * b3 * b4
        s1, s2, s3, _ = _elementary((b1 * b1, b2 * b2, b3 * b3, b4 * b4))
        x = h1
        D = 2.0 * h - (2.0 * t - 1.0) * x
        F = x**3 + s1 * x * x + s2 * x + s3 - x * D * D - 2.0 * e4 * D
        w = t * (1.0 - t)
        P = w * h2
        G = P * P - F
        den = 2.0 * w * t * (P * P + 1e-10 * (1.0 + x * x))
        return -rate * G * P / den

    def integrand(self, t, h):
        """tau-function integrand in the family's natural measure.

        For the log-variable families this is the integrand against du,
        i.e. already multiplied by the variable.
        """
        f = self.family
        if f is Family.SIGMA_II:
            return h
        if f is Family.SIGMA_IIIPRIME:
            return h
        if f is Family.SIGMA_V:
            return h
        b1, b2, b3, b4 = self.params
        ht = h + b1 * b2 * t - 0.5 * (b1 * b2 + b3 * b4)
        return ht / (t * (t - 1.0))

    @property
    def label(self) -> str:
        p = ",".join(f"{x:g}" for x in self.params)
        tag = f"/{self.variant}" if self.variant else ""
        return f"{self.family.value}{tag}({p})"


def _natural_scale(fam: PainleveFamily, t, h, h1, h2) -> float:
    """Size of the building blocks of the equation, used as a residual floor.

    Needed for solutions such as sigma = -t on which every term of the
    equation vanishes identically and the plain relative residual would
    compare rounding noise with rounding noise.
    """
    if fam.variant == "hard_edge":
        a = abs(fam.bessel_order)
        parts = [abs(h), abs(t * h1), t * t, a * abs(h1), 2.0 * h1 * h1]
        return max(parts) ** 2
    if fam.family is Family.SIGMA_V:
        T, S, X, _ = fam._v_state(t, h, h1, h2)
        e1 = sum(fam.params)
        parts = [abs(S), abs(T * X), 2.0 * X * X, abs(e1 * X)]
        return max(parts) ** 2
    if fam.family is Family.SIGMA_IIIPRIME:
        return max(abs(h1), 4.0 * h1 * h1) * max(abs(h), abs(t * h1))
    if fam.family is Family.SIGMA_VI:
        # every term is quartic in h', D = 2h - (2t-1)h' and P = t(1-t)h'';
        # b = 0 Jacobi weights give h linear and all terms vanish
        D = 2.0 * h - (2.0 * t - 1.0) * h1
        return max(abs(h1), abs(D), abs(t * (1.0 - t) * h2)) ** 4
    return 0.0


def relative_residual(fam: PainleveFamily, t, h, h1, h2, floor: float = 1e-300) -> float:
    """|sum of terms| of the undifferentiated equation over its scale.

    The scale is the largest term, or the squared size of the building
    blocks (h, t h', ...) when the terms themselves cancel structurally.
    """
    terms = fam.residual_terms(t, h, h1, h2)
    total = abs(sum(terms))
    scale = max(max(abs(x) for x in terms), _natural_scale(fam, t, h, h1, h2))
    if scale <= floor:
        return 0.0
    return total / scale


# --------------------------------------------------------------------------
# Seeds
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundarySeed:
    """Initial point of a trajectory.

    ``h0, h1, h2`` are h, h', h'' in the integration variable. ``head`` is
    the integral of the tau integrand between the anchor (0, or +inf for
    P-II) and ``t0``. ``physical`` holds (x0, x h-tilde_V, its x-derivative
    and second derivative) for the hard edge, where the integration
    variable is x itself.
    """

    t0: float
    h0: float
    h1: float
    h2: float
    direction: Direction
    series_tag: str
    family: PainleveFamily
    head: float = 0.0
    residual: float = 0.0
    physical: tuple | None = None


def _checked(seed: BoundarySeed) -> BoundarySeed:
    r = relative_residual(seed.family, seed.t0, seed.h0, seed.h1, seed.h2)
    if not r <= SEED_TOL:
        raise SeedInconsistencyError(f"{seed.series_tag}: seed residual {r:.2e} exceeds {SEED_TOL:g}")
    return BoundarySeed(**{**seed.__dict__, "residual": r})


def _power_head(f: Callable, t0: float, p: float, n: int = 48) -> float:
    """Integral of f(t) dt/t over (0, t0) for f ~ t^p, via t = t0 v^(1/p)."""
    v, w = specfun.gauss_legendre(n, 0.0, 1.0)
    t = t0 * v ** (1.0 / p)
    # dt/t = dv / (p v); f(t)/v is smooth at v = 0 to leading order
    return float(np.sum(w * f(t) / (p * v)))


def default_t0_iiiprime(a: float) -> float:
    return min(1e-2, 10.0 ** (-13.0 / (1.0 + a)))


def seed_sigma_iiiprime(a: float, t0: float | None = None) -> BoundarySeed:
    """sigma ~ (t/4)[J_a^2 - J_{a+1} J_{a-1}](sqrt t), with v_1 = v_2 = a."""
    a = float(a)
    if not a > -1.0:
        raise DomainError("seed_sigma_iiiprime: a must exceed -1")
    t0 = default_t0_iiiprime(a) if t0 is None else float(t0)
    if not 0.0 < t0 <= 1e-2:
        raise DomainError("seed_sigma_iiiprime: need 0 < t0 <= 1e-2")
    r = math.sqrt(t0)
    ja = special.jv(a, r)
    h0 = 0.25 * t0 * specfun.bessel_product_gap(a, r)
    h1 = 0.25 * ja * ja
    h2 = ja * special.jvp(a, r) / (4.0 * r)
    head = _power_head(lambda t: 0.25 * t * specfun.bessel_product_gap(a, np.sqrt(t)), t0, 1.0 + a)
    return _checked(
        BoundarySeed(
            t0=t0, h0=h0, h1=h1, h2=h2,
            direction=Direction.INCREASING,
            series_tag="bessel_product_small_t",
            family=PainleveFamily.sigma_iiiprime(a),
            head=head,
        )
    )


def _airy_tail(f: Callable, t0: float, n: int = 80) -> float:
    x, w = specfun.gauss_legendre(n, t0, t0 + 20.0)
    return float(w @ f(x))


def seed_sigma_ii(branch: str, t0: float = 10.0, alpha: float = 0.0) -> BoundarySeed:
    """Airy seed at large t0 for h_II (alpha=0) or R (alpha=-1/2).

    ``branch`` "minus" gives h = +Ai/2 + (Ai'^2 - t Ai^2)/2 (the orthogonal
    branch), "plus" gives -Ai/2 + ...; for alpha = -1/2 the branch must be
    "R" and the seed is R = Ai'^2 - t Ai^2.
    """
    t0 = float(t0)
    if not 6.0 <= t0 <= 15.0:
        raise DomainError("seed_sigma_ii: need 6 <= t0 <= 15")
    fam = PainleveFamily.sigma_ii(alpha)
    if fam.variant == "u":
        if branch not in ("R", "u"):
            raise ParameterError("alpha=-1/2 seeds use branch 'R'")

        def vals(t):
            ai, aip = specfun.airy(t)
            return aip * aip - t * ai * ai, -ai * ai, -2.0 * ai * aip

        tag = "airy_R"
    else:
        if branch == "minus":
            s = 1.0
        elif branch == "plus":
            s = -1.0
        else:
            raise ParameterError("branch must be 'minus' or 'plus'")

        def vals(t):
            ai, aip = specfun.airy(t)
            h = 0.5 * s * ai + 0.5 * (aip * aip - t * ai * ai)
            return h, 0.5 * s * aip - 0.5 * ai * ai, 0.5 * s * t * ai - ai * aip

        tag = f"airy_{branch}"
    h0, h1, h2 = vals(t0)
    head = _airy_tail(lambda t: vals(t)[0], t0)
    return _checked(
        BoundarySeed(
            t0=t0, h0=h0, h1=h1, h2=h2,
            direction=Direction.DECREASING,
            series_tag=tag,
            family=fam,
            head=head,
        )
    )


@dataclass(frozen=True)
class FiniteLaguerre:
    N: int
    a: float


@dataclass(frozen=True)
class HardEdge:
    a: float
    branch: int


def default_t0_laguerre(N: int, a: float) -> float:
    return min(1e-13 / (N + abs(a) + 1.0), 10.0 ** (-13.0 / (a + 1.0)))


def default_x0_hard(a: float) -> float:
    return min(1e-6, 10.0 ** (-13.0 / (2.0 * (1.0 + a))))


def seed_sigma_v(context, t0: float | None = None) -> BoundarySeed:
    """Small-t seed for sigma-V.

    ``FiniteLaguerre(N, a)``: sigma = t d/dt log E_2(0;(0,t);x^a e^{-x};N)
    behaves as -Gamma(N+a+1)/(Gamma(N)Gamma(a+1)Gamma(a+2)) t^{a+1}.

    ``HardEdge(a, branch)``: t0 is the x-abscissa; x h-tilde_V is seeded by
    -+ (x/2) J_a(x) - (x^2/4)[J_a^2 - J_{a+1}J_{a-1}](x), upper sign for
    branch 1.
    """
    if isinstance(context, FiniteLaguerre):
        N, a = int(context.N), float(context.a)
        if N < 1 or not a > -1.0:
            raise DomainError("seed_sigma_v: need N >= 1 and a > -1")
        t0 = default_t0_laguerre(N, a) if t0 is None else float(t0)
        if not 0.0 < t0 <= 1e-2:
            raise DomainError("seed_sigma_v: need 0 < t0 <= 1e-2")
        logc = special.gammaln(N + a + 1) - special.gammaln(N) - special.gammaln(a + 1) - special.gammaln(a + 2)
        c = math.exp(logc)
        h0 = -c * t0 ** (a + 1.0)
        h1 = -c * (a + 1.0) * t0**a
        h2 = -c * (a + 1.0) * a * t0 ** (a - 1.0)
        return _checked(
            BoundarySeed(
                t0=t0, h0=h0, h1=h1, h2=h2,
                direction=Direction.INCREASING,
                series_tag="laguerre_power_law",
                family=PainleveFamily.sigma_v_laguerre(N, a),
                head=h0 / (a + 1.0),
            )
        )
    if isinstance(context, HardEdge):
        a = float(context.a)
        if not a > -1.0:
            raise DomainError("seed_sigma_v: need a > -1")
        if context.branch not in (1, 2):
            raise ParameterError("hard-edge branch must be 1 or 2")
        x = default_x0_hard(a) if t0 is None else float(t0)
        if not 0.0 < x <= 1e-2:
            raise DomainError("seed_sigma_v: need 0 < x0 <= 1e-2")
        s = 1.0 if context.branch == 1 else -1.0
        ja = special.jv(a, x)
        jp = special.jvp(a, x)
        # x J_a'' from Bessel's equation
        xjpp = -jp - (x - a * a / x) * ja
        G = specfun.bessel_product_gap(a, x)
        p1 = -0.5 * s * x * ja
        p2 = -0.25 * x * x * G
        y = p1 + p2
        y1 = -0.5 * s * (ja + x * jp) - 0.5 * x * ja * ja
        y2 = -0.5 * s * (2.0 * jp + xjpp) - 0.5 * (ja * ja + 2.0 * x * ja * jp)
        head = p1 / (a + 1.0) + p2 / (2.0 * a + 2.0)
        return _checked(
            BoundarySeed(
                t0=x, h0=y, h1=y1, h2=y2,
                direction=Direction.INCREASING,
                series_tag=f"bessel_hard_edge_branch{context.branch}",
                family=PainleveFamily.sigma_v_hard_edge(a),
                head=head,
                physical=(x, y, y1, y2),
            )
        )
    raise ParameterError("seed_sigma_v context must be FiniteLaguerre or HardEdge")


def seed_sigma_vi(weights, N: int, t0: float = 1e-3) -> BoundarySeed:
    """Seed h_VI for E_2(0;(-1,-1+2t);(1-x)^a(1+x)^b;N) from the Gram route.

    The derivatives of log E at t0 are exact trace identities of the Gram
    determinant, so no finite differencing is involved.
    """
    from .oracle import gram_log_derivatives

    a, b = (float(w) for w in weights)
    if not (a > -1.0 and b > -1.0) or N < 1:
        raise DomainError("seed_sigma_vi: need a, b > -1 and N >= 1")
    t0 = float(t0)
    if not 1e-6 <= t0 <= 1e-2:
        raise DomainError("seed_sigma_vi: need 1e-6 <= t0 <= 1e-2")
    fam = PainleveFamily.sigma_vi_jacobi(a, b, N)
    b1, b2, b3, b4 = fam.params
    L0, L1, L2, L3 = gram_log_derivatives(a, b, N, t0)
    t = t0
    ht = t * (t - 1.0) * L1
    ht1 = (2.0 * t - 1.0) * L1 + t * (t - 1.0) * L2
    ht2 = 2.0 * L1 + 2.0 * (2.0 * t - 1.0) * L2 + t * (t - 1.0) * L3
    h0 = ht - b1 * b2 * t + 0.5 * (b1 * b2 + b3 * b4)
    h1 = ht1 - b1 * b2
    return _checked(
        BoundarySeed(
            t0=t0, h0=h0, h1=h1, h2=ht2,
            direction=Direction.INCREASING,
            series_tag="gram_determinant",
            family=fam,
            head=L0,
        )
    )


# --------------------------------------------------------------------------
# Integration
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SigmaSolution:
    """Solved trajectory on ``grid``.

    ``cumulative`` is the integral of the tau integrand from the anchor to
    each grid point (log tau up to sign); ``evaluate`` and ``integral`` give
    the same quantities anywhere inside ``span``.
    """

    family: PainleveFamily
    grid: np.ndarray
    h: np.ndarray
    h_prime: np.ndarray
    h_second: np.ndarray
    cumulative: np.ndarray
    residual_max: float
    seed: BoundarySeed
    span: tuple
    tol: float
    _dense: Callable = field(repr=False, compare=False, default=None)

    def _check(self, t):
        t = np.asarray(t, dtype=float)
        lo, hi = min(self.span), max(self.span)
        if np.any(t < lo - 1e-12 * abs(lo) - 1e-300) or np.any(t > hi + 1e-12 * abs(hi) + 1e-300):
            raise CoverageError(f"{self.family.label}: {t} outside trajectory span {self.span}")
        return np.clip(t, lo, hi)

    def evaluate(self, t):
        """(h, h', h'') at ``t``; floats for scalar ``t``."""
        scalar = np.ndim(t) == 0
        vals = self._dense(np.atleast_1d(self._check(t)))[:3]
        return tuple(float(v[0]) for v in vals) if scalar else vals

    def integral(self, t):
        """Cumulative tau integral at ``t``; a float for scalar ``t``."""
        scalar = np.ndim(t) == 0
        vals = self._dense(np.atleast_1d(self._check(t)))[3]
        return float(vals[0]) if scalar else vals


def _grid_ok(seed: BoundarySeed, grid: np.ndarray):
    if grid.ndim != 1 or grid.size < 2:
        raise DomainError("integrate: grid needs at least two points")
    if abs(grid[0] - seed.t0) > 1e-12 * abs(seed.t0):
        raise DomainError("integrate: grid must start at seed.t0")
    d = np.diff(grid)
    if seed.direction is Direction.INCREASING:
        if np.any(d <= 0):
            raise DomainError("integrate: grid must increase from seed.t0")
    else:
        if np.any(d >= 0):
            raise DomainError("integrate: grid must decrease from seed.t0")


def _solve(fam: PainleveFamily, seed: BoundarySeed, end: float, rtol: float):
    if fam.log_variable:
        v0 = seed.t0

        def rhs(u, z):
            v = math.exp(u)
            h, h1, h2 = z[0], z[1] / v, z[2] / (v * v)
            j = (fam.third(v, h, h1, h2) + fam.stabilizer(v, h, h1, h2)) * v**3
            return [z[1], z[1] + z[2], 2.0 * z[2] + j, fam.integrand(v, h)]

        def blow(u, z):
            return H2_LIMIT - abs(z[2])

        y0 = [seed.h0, v0 * seed.h1, v0 * v0 * seed.h2, seed.head]
        span = (math.log(v0), math.log(end))
    else:
        sign = 1.0 if seed.direction is Direction.INCREASING else -1.0

        def rhs(t, z):
            h, h1, h2 = z[0], z[1], z[2]
            return [h1, h2, fam.third(t, h, h1, h2) + fam.stabilizer(t, h, h1, h2), sign * fam.integrand(t, h)]

        def blow(t, z):
            return H2_LIMIT - abs(z[2])

        y0 = [seed.h0, seed.h1, seed.h2, seed.head]
        span = (seed.t0, end)
    blow.terminal = True
    # integrate chunk by chunk, resetting the absolute floor from the current
    # state magnitude: the state can grow by many decades, and a fixed floor
    # would demand resolution of rounding noise in components that vanish
    step = math.log(100.0) if fam.log_variable else 1.0
    n_chunks = max(1, math.ceil(abs(span[1] - span[0]) / step))
    edges = np.linspace(span[0], span[1], n_chunks + 1)
    pieces = []
    y = np.asarray(y0, dtype=float)
    for lo, hi in zip(edges[:-1], edges[1:]):
        atol = max(rtol * 1e-3 * float(np.max(np.abs(y[:3]))), 1e-300)
        try:
            sol = solve_ivp(rhs, (lo, hi), y, method="DOP853", rtol=rtol, atol=atol, dense_output=True, events=blow)
        except ZeroDivisionError as exc:
            raise SingularityError(f"{fam.label}: explicit-form denominator vanished") from exc
        if sol.status == 1:
            where = math.exp(sol.t[-1]) if fam.log_variable else sol.t[-1]
            raise SingularityError(f"{fam.label}: |h''| exceeded {H2_LIMIT:g} at {where:.6g}")
        if sol.status != 0:
            raise SingularityError(f"{fam.label}: integration failed ({sol.message})")
        pieces.append(sol.sol)
        y = sol.y[:, -1]
    inner = edges[1:-1]
    increasing = span[1] > span[0]

    def raw(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        if increasing:
            idx = np.searchsorted(inner, s, side="right")
        else:
            idx = np.searchsorted(-inner, -s, side="right")
        out = np.empty((4, s.size))
        for k in np.unique(idx):
            m = idx == k
            out[:, m] = pieces[k](s[m])
        return out

    if fam.log_variable:

        def dense(v):
            v = np.atleast_1d(np.asarray(v, dtype=float))
            z = raw(np.log(v))
            return np.array([z[0], z[1] / v, z[2] / (v * v), z[3]])
    else:
        dense = raw

    return dense


def _check_points(fam: PainleveFamily, seed: BoundarySeed, end: float, grid: np.ndarray) -> np.ndarray:
    if fam.log_variable:
        extra = np.exp(np.linspace(math.log(seed.t0), math.log(end), 400))
    else:
        extra = np.linspace(seed.t0, end, 400)
    return np.concatenate([grid, extra])


def integrate(
    family: PainleveFamily,
    seed: BoundarySeed,
    grid,
    tol: float = DEFAULT_TOL,
) -> SigmaSolution:
    """Integrate ``family`` from ``seed`` across ``grid``.

    The explicit third-order form is integrated with an 8th-order
    Dormand-Prince pair at rtol = tol * 1e-4 (not below 3e-14). The
    relative residual of the undifferentiated equation is evaluated on the
    grid and on 400 extra points; if it exceeds ``tol`` the run is repeated
    once at the tightest rtol before a ToleranceError is raised.
    """
    if seed.family != family:
        raise ParameterError("seed was built for a different family")
    if not 1e-14 <= tol <= 1e-2:
        raise DomainError("integrate: tol must lie in [1e-14, 1e-2]")
    grid = np.asarray(grid, dtype=float)
    _grid_ok(seed, grid)
    end = grid[-1]
    points = _check_points(family, seed, end, grid)
    rtols = [max(tol * 1e-4, 3e-14)]
    if rtols[0] > 3e-14:
        rtols.append(3e-14)
    worst = math.inf
    for rtol in rtols:
        dense = _solve(family, seed, end, rtol)
        vals = dense(points)
        worst = max(
            relative_residual(family, t, h, h1, h2) for t, h, h1, h2 in zip(points, *vals[:3])
        )
        if worst <= tol:
            break
    else:
        raise ToleranceError(f"{family.label}: residual {worst:.2e} exceeds tol {tol:g}")
    out = dense(grid)
    return SigmaSolution(
        family=family,
        grid=grid,
        h=out[0],
        h_prime=out[1],
        h_second=out[2],
        cumulative=out[3],
        residual_max=float(worst),
        seed=seed,
        span=(seed.t0, float(end)),
        tol=tol,
        _dense=dense,
    )


def hamilton_p2(alpha: float, t0: float, q0: float, p0: float, grid, rtol: float = 1e-13, r0: float | None = None):
    """Hamilton equations of H = -(2q^2 - p + t) p/2 - (alpha + 1/2) q.

    q' = p - q^2 - t/2, p' = 2 q p + alpha + 1/2. Returns (q, p, H) on the
    grid; BlowUpError if |q| exceeds 1e8.

    The flow is integrated in r = p - t/2, since p itself is close to t/2
    wherever q is small and q' would be lost to rounding. Pass ``r0`` to
    give the shifted momentum directly when p0 - t0/2 would cancel.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise DomainError("hamilton_p2: grid needs at least two points")
    d = np.diff(grid)
    if not (np.all(d > 0) or np.all(d < 0)):
        raise DomainError("hamilton_p2: grid must be monotone")
    if grid[0] != t0:
        raise DomainError("hamilton_p2: grid must start at t0")
    c = alpha + 0.5
    r0 = p0 - 0.5 * t0 if r0 is None else float(r0)

    def rhs(t, y):
        q, r = y
        return [r - q * q, 2.0 * q * r + t * q + alpha]

    def blow(t, y):
        return 1e8 - abs(y[0])

    blow.terminal = True
    atol = 1e-30 + rtol * 1e-6 * max(abs(q0), abs(r0))
    sol = solve_ivp(rhs, (t0, grid[-1]), [q0, r0], method="DOP853", t_eval=grid, rtol=rtol, atol=atol, events=blow)
    if sol.status != 0 or sol.t.size != grid.size:
        raise BlowUpError("hamilton_p2: |q| exceeded 1e8")
    q, r = sol.y
    p = r + 0.5 * grid
    H = -0.5 * (2.0 * q * q - r + 0.5 * grid) * p - c * q
    return q, p, H
