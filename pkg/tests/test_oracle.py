import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate as sint

from rmtgap import gap_prob, oracle, specfun
from rmtgap.errors import DomainError, ParameterError
from rmtgap.oracle import KernelSpec, Weight


# --------------------------------------------------------------------------
# Fredholm determinants
# --------------------------------------------------------------------------


@pytest.mark.parametrize("kind", ["sine", "airy", "bessel"])
def test_empty_interval_is_one(kind):
    assert oracle.fredholm_det(KernelSpec(kind, 0.5, 0.5)) == 1.0


def test_sine_self_convergence():
    k = KernelSpec("sine", -0.5, 0.5)
    assert oracle.fredholm_det(k, 60, check=False) == pytest.approx(oracle.fredholm_det(k, 120, check=False), abs=1e-10)


@pytest.mark.parametrize("s", [0.3, 0.7])
def test_even_odd_split(s):
    even = oracle.fredholm_det(KernelSpec("sine_even", 0.0, s))
    odd = oracle.fredholm_det(KernelSpec("sine_odd", 0.0, s))
    assert even * odd == pytest.approx(oracle.fredholm_det(KernelSpec("sine", -s, s)), abs=1e-9)


def test_small_interval_expansion():
    # det(I - K) = 1 - trace K + O(s^4) with unit density
    s = 1e-3
    assert oracle.fredholm_det(KernelSpec("sine", -s, s)) == pytest.approx(1 - 2 * s, abs=1e-8)


def test_bessel_a_half_is_odd_sine():
    # the Bessel kernel at a = 1/2 is the odd sine kernel in x = sqrt(t)/pi
    s = 2.0
    bessel = oracle.fredholm_det(KernelSpec("bessel", 0.0, s, 0.5))
    odd = oracle.fredholm_det(KernelSpec("sine_odd", 0.0, math.sqrt(s) / math.pi))
    assert bessel == pytest.approx(odd, abs=1e-9)


def test_kernel_spec_validation():
    with pytest.raises(ParameterError):
        KernelSpec("cosine", 0.0, 1.0)
    with pytest.raises(ParameterError):
        KernelSpec("sine", 1.0, 0.0)
    with pytest.raises(ParameterError):
        KernelSpec("sine", 0.0, math.inf)
    with pytest.raises(ParameterError):
        KernelSpec("bessel", 0.0, 1.0, -1.0)
    with pytest.raises(ParameterError):
        KernelSpec("sine_even", 0.1, 1.0)
    with pytest.raises(DomainError):
        oracle.fredholm_det(KernelSpec("sine", 0.0, 1.0), order=5)


def test_airy_truncation():
    L = oracle.airy_truncation(-2.0)
    assert specfun.airy(-2.0 + L)[0] ** 2 == pytest.approx(1e-18, rel=1e-6)


# --------------------------------------------------------------------------
# Transcendents
# --------------------------------------------------------------------------


def test_hastings_mcleod_seed_and_validation():
    hm = oracle.hastings_mcleod(np.array([10.0, 8.0, 0.0]))
    assert hm.q[1] / -specfun.airy(8.0)[0] == pytest.approx(1.0, abs=1e-8)
    assert hm.residual_max <= 1e-8
    with pytest.raises(DomainError):
        oracle.hastings_mcleod(np.array([7.0, 0.0]))
    with pytest.raises(DomainError):
        oracle.hastings_mcleod(np.array([10.0, -9.0]))
    with pytest.raises(DomainError):
        oracle.hastings_mcleod(np.array([0.0, 10.0]))


def test_hastings_mcleod_self_consistency():
    grid = np.array([10.0, 0.0])
    a = oracle.hastings_mcleod(grid, rtol=1e-12).q[1]
    b = oracle.hastings_mcleod(grid, rtol=1e-13).q[1]
    assert a == pytest.approx(b, abs=1e-6)


def test_hastings_mcleod_f2_vs_airy_determinant():
    hm = oracle.hastings_mcleod(np.array([10.0, 0.0]))
    det = oracle.fredholm_det(KernelSpec("airy", 0.0, math.inf))
    assert oracle.f2_from_q(hm)[1] == pytest.approx(det, abs=1e-6)


def test_hastings_mcleod_known_value():
    # q(0) of the Hastings-McLeod solution, -Ai convention
    hm = oracle.hastings_mcleod(np.array([10.0, 0.0]))
    assert hm.q[1] == pytest.approx(-0.36706155154807, abs=1e-9)


def test_hard_edge_q_seed():
    a = 0.5
    hq = oracle.hard_edge_q(a, np.array([1e-6, 1e-5, 1.0]))
    assert hq.q[0] / specfun.bessel_j(a, 1e-3) == pytest.approx(1.0, abs=1e-8)
    assert hq.residual_max <= 1e-8


def test_hard_edge_q_a_half_bounded():
    grid = np.linspace(1e-6, 4.0, 80)
    hq = oracle.hard_edge_q(0.5, grid)
    assert np.all(hq.q > 0.0) and np.all(hq.q < 1.0)


def test_hard_edge_q_a_zero_is_one():
    hq = oracle.hard_edge_q(0.0, np.array([1e-6, 1.0, 3.0]))
    assert np.all(hq.q == 1.0)


def test_hard_edge_e1_against_gap_prob():
    hq = oracle.hard_edge_q(1.0, np.array([1e-6, 1.0]))
    ref = oracle.e1_hard_from_q(hq)[1]
    assert gap_prob.e_hard(1, 1.0, 1.0).probability == pytest.approx(ref, abs=1e-6)


def test_hard_edge_e2_against_bessel_determinant():
    hq = oracle.hard_edge_q(0.5, np.array([1e-6, 2.0]))
    det = oracle.fredholm_det(KernelSpec("bessel", 0.0, 2.0, 0.5))
    assert oracle.e2_hard_from_q(hq)[1] == pytest.approx(det, abs=1e-6)


def test_hard_edge_q_validation():
    with pytest.raises(DomainError):
        oracle.hard_edge_q(-1.0, [1e-6, 1.0])
    with pytest.raises(DomainError):
        oracle.hard_edge_q(0.5, [1e-3, 1.0])
    with pytest.raises(DomainError):
        oracle.hard_edge_q(0.5, [1.0, 1e-6])


# --------------------------------------------------------------------------
# Gram determinants
# --------------------------------------------------------------------------


def test_gram_empty_and_closed_forms():
    assert oracle.e2_gram(("laguerre", 0.0), 3, None) == 1.0
    assert oracle.e2_gram(("jacobi", 0.0, 0.0), 3, (0.2, 0.2)) == 1.0
    assert oracle.e2_gram(("laguerre", 0.0), 1, (0.0, 1.0)) == pytest.approx(math.exp(-1), abs=1e-13)
    assert oracle.e2_gram(("jacobi", 0.0, 0.0), 1, (-1.0, -0.5)) == pytest.approx(0.75, abs=1e-13)


@pytest.mark.parametrize("a", [0.0, 0.5, 2.0])
def test_gram_laguerre_n1_is_incomplete_gamma(a):
    t = 1.7
    ref = specfun.gamma_upper(a + 1, t) / specfun.gamma_fn(a + 1)
    assert oracle.e2_gram(("laguerre", a), 1, (0.0, t)) == pytest.approx(ref, rel=1e-12)


def test_gram_laguerre_n2_direct_integral():
    # E_2 for N = 2 as a double integral of the joint density
    a, t = 0.5, 1.3
    f = lambda y, x: (x * y) ** a * math.exp(-x - y) * (x - y) ** 2
    num, _ = sint.dblquad(f, t, 60.0, t, 60.0, epsabs=1e-13, epsrel=1e-12)
    den, _ = sint.dblquad(f, 0.0, 60.0, 0.0, 60.0, epsabs=1e-13, epsrel=1e-12)
    assert oracle.e2_gram(("laguerre", a), 2, (0.0, t)) == pytest.approx(num / den, abs=1e-9)


def test_gram_large_n_well_conditioned():
    v = oracle.e2_gram(("jacobi", 0.5, 0.5), 30, (-1.0, -0.9))
    assert 0.0 < v < 1.0


def test_gram_validation():
    with pytest.raises(DomainError):
        oracle.e2_gram(("laguerre", 0.0), 31, (0.0, 1.0))
    with pytest.raises(ParameterError):
        oracle.e2_gram(("hermite",), 2, (0.0, 1.0))
    with pytest.raises(DomainError):
        oracle.e2_gram(("jacobi", 0.0, 0.0), 2, (-2.0, 0.0))


def test_gram_log_derivatives_match_differences():
    a, b, N, t, d = 0.3, 0.7, 3, 0.2, 1e-5
    L0, L1, L2, L3 = oracle.gram_log_derivatives(a, b, N, t)
    f = lambda x: oracle.gram_log_derivatives(a, b, N, x)
    assert L0 == pytest.approx(math.log(oracle.e2_gram(("jacobi", a, b), N, (-1.0, -1.0 + 2 * t))), abs=1e-12)
    assert L1 == pytest.approx((f(t + d)[0] - f(t - d)[0]) / (2 * d), rel=1e-7)
    assert L2 == pytest.approx((f(t + d)[1] - f(t - d)[1]) / (2 * d), rel=1e-7)
    assert L3 == pytest.approx((f(t + d)[2] - f(t - d)[2]) / (2 * d), rel=1e-6)


# --------------------------------------------------------------------------
# Brute force
# --------------------------------------------------------------------------


def test_brute_force_empty_is_one():
    assert oracle.brute_force_pdf(1, Weight.gaussian(), 2, None) == 1.0
    assert oracle.brute_force_pdf(2, Weight.gaussian(), 2, (0.3, 0.3)) == 1.0


def test_brute_force_gaussian_reference():
    v = oracle.brute_force_pdf(1, Weight.gaussian(0.5), 2, (-0.5, 0.5))
    assert v == pytest.approx(0.479500122187, abs=1e-9)


def test_brute_force_beta2_matches_gram():
    v = oracle.brute_force_pdf(2, Weight.laguerre(0.5), 2, (0.0, 1.3))
    assert v == pytest.approx(oracle.e2_gram(("laguerre", 0.5), 2, (0.0, 1.3)), abs=1e-7)
    v = oracle.brute_force_pdf(2, Weight.jacobi(0.5, -0.5), 3, (-1.0, -0.4))
    assert v == pytest.approx(oracle.e2_gram(("jacobi", 0.5, -0.5), 3, (-1.0, -0.4)), abs=1e-7)


def test_brute_force_circle_one_eigenvalue():
    # one uniform angle misses an arc of length 2 phi with probability 1 - phi/pi
    phi = 0.8
    assert oracle.brute_force_pdf(2, Weight.circle(), 1, (-phi, phi)) == pytest.approx(1 - phi / math.pi, abs=1e-12)


def test_brute_force_validation():
    with pytest.raises(DomainError):
        oracle.brute_force_pdf(3, Weight.gaussian(), 2, (0.0, 1.0))
    with pytest.raises(DomainError):
        oracle.brute_force_pdf(1, Weight.gaussian(), 5, (0.0, 1.0))


@given(st.floats(0.05, 1.0), st.floats(0.05, 1.0))
def test_brute_force_monotone_in_interval(s1, s2):
    lo, hi = sorted((s1, s2))
    w = Weight.gaussian(0.5)
    a = oracle.brute_force_pdf(2, w, 2, (-lo, lo))
    b = oracle.brute_force_pdf(2, w, 2, (-hi, hi))
    assert b <= a + 1e-9
