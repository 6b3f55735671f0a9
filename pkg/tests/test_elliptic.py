import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blaschke_dyn import elliptic
from blaschke_dyn.errors import DomainError

mpmath.mp.dps = 30


def _mp_k(q):
    q = mpmath.mpf(q)
    return float(mpmath.jtheta(2, 0, q) ** 2 / mpmath.jtheta(3, 0, q) ** 2)


# --- moduli ----------------------------------------------------------------

def test_modular_tau_rejects_lower_half_plane():
    with pytest.raises(DomainError):
        elliptic.ModularTau(1.0 - 0.5j)


def test_modulus_at_q_exp_minus_one():
    # tau = i/pi  <=>  q = e^{-1}
    d = elliptic.modulus_data(1j / math.pi)
    assert d.nome_q.real == pytest.approx(math.exp(-1), rel=1e-15)
    assert d.k == pytest.approx(_mp_k(mpmath.e ** -1), rel=1e-14)


def test_modulus_at_square_lattice():
    d = elliptic.modulus_data(1j)
    assert d.k == pytest.approx(1 / math.sqrt(2), rel=1e-14)
    assert d.K == pytest.approx(d.Kp, rel=1e-14)


def test_large_imaginary_tau_limits():
    d = elliptic.modulus_data(40j)
    # k ~ 4 q^(1/2) as q -> 0
    assert d.k == pytest.approx(4 * math.exp(-20 * math.pi), rel=1e-12)
    assert d.K == pytest.approx(math.pi / 2, rel=1e-14)


@pytest.mark.parametrize("s", [0.05, 0.3, 1.0, 2.5, 7.0])
def test_quarter_period_ratio(s):
    d = elliptic.modulus_data(1j * s)
    assert abs(d.Kp / d.K + 1j * (1j * s)) < 1e-10
    assert abs(d.modulus_k ** 2 + d.comp_modulus_kp ** 2 - 1) < 1e-12


@pytest.mark.parametrize("s", [0.2, 0.7, 1.6])
def test_quarter_period_matches_mpmath(s):
    d = elliptic.modulus_data(1j * s)
    m = 1 - mpmath.mpf(d.kp) ** 2
    assert d.K == pytest.approx(float(mpmath.ellipk(m)), rel=1e-13)


def test_complex_tau_identities():
    tau = 0.5 + 1.0j
    d = elliptic.modulus_data(tau)
    assert abs(d.modulus_k ** 2 + d.comp_modulus_kp ** 2 - 1) < 1e-12
    q = complex(d.nome_q)
    want = complex(mpmath.jtheta(2, 0, q) ** 2 / mpmath.jtheta(3, 0, q) ** 2)
    assert abs(d.modulus_k - want) < 1e-13


def test_gamma_half_is_sqrt_k_at_q_exp_minus_two():
    assert elliptic.gamma_of_t(0.5) == pytest.approx(math.sqrt(_mp_k(mpmath.e ** -2)), rel=1e-14)


def test_gamma_limits_and_domain():
    assert elliptic.gamma_of_t(1e-3) == pytest.approx(1.0, abs=1e-15)
    # gamma(t) ~ 2 exp(-t) for large t
    assert elliptic.gamma_of_t(60.0) == pytest.approx(2 * math.exp(-60.0), rel=1e-12)
    with pytest.raises(DomainError):
        elliptic.gamma_of_t(0.0)


def test_gamma_strictly_decreasing_on_log_grid():
    ts = np.logspace(-2, 2, 50)
    g = np.array([elliptic.gamma_of_t(t) for t in ts])
    c = np.array([elliptic.gamma_complement(t) for t in ts])
    # strictly decreasing means 1 - gamma strictly increasing; either column resolves each step
    for i in range(49):
        assert g[i + 1] < g[i] or c[i + 1] > c[i]
    np.testing.assert_allclose(1 - g[g < 0.9], c[g < 0.9], rtol=1e-9)


# --- Jacobi functions ------------------------------------------------------

def test_jacobi_initial_values():
    j = elliptic.jacobi_functions(0.0, 0.6)
    assert (j.sn, j.cn, j.dn, j.cd) == pytest.approx((0, 1, 1, 1))


def test_cd_at_K_and_half_K():
    k = 0.8
    kp = math.sqrt(1 - k * k)
    big_k, _ = elliptic.quarter_periods(k)
    assert abs(elliptic.jacobi_functions(big_k, k).cd) < 1e-15
    assert elliptic.jacobi_functions(big_k / 2, k).cd.real == pytest.approx(1 / math.sqrt(1 + kp), rel=1e-14)


@pytest.mark.parametrize("k", [0.1, 0.5, 0.9, 0.99999])
def test_jacobi_against_mpmath(k):
    m = k * k
    us = [0.3, 1.7, -2.2 + 0.4j, 0.9 + 1.3j, 5.0 - 0.2j]
    for u in us:
        j = elliptic.jacobi_functions(u, k)
        for name, got in (("sn", j.sn), ("cn", j.cn), ("dn", j.dn)):
            want = complex(mpmath.ellipfun(name, u, m=m))
            assert abs(got - want) < 1e-12 * max(1, abs(want)), (name, u)


@pytest.mark.parametrize("t", [4.0, 16.0])
def test_cd_relative_accuracy_with_tiny_modulus(t):
    # the imaginary-argument route needs cn(y, k') for k' near 1 and y up to K'/2
    d = elliptic.modulus_from_t(t)
    q = mpmath.exp(-4 * mpmath.mpf(t))
    m = (mpmath.jtheta(2, 0, q) / mpmath.jtheta(3, 0, q)) ** 4
    for frac in (0.2, 0.5, 0.8):
        u = 1.5 + 1j * frac * d.Kp
        want = complex(mpmath.ellipfun("cd", u, m=m))
        got = complex(elliptic.jacobi_functions(u, d.k, d.kp).cd)
        assert abs(got - want) < 1e-11 * abs(want)


def test_jacobi_tiny_argument_is_finite():
    for k in (0.0, 0.5, 0.999):
        j = elliptic.jacobi_functions(np.array([1e-300, -1e-170, 1e-9]), k)
        assert np.all(np.isfinite(j.sn)) and np.all(np.isfinite(j.cn))
        assert j.sn[1] == -1e-170 and j.cn[0] == 1.0


@settings(max_examples=200, deadline=None)
@given(x=st.floats(-20, 20), y=st.floats(-6, 6), k=st.floats(0.01, 0.999))
def test_jacobi_identities(x, y, k):
    j = elliptic.jacobi_functions(complex(x, y), k)
    if j.pole or not np.isfinite(j.sn) or abs(j.sn) > 1e6:
        return
    scale = max(1.0, abs(j.sn) ** 2)
    assert abs(j.sn ** 2 + j.cn ** 2 - 1) < 1e-12 * scale
    assert abs(j.dn ** 2 + k * k * j.sn ** 2 - 1) < 1e-12 * scale


def test_pole_is_flagged_not_raised():
    k = 0.5
    big_k, big_kp = elliptic.quarter_periods(k)
    j = elliptic.jacobi_functions(1j * big_kp, k)
    assert not np.isfinite(j.sn)
    assert j.cd == pytest.approx(1 / k)
    assert elliptic.jacobi_functions(big_k + 1j * big_kp, k).pole


# --- inverse cd ------------------------------------------------------------

def test_inverse_cd_trivial_points():
    k = 0.5
    big_k, big_kp = elliptic.quarter_periods(k)
    assert abs(elliptic.jacobi_functions(elliptic.inverse_cd(1.0, k), k).cd - 1) < 1e-10
    u0 = elliptic.inverse_cd(0.0, k)
    assert abs(elliptic.jacobi_functions(u0, k).cd) < 1e-10
    # lattice of cd: 4K, 2iK'
    r = (u0 - big_k) / (2 * big_k)
    assert abs(r - round(r.real)) < 1e-9 or abs(elliptic.jacobi_functions(u0, k).cd) < 1e-12


@settings(max_examples=150, deadline=None)
@given(x=st.floats(-3, 3), y=st.floats(-3, 3), k=st.floats(0.05, 0.98))
def test_inverse_cd_round_trip(x, y, k):
    w = complex(x, y)
    u = elliptic.inverse_cd(w, k)
    assert abs(elliptic.jacobi_functions(u, k).cd - w) < 1e-10 * max(1, abs(w))


def test_inverse_cd_far_and_infinite():
    k = 0.5
    for w in (50.0, -20 + 3j, 1e6j):
        u = elliptic.inverse_cd(w, k)
        got = elliptic.jacobi_functions(u, k).cd
        assert abs(got - w) / abs(w) < 1e-9
    assert elliptic.jacobi_functions(elliptic.inverse_cd(np.inf, k), k).pole


# --- Weierstrass -----------------------------------------------------------

def _g2g3_oracle(tau, terms=60):
    q2 = mpmath.exp(2j * mpmath.pi * tau)
    s3 = sum(mpmath.mpf(sum(d ** 3 for d in range(1, n + 1) if n % d == 0)) * q2 ** n
             for n in range(1, terms))
    s5 = sum(mpmath.mpf(sum(d ** 5 for d in range(1, n + 1) if n % d == 0)) * q2 ** n
             for n in range(1, terms))
    g2 = 4 * mpmath.pi ** 4 / 3 * (1 + 240 * s3)
    g3 = 8 * mpmath.pi ** 6 / 27 * (1 - 504 * s5)
    return complex(g2), complex(g3)


@pytest.mark.parametrize("tau", [1j, 0.5 + 1j, 0.1 + 0.8j, 2.3j])
def test_weierstrass_invariants(tau):
    wd = elliptic.weierstrass_data(tau)
    e = np.array(wd.e_values)
    assert abs(e.sum()) < 1e-11 * max(1, np.abs(e).max())
    g2, g3 = _g2g3_oracle(tau)
    assert abs(wd.g2 - g2) < 1e-10 * abs(g2)
    assert abs(wd.g3 - g3) < 1e-10 * max(1, abs(g3))
    for v in e:
        assert abs(4 * v ** 3 - g2 * v - g3) < 1e-9 * max(1, abs(g2) ** 1.5)


def test_square_lattice_middle_half_period_vanishes():
    assert abs(elliptic.weierstrass_p(0.5 + 0.5j, 1j)) < 1e-12


@pytest.mark.parametrize("tau", [1j, 0.5 + 1j, -0.4 + 0.6j])
def test_weierstrass_even_periodic_and_theta_agree(tau):
    z = np.array([0.21 + 0.13j, 0.37 - 0.2j, -0.3 + 0.41j, 0.05 + 0.3j])
    p = elliptic.weierstrass_p(z, tau)
    assert np.max(np.abs(p - elliptic.weierstrass_p(-z, tau))) < 1e-10
    assert np.max(np.abs(p - elliptic.weierstrass_p(z + 1, tau))) < 1e-8
    assert np.max(np.abs(p - elliptic.weierstrass_p(z + tau, tau))) < 1e-8
    assert np.max(np.abs(p - elliptic.weierstrass_p_theta(z, tau)) / np.abs(p)) < 1e-11


def test_weierstrass_differential_equation():
    tau = 0.3 + 1.2j
    wd = elliptic.weierstrass_data(tau)
    z = np.array([0.2 + 0.1j, 0.41 + 0.37j])
    p, dp = elliptic.weierstrass_p(z, tau, derivative=True)
    resid = dp ** 2 - (4 * p ** 3 - wd.g2 * p - wd.g3)
    assert np.max(np.abs(resid) / np.abs(dp) ** 2) < 1e-10


def test_weierstrass_pole_marker():
    assert elliptic.is_infinity(elliptic.weierstrass_p(1e-10, 1j))
    assert elliptic.is_infinity(elliptic.weierstrass_p(1.0 + 1j, 1j))


@pytest.mark.parametrize("tau", [1j, 0.5 + 1j])
def test_inverse_p_round_trip(tau):
    z0 = 0.3 + 0.2j
    x = elliptic.weierstrass_p(z0, tau)
    z = elliptic.inverse_p(x, tau)
    assert abs(elliptic.weierstrass_p(z, tau) - x) < 1e-10 * abs(x)
    d = min(elliptic.lattice_distance(z - z0, tau), elliptic.lattice_distance(z + z0, tau))
    assert d < 1e-8
    assert elliptic.inverse_p(np.inf, tau) == 0
