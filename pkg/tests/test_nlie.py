import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from ironface.asymptotics import xx_free_energy
from ironface.errors import GridTooCoarse, OutOfStrip
from ironface.nlie import (NlieConfig, correlation, driving, f_hat, fold_kappa, free_energy,
                           ground_energy_density, kernel, ln_eigenvalue, solve, with_overrides)
from ironface.weights import Regime

FF = Regime.critical(np.pi / 2)


def test_e0_free_fermion():
    assert ground_energy_density(0.0, FF) == pytest.approx(-4 / np.pi, abs=1e-10)


def test_e0_decays():
    assert abs(ground_energy_density(30.0, Regime.critical(np.pi / 3))) < 1e-12


def test_e0_massive_series_converged():
    reg = Regime.from_delta(1.5)
    g = reg.gamma
    # independent summation with a much longer range
    k = np.arange(-2000, 2001)
    ref = -2 * np.sinh(g) * np.sum(2 * np.exp(-2 * g * np.abs(k)) / (1 + np.exp(-2 * g * np.abs(k))))
    assert ground_energy_density(0.0, reg) == pytest.approx(ref, abs=1e-12)


def test_k_kernel_at_origin():
    g = 1.1
    assert kernel("K", 0.0, Regime.critical(g)).real == pytest.approx(np.pi / g, rel=1e-15)


def test_k_kernel_integrates_to_pi():
    g = 0.8
    val, _ = integrate.quad(lambda x: kernel("K", x, Regime.critical(g)).real, -np.inf, np.inf)
    assert val == pytest.approx(np.pi, rel=1e-10)


@pytest.mark.xfail(strict=True, reason="with the (1/2pi) dy convolution measure the kernel is "
                   "(pi/gamma)/cosh(pi x/gamma); K(0) = pi only at gamma = 1")
def test_k_kernel_equals_pi_at_origin_for_any_gamma():
    assert kernel("K", 0.0, FF).real == pytest.approx(np.pi, rel=1e-12)


def test_f_vanishes_at_free_fermion_point():
    for x in (0.0, 0.7, -3.0):
        assert kernel("F", x, FF) == 0


def test_f_at_origin_against_direct_quadrature():
    g = np.pi / 3
    ref, _ = integrate.quad(lambda k: f_hat(k, g), -80, 80, limit=500, epsabs=1e-14)
    assert kernel("F", 0.0, Regime.critical(g)).real == pytest.approx(ref, abs=1e-10)


@settings(max_examples=15)
@given(g=st.floats(0.3, 2.8), x=st.floats(-3, 3), y=st.floats(-0.9, 0.9))
def test_kernel_symmetry(g, x, y):
    reg = Regime.critical(g)
    z = complex(x, y * g / 2)
    for kind in ("K", "F"):
        a, b = kernel(kind, z, reg), kernel(kind, -z, reg)
        assert abs(a - b) < 1e-9 * max(1.0, abs(a))
        assert abs(kernel(kind, z.conjugate(), reg) - np.conj(a)) < 1e-9 * max(1.0, abs(a))


@given(g=st.floats(0.3, 2.0), x=st.floats(-1.5, 1.5), y=st.floats(-0.9, 0.9))
def test_massive_kernel_symmetry(g, x, y):
    reg = Regime.massive(g)
    z = complex(x, y * g / 2)
    for kind in ("K", "F"):
        a = kernel(kind, z, reg)
        assert abs(a - kernel(kind, -z, reg)) < 1e-12 * max(1.0, abs(a))
        assert abs(a - kernel(kind, z + np.pi, reg)) < 1e-9 * max(1.0, abs(a))


def test_out_of_strip():
    reg = Regime.critical(1.0)
    with pytest.raises(OutOfStrip):
        kernel("F", 0.2 + 1.0j, reg)
    with pytest.raises(OutOfStrip):
        kernel("K", 0.5j, reg)
    with pytest.raises(OutOfStrip):
        kernel("F", 0.95j, reg, epsilon=0.1)
    with pytest.raises(ValueError):
        kernel("Q", 0.0, reg)


def test_driving_terms():
    beta = 1.7
    dp, dm = driving(0.0, beta, 0.0, 0.0, FF)
    assert dp == pytest.approx(-4 * beta, abs=1e-14)
    assert dm == dp
    dp, _ = driving(0.0, beta, 0.0, np.pi / 2, FF)
    assert dp == pytest.approx(-4 * beta - 1j * np.pi, abs=1e-14)
    g, J, phi = 1.2, 0.3, 0.4
    dp, dm = driving(40.0, beta, J, phi, Regime.critical(g))
    lim = (beta * J - 1j * phi) * np.pi / (np.pi - g)
    assert dp == pytest.approx(lim, abs=1e-12)
    assert dm == pytest.approx(-lim, abs=1e-12)


def test_free_fermion_solution_is_the_driving_term():
    sol = solve(3.0, 0.0, 0.0, FF)
    assert sol.iterations == 1
    dp, _ = driving(sol.grid.nodes, 3.0, 0.0, 0.0, FF)
    assert np.abs(sol.ln_b - dp).max() < 1e-13


@pytest.mark.parametrize("T", [0.1, 1.0, 10.0])
def test_free_fermion_free_energy(T):
    pt, _ = free_energy(1 / T, 0.0, 0.0)
    assert pt.f == pytest.approx(xx_free_energy(T), abs=1e-6)


def test_grid_refinement_is_stable():
    a, _ = free_energy(1.0, 0.0, 0.5)
    b, _ = free_energy(1.0, 0.0, 0.5, NlieConfig(points=8192))
    assert abs(a.f - b.f) < 1e-9


def test_high_temperature_limit():
    for beta in (0.01, 0.02):
        pt, _ = free_energy(beta, 0.0, 0.5)
        assert abs(pt.f + np.log(2) / beta + 0.5) < 2 * beta


def test_thermodynamic_identities():
    pt, _ = free_energy(2.0, 0.0, 0.3)
    assert pt.s == pytest.approx(pt.beta * (pt.e - pt.f), rel=1e-12)
    assert pt.c > 0 and 0 < pt.s < np.log(2)


def test_specific_heat_matches_energy_derivative():
    T, h = 0.5, 1e-3
    c = free_energy(1 / T, 0.0, 0.0)[0].c
    e_p = free_energy(1 / (T + h), 0.0, 0.0)[0].e
    e_m = free_energy(1 / (T - h), 0.0, 0.0)[0].e
    assert c == pytest.approx((e_p - e_m) / (2 * h), rel=1e-4)


def test_massive_low_temperature_approach_is_faster_than_power_law():
    reg_delta = 1.5
    e0 = ground_energy_density(0.0, Regime.from_delta(reg_delta))
    d1 = free_energy(10.0, 0.0, reg_delta)[0].f - e0
    d2 = free_energy(20.0, 0.0, reg_delta)[0].f - e0
    assert abs(d2) < 1e-4
    # halving T shrinks the gap by far more than the factor 4 of a T^2 law
    assert abs(d1 / d2) > 8


def test_massive_high_temperature_limit():
    sol = solve(0.01, 0.0, 0.0, Regime.from_delta(1.5))
    val = (ln_eigenvalue(0.0, sol).real - np.log(2)) / 0.01
    assert val == pytest.approx(1.5, abs=0.05)


def test_warm_start_reproduces_cold_solution():
    reg = Regime.from_delta(0.4)
    cold = solve(2.0, 0.1, 0.0, reg)
    warm = solve(2.0, 0.1, 0.0, reg, init=solve(1.8, 0.1, 0.0, reg))
    assert abs(ln_eigenvalue(0.0, cold) - ln_eigenvalue(0.0, warm)) < 1e-9


def test_twisted_solve_converges():
    sol = solve(5.0, 0.0, 1.0, Regime.from_delta(0.3))
    assert sol.method == "newton-krylov" and sol.residual < 1e-9


def test_free_fermion_correlation_at_low_temperature():
    pt = correlation(50.0, 0.0, 0.0)
    assert pt.beta_over_xi == pytest.approx(np.pi / 8, rel=0.02)
    assert pt.kappa == pytest.approx(np.pi / 2, abs=1e-3)


def test_grid_too_coarse():
    with pytest.raises(GridTooCoarse):
        solve(200.0, 0.0, 0.0, Regime.critical(1.0), NlieConfig(x_max=2.0, points=64))


def test_fold_kappa():
    assert fold_kappa(-0.3) == pytest.approx(0.3)
    assert fold_kappa(2 * np.pi + 0.3) == pytest.approx(0.3)


@pytest.mark.parametrize("kw", [dict(points=1000), dict(x_max=-1.0), dict(mixing=0.0),
                                dict(tol=1e-16), dict(phi_offsets=(0.1, 0.05)),
                                dict(epsilon=-0.1), dict(max_iter=0)])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        NlieConfig(**kw)


def test_with_overrides_ignores_none():
    c = with_overrides(NlieConfig(), points=2048, tol=None)
    assert c.points == 2048 and c.tol == NlieConfig().tol


def test_nonpositive_beta_rejected():
    with pytest.raises(ValueError):
        solve(0.0, 0.0, 0.0, FF)
