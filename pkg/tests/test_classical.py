"""Closed-form coupled-mode spectra and the saturable steady-state equations
(OBSE) with their semiclassical ODE counterpart."""

import numpy as np
import pytest

from disksim import (
    ObseParams,
    SystemParams,
    classical_amplitudes,
    classical_spectrum,
    classical_transmission_reflection,
    ghz_to_angular,
    obse_to_traveling,
    obse_xi0,
    obse_xi_pi2,
    semiclassical_ode,
)

from conftest import empty_cavity, family_a

# Spot values from an independent 2x2 linear solve of the coupled-mode
# equations (tests/oracles/oracle_classical_amplitudes.py), p_in = 0.02.
AMPLITUDE_CASES = {
    # (kappa_T, kappa_e, beta, xi, delta_lc) GHz -> (a_cw, a_ccw, T, R)
    (1.2, 0.44, 9.6, 0.0, -9.6): (
        0.001372909838755178 + 0.022138171149927315j,
        -0.0013729098387551867 + 0.021966557420082918j,
        0.399827064418504, 0.1339213143104194),
    (1.2, 0.44, 9.6, 0.0, 0.0): (
        0.000678534285692465j,
        -0.005428274285539721 + 0j,
        0.9775631821170283, 0.008146219592373438),
    (1.2, 0.44, 0.0, 0.0, 0.0): (
        0.04410472857001023j,
        0j,
        0.07111111111111108, 0.0),
    (7.9, 7.5, 7.9, 0.0, 3.7): (
        -0.0007019633602073346 + 0.015164129778617507j,
        -0.012166556510705103 - 0.006400224004461625j,
        0.004000552150209939, 0.8905848019735085),
}

# OBSE root sets for |X_+|^2 from the independent cubic-in-u solve
# (tests/oracles/oracle_obse.py).
OBSE_XI0_WEAK_U = 5.338173065398717e-08       # delta_lc=-15.6, dac=-9.6, p=1e-7
OBSE_XI0_TRIPLE_U = (0.004946433055191212,    # p_in=5, gamma_p=0, dlc=dac=-9.6
                     72.30272913071386,
                     1912.1679088281812)
OBSE_XI0_SINGLE_U = 1.110872722498328         # {6,0.3,0.2,0.05,0} GHz set
OBSE_PI2_WEAK_U = 5.025319036238103e-07       # delta_lc=-12.8, dac=0, p=1e-7


def _params(kt, ke, beta, xi, p_in=0.02):
    return SystemParams(g0=0.0, beta_mag=ghz_to_angular(beta), xi=xi,
                        kappa_i=ghz_to_angular(kt - ke), kappa_e=ghz_to_angular(ke),
                        gamma_par=0.0, gamma_p=0.0, p_in=p_in)


@pytest.mark.parametrize("case", list(AMPLITUDE_CASES))
def test_amplitudes_against_linear_solve(case):
    kt, ke, beta, xi, dlc = case
    a_cw_ref, a_ccw_ref, T_ref, R_ref = AMPLITUDE_CASES[case]
    p = _params(kt, ke, beta, xi)
    a_cw, a_ccw = classical_amplitudes(p, ghz_to_angular(dlc))
    assert a_cw == pytest.approx(a_cw_ref, abs=1e-15)
    assert a_ccw == pytest.approx(a_ccw_ref, abs=1e-15)
    T, R = classical_transmission_reflection(p, ghz_to_angular(dlc))
    assert T == pytest.approx(T_ref, abs=1e-13)
    assert R == pytest.approx(R_ref, abs=1e-13)


def test_backscattering_phase_does_not_move_the_doublet():
    p0 = _params(1.2, 0.44, 9.6, 0.0)
    p2 = _params(1.2, 0.44, 9.6, np.pi / 2)
    for dlc in (-9.6, -3.0, 0.0, 9.6):
        assert classical_transmission_reflection(p0, ghz_to_angular(dlc)) == \
            pytest.approx(classical_transmission_reflection(p2, ghz_to_angular(dlc)),
                          abs=1e-13)


def test_doublet_depth_identity():
    # At the standing-mode resonance with a deeply split doublet the dip
    # depth approaches (1 - kappa_e/kappa_T)^2.
    p = _params(1.2, 0.44, 9.6, 0.0)
    T, _ = classical_transmission_reflection(p, ghz_to_angular(-9.6))
    assert T == pytest.approx(0.39982706441850424, abs=1e-13)
    assert abs(T - (1 - 0.44 / 1.2) ** 2) < 0.01


def test_spectrum_is_drive_independent():
    grid = ghz_to_angular(np.linspace(-15, 15, 31))
    lo = classical_spectrum(_params(1.2, 0.44, 9.6, 0.0, p_in=1e-6), grid)
    hi = classical_spectrum(_params(1.2, 0.44, 9.6, 0.0, p_in=10.0), grid)
    np.testing.assert_allclose(np.asarray(lo), np.asarray(hi), atol=1e-12)


def test_spectrum_rejects_empty_grid():
    with pytest.raises(ValueError, match="empty"):
        classical_spectrum(_params(1.2, 0.44, 9.6, 0.0), [])


def test_obse_params_invariants():
    p = family_a(delta_ac_ghz=-9.6)
    ob = ObseParams.from_system(p, ghz_to_angular(-15.6))
    assert ob.n_s == pytest.approx(p.gamma_perp * p.gamma_par / (4 * p.g0 ** 2))
    assert ob.C == pytest.approx(p.g0 ** 2 / (2 * p.kappa_T * p.gamma_perp))
    assert ob.delta_cl == pytest.approx(ghz_to_angular(15.6))
    assert ob.delta_al == pytest.approx(ghz_to_angular(15.6 - 9.6))


def test_obse_requires_coupled_damped_qd():
    with pytest.raises(ValueError, match="g0"):
        ObseParams.from_system(empty_cavity(), 0.0)
    p = family_a(gamma_par=0.0)
    with pytest.raises(ValueError, match="gamma_par"):
        ObseParams.from_system(p, 0.0)


def test_obse_xi0_weak_drive_root():
    p = family_a(delta_ac_ghz=-9.6, p_in=1e-7)
    roots, x_minus = obse_xi0(ObseParams.from_system(p, ghz_to_angular(-15.6)))
    assert len(roots) == 1
    assert abs(roots[0]) ** 2 == pytest.approx(OBSE_XI0_WEAK_U, rel=1e-6)
    # the decoupled standing mode keeps its linear response
    ob = ObseParams.from_system(p, ghz_to_angular(-15.6))
    d_c = ob.delta_cl / ob.kappa_T
    b = ob.beta_mag / ob.kappa_T
    assert x_minus == pytest.approx(ob.Y / (1 + 1j * (d_c + b)), rel=1e-12)


def test_obse_xi0_bistable_triple():
    p = family_a(delta_ac_ghz=-9.6, p_in=5.0, gamma_p=0.0)
    roots, _ = obse_xi0(ObseParams.from_system(p, ghz_to_angular(-9.6)))
    assert len(roots) == 3
    np.testing.assert_allclose(sorted(abs(r) ** 2 for r in roots),
                               OBSE_XI0_TRIPLE_U, rtol=1e-6)


def test_obse_xi0_single_root_case():
    p = SystemParams(g0=ghz_to_angular(6.0), beta_mag=0.0, xi=0.0,
                     kappa_i=ghz_to_angular(0.1), kappa_e=ghz_to_angular(0.2),
                     gamma_par=ghz_to_angular(0.05), gamma_p=0.0, p_in=0.35)
    roots, _ = obse_xi0(ObseParams.from_system(p, ghz_to_angular(-2.0)))
    assert len(roots) == 1
    assert abs(roots[0]) ** 2 == pytest.approx(OBSE_XI0_SINGLE_U, rel=1e-6)


def test_obse_xi_pi2_weak_drive_root():
    p = family_a(xi=np.pi / 2, p_in=1e-7)
    roots, x_minus = obse_xi_pi2(ObseParams.from_system(p, ghz_to_angular(-12.8)))
    assert len(roots) == 1
    assert abs(roots[0]) ** 2 == pytest.approx(OBSE_PI2_WEAK_U, rel=1e-6)
    assert len(x_minus) == 1


def test_obse_zero_drive():
    p = family_a(p_in=0.0)
    roots, x_minus = obse_xi0(ObseParams.from_system(p, 0.0))
    assert roots == [0j]
    assert x_minus == 0j


def test_obse_to_traveling_inverts_the_mode_basis():
    xp, xm, n_s = 0.3 + 0.1j, -0.2j, 0.007
    a_cw, a_ccw = obse_to_traveling(xp, xm, n_s)
    s = np.sqrt(n_s / 2)
    assert a_cw == pytest.approx(s * (xp + xm))
    assert a_ccw == pytest.approx(s * (xp - xm))
    # photon bookkeeping: |cw|^2 + |ccw|^2 = n_s (|X+|^2 + |X-|^2)
    assert abs(a_cw) ** 2 + abs(a_ccw) ** 2 == pytest.approx(
        n_s * (abs(xp) ** 2 + abs(xm) ** 2))


def test_effective_coupling_magnitudes_sum_to_2g0_squared():
    # |g_SW1|^2 + |g_SW2|^2 with g_SWj = g0 (1 +/- e^{i xi})/sqrt(2)
    for xi in (0.0, np.pi / 4, np.pi / 2, np.pi):
        c1 = (1 + np.exp(1j * xi)) / np.sqrt(2)
        c2 = (1 - np.exp(1j * xi)) / np.sqrt(2)
        assert abs(c1) ** 2 + abs(c2) ** 2 == pytest.approx(2.0, abs=1e-14)


def test_ode_relaxes_to_obse_fixed_point():
    p = family_a(delta_ac_ghz=-9.6, p_in=1e-7)
    ob = ObseParams.from_system(p, ghz_to_angular(-15.6))
    roots, x_minus = obse_xi0(ob)
    ts = np.linspace(0.0, 60.0, 201)
    traj = semiclassical_ode(ob, (0.0, 0.0, 0.0, -1.0), ts)
    s = np.sqrt(ob.n_s)
    assert abs(traj[-1, 0] / s - roots[0]) < 1e-8
    assert abs(traj[-1, 1] / s - x_minus) < 1e-8
    # late-time slope is zero up to the integrator's atol: a fixed point
    assert np.abs(traj[-1] - traj[-2]).max() < 1e-9


def test_ode_xi_swap_relabels_standing_modes():
    # xi -> xi + pi exchanges the two standing modes once the doublet poles
    # are re-tagged (beta -> -beta bookkeeping).
    p = family_a(delta_ac_ghz=-9.6, p_in=0.01)
    ob0 = ObseParams.from_system(p, ghz_to_angular(-9.6))
    obp = ObseParams(n_s=ob0.n_s, C=ob0.C, Y=ob0.Y, delta_cl=ob0.delta_cl,
                     delta_al=ob0.delta_al, g0=ob0.g0, beta_mag=-ob0.beta_mag,
                     xi=np.pi, kappa_T=ob0.kappa_T, gamma_perp=ob0.gamma_perp,
                     gamma_par=ob0.gamma_par, drive=ob0.drive)
    ts = np.linspace(0.0, 3.0, 61)
    t0 = semiclassical_ode(ob0, (0.0, 0.0, 0.0, -1.0), ts)
    tp = semiclassical_ode(obp, (0.0, 0.0, 0.0, -1.0), ts)
    np.testing.assert_allclose(t0[:, 0], tp[:, 1], atol=1e-9)
    np.testing.assert_allclose(t0[:, 1], tp[:, 0], atol=1e-9)
    np.testing.assert_allclose(t0[:, 2:], tp[:, 2:], atol=1e-9)


def test_ode_sigma_z_stays_real():
    p = family_a(delta_ac_ghz=-9.6, p_in=0.5)
    ob = ObseParams.from_system(p, ghz_to_angular(-9.6))
    traj = semiclassical_ode(ob, (0.0, 0.0, 0.0, -1.0), np.linspace(0, 5, 101))
    assert np.abs(traj[:, 3].imag).max() < 1e-8


def test_ode_validates_inputs():
    ob = ObseParams.from_system(family_a(), 0.0)
    with pytest.raises(ValueError, match="increasing"):
        semiclassical_ode(ob, (0, 0, 0, -1), [0.0, 0.0, 1.0])
    with pytest.raises(ValueError, match="initial state"):
        semiclassical_ode(ob, (0, 0, 0), [0.0, 1.0])
