"""Classical coupled-mode spectra and semiclassical optical-bistability
state equations (OBSE).

The empty-cavity response is a closed-form 2x2 linear solve.  With the QD
included, factorizing expectation values of operator products gives four
coupled semiclassical equations whose steady state is the OBSE; the implicit
equation is solved for |X_+|^2 by a bracketing scan plus bisection.

Normalized OBSE variables (all dimensionless):

    n_s = gamma_perp gamma_par / (4 g0^2)     saturation photon number
    C   = g0^2 / (2 kappa_T gamma_perp)       cooperativity
    Y   = E / (sqrt(2 n_s) kappa_T)           drive
    X_+ = <a_SW1>|_{xi=0} / sqrt(n_s)         symmetric-mode amplitude
    X_- = <a_SW2>|_{xi=0} / sqrt(n_s)         antisymmetric-mode amplitude

X_+ and X_- always refer to the xi = 0 standing-wave combinations
(a_CW +/- a_CCW)/sqrt(2), regardless of the actual backscattering phase;
for xi = 0 the symmetric combination is the one the QD couples to.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .dynamics import StepSizeUnderflow
from .model import SystemParams

# Bisection runs until the bracket width falls below this (absolute, in
# units of the scanned |X_+|^2 interval scale).
_BISECT_TOL = 1e-12
_SCAN_POINTS = 4096


@dataclass(frozen=True)
class ObseParams:
    """Dimensionless OBSE inputs plus the rates needed to undo the scaling.

    Built from a SystemParams and a probe detuning via ``from_system``; the
    invariants n_s = gamma_perp gamma_par / 4 g0^2 and
    C = g0^2 / 2 kappa_T gamma_perp then hold by construction.
    """

    n_s: float
    C: float
    Y: complex
    delta_cl: float
    delta_al: float
    g0: float
    beta_mag: float
    xi: float
    kappa_T: float
    gamma_perp: float
    gamma_par: float
    drive: complex

    @classmethod
    def from_system(cls, params: SystemParams, delta_lc: float) -> "ObseParams":
        # the squared coupling must also survive in floating point: a
        # subnormal g0 would otherwise slip past the check and divide by 0
        if params.g0 <= 0 or params.g0 ** 2 == 0.0:
            raise ValueError("OBSE normalization requires g0 > 0 (use classical_spectrum for g0 = 0)")
        if params.gamma_par <= 0:
            raise ValueError("OBSE normalization requires gamma_par > 0")
        n_s = params.gamma_perp * params.gamma_par / (4.0 * params.g0 ** 2)
        C = params.g0 ** 2 / (2.0 * params.kappa_T * params.gamma_perp)
        Y = params.drive / (np.sqrt(2.0 * n_s) * params.kappa_T)
        return cls(
            n_s=n_s,
            C=C,
            Y=complex(Y),
            delta_cl=-delta_lc,
            delta_al=-delta_lc + params.delta_ac,
            g0=params.g0,
            beta_mag=params.beta_mag,
            xi=params.xi,
            kappa_T=params.kappa_T,
            gamma_perp=params.gamma_perp,
            gamma_par=params.gamma_par,
            drive=params.drive,
        )


def classical_amplitudes(params: SystemParams, delta_lc: float,
                         s_plus: float | None = None) -> tuple[complex, complex]:
    """Steady-state intracavity amplitudes of the empty (g0-independent)
    coupled-mode equations.

        (kappa_T + i delta_cl) a_cw  = i beta   a_ccw + i sqrt(2 kappa_e) s_+
        (kappa_T + i delta_cl) a_ccw = i beta^* a_cw

    Closed form: a_cw = E D / (D^2 + |beta|^2) with D = kappa_T + i delta_cl
    and E = i sqrt(2 kappa_e) s_+, then a_ccw = i beta^* a_cw / D.  The
    ``delta_lc`` argument is omega_l - omega_c, so delta_cl = -delta_lc.

    s_plus defaults to sqrt(p_in).
    """
    if s_plus is None:
        s_plus = np.sqrt(params.p_in)
    D = params.kappa_T - 1j * delta_lc
    E = 1j * np.sqrt(2.0 * params.kappa_e) * s_plus
    a_cw = E * D / (D * D + params.beta_mag ** 2)
    a_ccw = 1j * np.conj(params.beta) * a_cw / D
    return complex(a_cw), complex(a_ccw)


def classical_transmission_reflection(params: SystemParams, delta_lc: float) -> tuple[float, float]:
    """Normalized transmitted and reflected power of the empty cavity.

    T = |s_+ + i sqrt(2 kappa_e) a_cw|^2 / |s_+|^2 and
    R = 2 kappa_e |a_ccw|^2 / |s_+|^2; both are independent of the drive
    level, so a unit input amplitude is used.
    """
    a_cw, a_ccw = classical_amplitudes(params, delta_lc, s_plus=1.0)
    root2ke = np.sqrt(2.0 * params.kappa_e)
    T = abs(1.0 + 1j * root2ke * a_cw) ** 2
    R = abs(1j * root2ke * a_ccw) ** 2
    return float(T), float(R)


def classical_spectrum(params: SystemParams, delta_lc_grid) -> list[tuple[float, float]]:
    """(T, R) per grid point from the closed-form coupled-mode solution."""
    grid = np.asarray(delta_lc_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("detuning grid is empty")
    return [classical_transmission_reflection(params, d) for d in grid]


def _find_roots(f, u_max: float) -> list[float]:
    """All nonnegative roots of f on [0, u_max] by sign-change scan plus
    bisection to _BISECT_TOL; f is vectorized."""
    if u_max <= 0:
        return [0.0] if f(np.array([0.0]))[0] == 0 else []
    us = np.linspace(0.0, u_max, _SCAN_POINTS)
    fs = f(us)
    roots = []
    for i in np.flatnonzero(np.sign(fs[:-1]) * np.sign(fs[1:]) < 0):
        lo, hi = us[i], us[i + 1]
        flo = fs[i]
        tol = _BISECT_TOL * max(1.0, u_max)
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            fm = f(np.array([mid]))[0]
            if fm == 0.0:
                lo = hi = mid
                break
            if np.sign(fm) == np.sign(flo):
                lo, flo = mid, fm
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    # exact grid hits (rare): keep points where f is exactly zero
    for i in np.flatnonzero(fs == 0.0):
        roots.append(float(us[i]))
    return sorted(roots)


def obse_xi0(obse: ObseParams) -> tuple[list[complex], complex]:
    """OBSE solution for xi = 0.

    The QD couples only to the symmetric standing mode (resonant at
    omega_c - |beta|); the antisymmetric one is decoupled:

        X_+ = Y / (1 + 4C/(2|X_+|^2 + d_a^2 + 1)
                   + i((d_c - b) - 4C d_a/(2|X_+|^2 + d_a^2 + 1)))
        X_- = Y / (1 + i (d_c + b))

    with d_c = delta_cl/kappa_T, d_a = delta_al/gamma_perp and
    b = |beta|/kappa_T.  Returns all real nonnegative roots for X_+ (one or
    three; three in the bistable regime) and the single-valued X_-.
    """
    d_c = obse.delta_cl / obse.kappa_T
    d_a = obse.delta_al / obse.gamma_perp
    b = obse.beta_mag / obse.kappa_T
    C = obse.C
    Y = obse.Y
    y2 = abs(Y) ** 2

    def denom(u):
        sat = 4.0 * C / (2.0 * u + d_a ** 2 + 1.0)
        return 1.0 + sat + 1j * ((d_c - b) - sat * d_a)

    x_minus = Y / (1.0 + 1j * (d_c + b))
    if y2 == 0.0:
        return [0j], complex(x_minus)

    def f(u):
        return u * np.abs(denom(u)) ** 2 - y2

    # Re(denom) >= 1, so |X_+| <= |Y|; 4|Y|^2 over-brackets every root.
    roots = _find_roots(f, 4.0 * y2)
    return [complex(Y / denom(u)) for u in roots], complex(x_minus)


def obse_xi_pi2(obse: ObseParams) -> tuple[list[complex], list[complex]]:
    """OBSE solution for xi = pi/2, where backscattering and QD scattering
    compete and both standing modes couple to the QD.

        X_+ = Y / { (1 + i d_c) / (1 + i d_c + b) * [
                  1 + b^2/(1 + d_c^2) + 4C/(2|X_+|^2 + d_a^2 + 1)
                  + i( d_c (1 - b^2/(1 + d_c^2))
                       - 4C d_a/(2|X_+|^2 + d_a^2 + 1) ) ] }
        X_- = (Y - b X_+) / (1 + i d_c)

    Returns the root set for X_+ and the matching X_- per root.
    """
    d_c = obse.delta_cl / obse.kappa_T
    d_a = obse.delta_al / obse.gamma_perp
    b = obse.beta_mag / obse.kappa_T
    C = obse.C
    Y = obse.Y
    y2 = abs(Y) ** 2

    prefac = (1.0 + 1j * d_c) / (1.0 + 1j * d_c + b)
    lor = b ** 2 / (1.0 + d_c ** 2)

    def denom(u):
        sat = 4.0 * C / (2.0 * u + d_a ** 2 + 1.0)
        return prefac * (1.0 + lor + sat + 1j * (d_c * (1.0 - lor) - sat * d_a))

    if y2 == 0.0:
        return [0j], [0j]

    def f(u):
        return u * np.abs(denom(u)) ** 2 - y2

    # |X_+| can exceed |Y| here (the prefactor magnitude drops to
    # 1/(1+b) on resonance), so widen the xi=0 bracket by (1+b)^2.
    roots = _find_roots(f, 4.0 * y2 * (1.0 + b) ** 2)
    x_plus = [complex(Y / denom(u)) for u in roots]
    x_minus = [complex((Y - b * xp) / (1.0 + 1j * d_c)) for xp in x_plus]
    return x_plus, x_minus


def obse_to_traveling(x_plus: complex, x_minus: complex, n_s: float) -> tuple[complex, complex]:
    """Traveling-wave amplitudes <a_cw>, <a_ccw> from normalized X_+/X_-.

    X_+/X_- are the xi=0 standing-wave amplitudes over sqrt(n_s), so
    <a_cw> = sqrt(n_s/2)(X_+ + X_-) and <a_ccw> = sqrt(n_s/2)(X_+ - X_-).
    """
    s = np.sqrt(n_s / 2.0)
    return complex(s * (x_plus + x_minus)), complex(s * (x_plus - x_minus))


def semiclassical_ode(params: ObseParams, initial, times) -> np.ndarray:
    """Integrate the factorized semiclassical equations of motion.

    State ordering (complex): (<a_SW1>, <a_SW2>, <sigma_->, <sigma_z>),
    where a_SW1/a_SW2 are the standing-wave modes for the actual phase xi
    (resonant at omega_c -/+ |beta|):

        d<a_SW1>/dt = -(i(delta_cl - |beta|) + kappa_T)<a_SW1>
                      + g0 (1 + e^{i xi})/sqrt(2) <sigma_-> + E/sqrt(2)
        d<a_SW2>/dt = -(i(delta_cl + |beta|) + kappa_T)<a_SW2>
                      + g0 (1 - e^{i xi})/sqrt(2) <sigma_-> + E/sqrt(2)
        d<sigma_->/dt = -(i delta_al + gamma_perp)<sigma_->
                      + g0/sqrt(2) <sigma_z>((1 + e^{-i xi})<a_SW1>
                                             + (1 - e^{-i xi})<a_SW2>)
        d<sigma_z>/dt = -2 sqrt(2) g0 Re[<sigma_-> ((1 + e^{i xi})<a_SW1>^*
                                                    + (1 - e^{i xi})<a_SW2>^*)]
                      - gamma_par (1 + <sigma_z>)

    Products of expectation values replace expectations of products
    (the semiclassical factorization).  Returns an array of shape
    (len(times), 4); <sigma_z> stays real to integration accuracy.
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must be nonempty and strictly increasing")
    y0 = np.asarray(initial, dtype=complex)
    if y0.shape != (4,):
        raise ValueError("initial state must be (<a_SW1>, <a_SW2>, <sigma_->, <sigma_z>)")

    ph = complex(np.exp(1j * params.xi))
    cp = 1.0 + ph
    cm = 1.0 - ph
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    g0 = params.g0
    E_half = params.drive * inv_sqrt2
    pole1 = 1j * (params.delta_cl - params.beta_mag) + params.kappa_T
    pole2 = 1j * (params.delta_cl + params.beta_mag) + params.kappa_T
    pole_s = 1j * params.delta_al + params.gamma_perp

    def rhs(t, y):
        a1, a2, s, z = y
        da1 = -pole1 * a1 + g0 * cp * inv_sqrt2 * s + E_half
        da2 = -pole2 * a2 + g0 * cm * inv_sqrt2 * s + E_half
        ds = -pole_s * s + g0 * inv_sqrt2 * z * (np.conj(cp) * a1 + np.conj(cm) * a2)
        coupling = s * (cp * np.conj(a1) + cm * np.conj(a2))
        dz = -2.0 * np.sqrt(2.0) * g0 * coupling.real - params.gamma_par * (1.0 + z)
        return np.array([da1, da2, ds, dz])

    t0, t1 = float(times[0]), float(times[-1])
    sol = solve_ivp(rhs, (t0, t1), y0, method="DOP853", t_eval=times,
                    rtol=1e-8, atol=1e-10)
    if not sol.success:
        raise StepSizeUnderflow(f"semiclassical integration failed: {sol.message}")
    return sol.y.T
