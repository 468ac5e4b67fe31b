"""Physical parameters, Hamiltonian assembly, Lindblad dissipators, and the
Liouvillian superoperator.

Unit convention: every rate and detuning is stored internally in angular
units (rad/ns).  Configuration files and CSV output use "GHz", meaning
(rate)/2pi, matching the usual "kappa_T/2pi = 1.2 GHz" style; the conversion
is exactly a factor of 2pi (ghz_to_angular / angular_to_ghz).

Frame convention: all Hamiltonians are written in the frame rotating at the
drive (probe laser) frequency omega_l.  Public entry points take the probe
detuning in the plotting convention

    delta_lc = omega_l - omega_c      (laser from cavity, passed per call)

while the rotating-frame coefficients inside H are

    delta_cl = omega_c - omega_l = -delta_lc
    delta_ac = omega_a - omega_c      (QD from cavity, stored in SystemParams)
    delta_al = delta_cl + delta_ac    (QD from laser, derived)

Vectorization convention: column stacking, so the superoperator for
A rho B is (B^T kron A).  Density matrices map to vectors via
rho.reshape(-1, order="F").
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.constants
import scipy.sparse as sp

from .hilbert import CW, CCW, HilbertSpace, Operator, annihilation, qd_lowering, qd_sigma_z

TWO_PI = 2.0 * np.pi

# Speed of light in um/ns, for the coupling-rate formula.
_C_UM_PER_NS = scipy.constants.c * 1e-3


def ghz_to_angular(f_ghz: float) -> float:
    """Convert a frequency quoted as f/2pi in GHz to rad/ns."""
    return TWO_PI * f_ghz


def angular_to_ghz(omega: float) -> float:
    """Convert a rad/ns angular rate to the f/2pi GHz convention."""
    return omega / TWO_PI


@dataclass(frozen=True)
class SystemParams:
    """Full rate set for the driven QD-microdisk system, in rad/ns.

    Fields
    ------
    g0 : QD to traveling-wave-mode coupling rate.
    beta_mag, xi : magnitude and phase of the backscattering beta = |beta| e^{i xi}.
    kappa_i, kappa_e : intrinsic and waveguide-coupling field decay rates.
    gamma_par : QD spontaneous emission rate (gamma_parallel).
    gamma_p : QD pure dephasing rate.
    delta_ac : QD-cavity detuning omega_a - omega_c.
    p_in : waveguide input photon flux in photons/ns.

    Derived quantities (never stored independently): kappa_T = kappa_i +
    kappa_e, gamma_perp = gamma_par/2 + gamma_p, and the drive amplitude
    E = i sqrt(2 kappa_e p_in).
    """

    g0: float
    beta_mag: float
    xi: float
    kappa_i: float
    kappa_e: float
    gamma_par: float
    gamma_p: float
    delta_ac: float = 0.0
    p_in: float = 0.0

    def __post_init__(self):
        for name in ("g0", "beta_mag", "kappa_i", "kappa_e", "gamma_par", "gamma_p", "p_in"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")

    @property
    def kappa_T(self) -> float:
        return self.kappa_i + self.kappa_e

    @property
    def gamma_perp(self) -> float:
        return self.gamma_par / 2.0 + self.gamma_p

    @property
    def beta(self) -> complex:
        return self.beta_mag * complex(np.exp(1j * self.xi))

    @property
    def drive(self) -> complex:
        """Drive amplitude E = i sqrt(2 kappa_e p_in) (rad/ns)."""
        return 1j * np.sqrt(2.0 * self.kappa_e * self.p_in)


def vectorize(rho_matrix: np.ndarray) -> np.ndarray:
    """Column-stack a d x d matrix into a d^2 vector."""
    return np.asarray(rho_matrix, dtype=complex).reshape(-1, order="F")


def unvectorize(v: np.ndarray, d: int) -> np.ndarray:
    """Inverse of vectorize."""
    return np.asarray(v, dtype=complex).reshape((d, d), order="F")


class Liouvillian:
    """Sparse superoperator L acting on column-vectorized density matrices.

    d rho/dt = L rho, assembled at a fixed probe-cavity detuning delta_lc.
    The row-vectorized identity is a left null vector (trace preservation);
    this is checked at assembly time.
    """

    __slots__ = ("space", "matrix", "delta_lc", "_norm_max")

    def __init__(self, space: HilbertSpace, matrix: sp.spmatrix, delta_lc: float):
        d2 = space.dim ** 2
        if matrix.shape != (d2, d2):
            raise ValueError(f"superoperator shape {matrix.shape}, expected {(d2, d2)}")
        self.space = space
        self.matrix = matrix.tocsr()
        self.delta_lc = delta_lc
        self._norm_max = None

    @property
    def norm_max(self) -> float:
        """Largest entry magnitude, used to scale residual tolerances."""
        if self._norm_max is None:
            data = self.matrix.data
            self._norm_max = float(np.abs(data).max()) if data.size else 0.0
        return self._norm_max

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ v

    def apply(self, rho_matrix: np.ndarray) -> np.ndarray:
        """L applied to a matrix-form state, returned in matrix form."""
        d = self.space.dim
        return unvectorize(self.matrix @ vectorize(rho_matrix), d)

    def trace_residual(self) -> float:
        """max |1^T L|, the trace-preservation defect."""
        d = self.space.dim
        ones = np.zeros(d * d, dtype=complex)
        ones[(d + 1) * np.arange(d)] = 1.0  # vec(identity)
        return float(np.abs(ones @ self.matrix).max())


def build_hamiltonian(space: HilbertSpace, params: SystemParams, delta_lc: float) -> Operator:
    """System Hamiltonian in the frame rotating at the drive frequency.

    H = delta_cl (a_cw^dag a_cw + a_ccw^dag a_ccw)
        - beta a_cw^dag a_ccw - beta^* a_ccw^dag a_cw
        + i (E a_cw^dag - E^* a_cw)
        + delta_al sigma_+ sigma_-
        + i g0 (a_cw^dag sigma_- - a_cw sigma_+)
        + i g0 (a_ccw^dag sigma_- - a_ccw sigma_+)

    with delta_cl = omega_c - omega_l = -delta_lc (the argument is the
    laser-cavity detuning omega_l - omega_c, i.e. the spectrum x axis) and
    delta_al = delta_cl + delta_ac.  Every term is assembled as an explicit
    Hermitian pair, so the result is Hermitian to rounding (< 1e-12).
    """
    a_cw = annihilation(space, CW)
    a_ccw = annihilation(space, CCW)
    sm = qd_lowering(space)
    sp_op = sm.dagger()

    delta_cl = -delta_lc
    delta_al = delta_cl + params.delta_ac
    beta = params.beta
    E = params.drive
    g0 = params.g0

    H = delta_cl * (a_cw.dagger() @ a_cw + a_ccw.dagger() @ a_ccw)
    H = H - beta * (a_cw.dagger() @ a_ccw) - np.conj(beta) * (a_ccw.dagger() @ a_cw)
    H = H + (1j * E) * a_cw.dagger() + np.conj(1j * E) * a_cw
    H = H + delta_al * (sp_op @ sm)
    H = H + (1j * g0) * (a_cw.dagger() @ sm) + np.conj(1j * g0) * (sm.dagger() @ a_cw)
    H = H + (1j * g0) * (a_ccw.dagger() @ sm) + np.conj(1j * g0) * (sm.dagger() @ a_ccw)
    return H


def _sparse(mat) -> sp.csr_matrix:
    return mat.tocsr() if sp.issparse(mat) else sp.csr_matrix(mat)


def _dissipator(c: sp.csr_matrix, rate: float, eye: sp.csr_matrix) -> sp.csr_matrix:
    """Vectorized rate * (2 c rho c^dag - c^dag c rho - rho c^dag c).

    Column stacking maps A rho B to (B^T kron A), so
    c rho c^dag -> (conj(c) kron c) and the anticommutator terms use
    (I kron c^dag c) and ((c^dag c)^T kron I).
    """
    cdc = (c.conj().T @ c).tocsr()
    out = 2.0 * sp.kron(c.conj(), c, format="csr")
    out = out - sp.kron(eye, cdc, format="csr") - sp.kron(cdc.T, eye, format="csr")
    return rate * out


def build_liouvillian(space: HilbertSpace, params: SystemParams, delta_lc: float) -> Liouvillian:
    """Lindblad generator for the driven two-mode + QD system.

    L[rho] = -i [H, rho]
             + kappa_T sum_m (2 a_m rho a_m^dag - a_m^dag a_m rho - rho a_m^dag a_m)
             + (gamma_par/2) (2 sigma_- rho sigma_+ - sigma_+ sigma_- rho - rho sigma_+ sigma_-)
             + (gamma_p/2) (sigma_z rho sigma_z - rho)

    kappa_T multiplies the 2 a rho a^dag form directly (field decay rate;
    photon number decays at 2 kappa_T).
    """
    d = space.dim
    H = _sparse(build_hamiltonian(space, params, delta_lc).matrix)
    a_cw = _sparse(annihilation(space, CW).matrix)
    a_ccw = _sparse(annihilation(space, CCW).matrix)
    sm = _sparse(qd_lowering(space).matrix)
    sz = _sparse(qd_sigma_z(space).matrix)
    eye = sp.identity(d, dtype=complex, format="csr")

    L = -1j * (sp.kron(eye, H, format="csr") - sp.kron(H.T, eye, format="csr"))
    kT = params.kappa_T
    if kT > 0:
        L = L + _dissipator(a_cw, kT, eye)
        L = L + _dissipator(a_ccw, kT, eye)
    if params.gamma_par > 0:
        L = L + _dissipator(sm, params.gamma_par / 2.0, eye)
    if params.gamma_p > 0:
        L = L + (params.gamma_p / 2.0) * (
            sp.kron(sz.T, sz, format="csr") - sp.identity(d * d, dtype=complex, format="csr")
        )

    liouv = Liouvillian(space, L, delta_lc)
    if liouv.norm_max > 0 and liouv.trace_residual() > 1e-9 * liouv.norm_max:
        raise ValueError("assembled Liouvillian is not trace preserving")
    return liouv


def coupling_rate_g0(tau_sp: float, lambda0: float, n_refractive: float,
                     v_eff_in_cubic_wavelengths: float) -> float:
    """QD-cavity coupling rate from emitter and mode properties.

        g0 = (1 / 2 tau_sp) sqrt(3 c lambda0^2 tau_sp / (2 pi n^3 V_eff))

    Parameters
    ----------
    tau_sp : spontaneous emission lifetime in ns.
    lambda0 : free-space wavelength in um.
    n_refractive : refractive index at the emitter.
    v_eff_in_cubic_wavelengths : mode volume in units of (lambda0/n)^3;
        with this normalization n cancels from the formula.

    Returns g0 in rad/ns.
    """
    for name, val in (("tau_sp", tau_sp), ("lambda0", lambda0),
                      ("n_refractive", n_refractive),
                      ("v_eff_in_cubic_wavelengths", v_eff_in_cubic_wavelengths)):
        if val <= 0:
            raise ValueError(f"{name} must be > 0, got {val}")
    # V_eff = v (lambda0/n)^3 makes the n^3 cancel:
    # g0 = (1/2 tau_sp) sqrt(3 c tau_sp / (2 pi v lambda0))
    return 0.5 / tau_sp * np.sqrt(
        3.0 * _C_UM_PER_NS * tau_sp / (TWO_PI * v_eff_in_cubic_wavelengths * lambda0)
    )
