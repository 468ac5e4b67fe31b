"""Steady-state solver and waveguide input-output observables.

The steady state is found by a bordered linear solve: one row of the
vectorized Liouvillian (the one with the largest diagonal magnitude) is
replaced by the trace functional, the right-hand side selects trace one,
and the residual is then verified against the unmodified L.  This is
deterministic and needs no eigensolver.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .hilbert import CW, CCW, DensityMatrix, HilbertSpace, annihilation, expectation, number, qd_lowering
from .model import Liouvillian, SystemParams, build_liouvillian, unvectorize, vectorize
from . import analysis

# Relative residual bound for an accepted steady state, scaled by |L|_max.
_RESIDUAL_REL = 1e-9

# Below this total dimension the bordered system is solved densely.
_DENSE_SOLVE_LIMIT = 64


class NonUniqueSteadyState(RuntimeError):
    """The Liouvillian null space is numerically degenerate (for example
    every dissipation rate is zero), so no unique steady state exists."""


class SweepFailure(RuntimeError):
    """Steady-state solve failed at one grid point of a sweep."""

    def __init__(self, message: str, delta_lc: float):
        super().__init__(message)
        self.delta_lc = delta_lc


@dataclass
class SpectrumRecord:
    """One sweep point.  All rates in rad/ns, T/R normalized to the input."""

    delta_lc: float
    transmission: float
    reflection: float
    t_coherent: float
    n_cw: float
    n_ccw: float
    qd_excitation: float

    def __post_init__(self):
        if self.n_cw < -1e-8 or self.n_ccw < -1e-8:
            raise ValueError("negative photon number in spectrum record")
        if not (-1e-8 <= self.qd_excitation <= 1.0 + 1e-8):
            raise ValueError(f"QD excitation {self.qd_excitation} outside [0, 1]")


def _trace_functional(d: int) -> np.ndarray:
    row = np.zeros(d * d, dtype=complex)
    row[(d + 1) * np.arange(d)] = 1.0
    return row


def solve_steady_state(L: Liouvillian) -> DensityMatrix:
    """Unique steady state of a trace-preserving Liouvillian.

    Returns rho_ss with max |L vec(rho_ss)| < 1e-9 |L|_max, unit trace, and
    Hermiticity within 1e-10.  Raises NonUniqueSteadyState when the bordered
    system is singular or the candidate fails the residual check.
    """
    d = L.space.dim
    n = d * d
    A = L.matrix
    # The trace functional (L's left null vector) weights only the rows for
    # the diagonal components rho_kk, so only those rows are redundant and
    # eligible for replacement; take the one with the largest |L_rr|.
    diag_rows = (d + 1) * np.arange(d)
    diag = np.abs(A.diagonal())[diag_rows]
    r = int(diag_rows[np.argmax(diag)])
    rhs = np.zeros(n, dtype=complex)
    rhs[r] = 1.0
    tr_row = _trace_functional(d)

    try:
        if d < _DENSE_SOLVE_LIMIT:
            M = A.toarray()
            M[r, :] = tr_row
            v = np.linalg.solve(M, rhs)
        else:
            M = A.tolil(copy=True)
            M[r, :] = tr_row
            v = spla.splu(M.tocsc()).solve(rhs)
    except (np.linalg.LinAlgError, RuntimeError) as exc:
        raise NonUniqueSteadyState(f"bordered steady-state system is singular: {exc}") from exc

    rho = unvectorize(v, d)
    rho = 0.5 * (rho + rho.conj().T)
    tr = float(np.real(rho.trace()))
    if not np.isfinite(tr) or abs(tr) < 1e-12:
        raise NonUniqueSteadyState("steady-state candidate has vanishing trace")
    rho = rho / tr

    residual = float(np.abs(A @ vectorize(rho)).max())
    if residual > _RESIDUAL_REL * max(L.norm_max, 1e-300):
        raise NonUniqueSteadyState(
            f"steady-state residual {residual:.3e} exceeds "
            f"{_RESIDUAL_REL:.0e} * |L|_max = {_RESIDUAL_REL * L.norm_max:.3e}; "
            "null space is degenerate or parameters are unphysical")
    try:
        return DensityMatrix(L.space, rho)
    except ValueError as exc:
        # A zero-residual candidate that is still unphysical means the null
        # space has extra dimensions and the solve picked an arbitrary mix
        # (e.g. g0 = 0 with an undamped QD, or no dissipation at all).
        raise NonUniqueSteadyState(
            f"steady-state candidate is unphysical ({exc}); the Liouvillian "
            "null space is degenerate") from exc


def transmission_reflection(rho_ss: DensityMatrix, params: SystemParams,
                            delta_lc: float) -> tuple[float, float, float]:
    """Normalized transmitted and reflected photon flux, plus the
    coherent-amplitude transmission.

        T     = <(s+ + i sqrt(2 kappa_e) a_cw)^dag (s+ + i sqrt(2 kappa_e) a_cw)> / |s+|^2
        R     = 2 kappa_e <a_ccw^dag a_ccw> / p_in
        T_coh = |s+ + i sqrt(2 kappa_e) <a_cw>|^2 / p_in

    with s+ = sqrt(p_in).  T uses operator second moments, so incoherently
    scattered light is included; T_coh keeps only the mean field.  The two
    coincide for an empty cavity and in the weak-drive limit.
    """
    if params.p_in <= 0:
        raise ValueError("p_in must be > 0 to normalize transmission")
    space = rho_ss.space
    a_cw = annihilation(space, CW)
    s_plus = np.sqrt(params.p_in)
    root2ke = np.sqrt(2.0 * params.kappa_e)
    mean_a = expectation(rho_ss, a_cw)
    n_cw = float(np.real(expectation(rho_ss, number(space, CW))))
    n_ccw = float(np.real(expectation(rho_ss, number(space, CCW))))
    T = 1.0 + 2.0 * np.real(1j * root2ke * mean_a) / s_plus + 2.0 * params.kappa_e * n_cw / params.p_in
    R = 2.0 * params.kappa_e * n_ccw / params.p_in
    T_coh = abs(s_plus + 1j * root2ke * mean_a) ** 2 / params.p_in
    return float(T), float(R), float(T_coh)


def default_probe_grid(params: SystemParams, n_points: int = 401) -> np.ndarray:
    """Probe detuning grid spanning +/-(3|beta| + 3 g0 + 10 kappa_T)."""
    half = 3.0 * params.beta_mag + 3.0 * params.g0 + 10.0 * params.kappa_T
    return np.linspace(-half, half, n_points)


def _record_from(rho: DensityMatrix, params: SystemParams, space: HilbertSpace,
                 delta_lc: float) -> SpectrumRecord:
    T, R, T_coh = transmission_reflection(rho, params, delta_lc)
    sm = qd_lowering(space)
    return SpectrumRecord(
        delta_lc=float(delta_lc),
        transmission=T,
        reflection=R,
        t_coherent=T_coh,
        n_cw=float(np.real(expectation(rho, number(space, CW)))),
        n_ccw=float(np.real(expectation(rho, number(space, CCW)))),
        qd_excitation=float(np.real(expectation(rho, sm.dagger() @ sm))),
    )


def _solve_point(params: SystemParams, space: HilbertSpace, delta_lc: float) -> SpectrumRecord:
    L = build_liouvillian(space, params, delta_lc)
    rho = solve_steady_state(L)
    return _record_from(rho, params, space, delta_lc)


def sweep_probe(params: SystemParams, delta_lc_grid,
                n_max: "int | tuple[int, int]" = 2,
                threads: int = 1) -> list[SpectrumRecord]:
    """Steady-state spectrum over a probe detuning grid.

    One record per grid point, ordered by grid index.  Grid points are
    independent; with threads > 1 they are fanned over a thread pool.
    Solver errors are re-raised as SweepFailure naming the offending point.
    """
    grid = np.asarray(delta_lc_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("detuning grid is empty")
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise ValueError("detuning grid must be strictly increasing")
    n_cw, n_ccw = (n_max, n_max) if np.isscalar(n_max) else n_max
    space = HilbertSpace(n_cw, n_ccw)

    # In the rotating frame the probe detuning multiplies the total
    # excitation number n_cw + n_ccw + sigma_+ sigma_- (both the cavity and
    # the QD detunings shift with omega_l), a diagonal term; assemble L once
    # at delta_lc = 0 and add the detuning diagonal per point instead of
    # rebuilding every kron product.
    base = build_liouvillian(space, params, 0.0).matrix
    sm = qd_lowering(space)
    n_exc = sp.csr_matrix((number(space, CW) + number(space, CCW)
                           + sm.dagger() @ sm).matrix)
    eye = sp.identity(space.dim, dtype=complex, format="csr")
    det_term = 1j * (sp.kron(eye, n_exc, format="csr")
                     - sp.kron(n_exc.T, eye, format="csr"))

    def solve_one(delta):
        try:
            L = Liouvillian(space, base + float(delta) * det_term, float(delta))
            rho = solve_steady_state(L)
            return _record_from(rho, params, space, float(delta))
        except Exception as exc:
            raise SweepFailure(
                f"steady-state solve failed at delta_lc = {delta:.6g} rad/ns "
                f"({delta / (2 * np.pi):.6g} GHz): {exc}", float(delta)) from exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(solve_one, grid))
    return [solve_one(d) for d in grid]


def sweep_qd_detuning(params: SystemParams, delta_ac_grid, delta_lc_grid,
                      n_max: "int | tuple[int, int]" = 2,
                      threads: int = 1) -> dict[float, list[float]]:
    """Transmission-dip positions versus QD-cavity detuning.

    For each delta_ac the probe spectrum is swept and the refined local
    minima of T are recorded; strong coupling shows up as a pair of
    anti-crossings in the returned map delta_ac -> [dip positions].
    """
    ac_grid = np.asarray(delta_ac_grid, dtype=float)
    if ac_grid.size == 0:
        raise ValueError("QD detuning grid is empty")
    out: dict[float, list[float]] = {}
    for delta_ac in ac_grid:
        records = sweep_probe(replace(params, delta_ac=float(delta_ac)),
                              delta_lc_grid, n_max=n_max, threads=threads)
        grid = np.array([rec.delta_lc for rec in records])
        vals = np.array([rec.transmission for rec in records])
        dips = analysis.find_extrema(grid, vals, kind="min")
        out[float(delta_ac)] = [pos for pos, _ in dips]
    return out
