"""Simulator for a two-level quantum dot coupled to the whispering-gallery
modes of a microdisk cavity with surface-roughness backscattering.

The package computes classical coupled-mode spectra, quantum-master-equation
steady states, transmission/reflection spectra, two-time intensity
correlations, and non-classicality diagnostics (Mandel Q, quadrature
squeezing, Cauchy-Schwarz).
"""

from .hilbert import (
    CW,
    CCW,
    HilbertSpace,
    Operator,
    DensityMatrix,
    annihilation,
    number,
    qd_lowering,
    qd_sigma_z,
    identity,
    expectation,
    standing_wave_ops,
    fock_state,
    vacuum_state,
)
from .model import (
    SystemParams,
    Liouvillian,
    build_hamiltonian,
    build_liouvillian,
    coupling_rate_g0,
    ghz_to_angular,
    angular_to_ghz,
    vectorize,
    unvectorize,
)
from .steady import (
    SpectrumRecord,
    NonUniqueSteadyState,
    SweepFailure,
    solve_steady_state,
    transmission_reflection,
    default_probe_grid,
    sweep_probe,
    sweep_qd_detuning,
)
from .dynamics import (
    Trajectory,
    StepSizeUnderflow,
    ZeroDenominator,
    default_observables,
    default_tau_grid,
    evolve,
    g2_two_time,
    g2_equal_time_transient,
)
from .classical import (
    ObseParams,
    classical_amplitudes,
    classical_spectrum,
    classical_transmission_reflection,
    obse_xi0,
    obse_xi_pi2,
    obse_to_traveling,
    semiclassical_ode,
)
from .analysis import (
    NonclassicalReport,
    FewerThanTwoDips,
    ZeroPhotonNumber,
    find_extrema,
    rabi_splitting,
    mandel_q,
    quadrature_q,
    cauchy_schwarz,
)

__version__ = "0.1.0"

__all__ = [
    "CW",
    "CCW",
    "HilbertSpace",
    "Operator",
    "DensityMatrix",
    "annihilation",
    "number",
    "qd_lowering",
    "qd_sigma_z",
    "identity",
    "expectation",
    "standing_wave_ops",
    "fock_state",
    "vacuum_state",
    "SystemParams",
    "Liouvillian",
    "build_hamiltonian",
    "build_liouvillian",
    "coupling_rate_g0",
    "ghz_to_angular",
    "angular_to_ghz",
    "vectorize",
    "unvectorize",
    "SpectrumRecord",
    "NonUniqueSteadyState",
    "SweepFailure",
    "solve_steady_state",
    "transmission_reflection",
    "default_probe_grid",
    "sweep_probe",
    "sweep_qd_detuning",
    "Trajectory",
    "StepSizeUnderflow",
    "ZeroDenominator",
    "default_observables",
    "default_tau_grid",
    "evolve",
    "g2_two_time",
    "g2_equal_time_transient",
    "ObseParams",
    "classical_amplitudes",
    "classical_spectrum",
    "classical_transmission_reflection",
    "obse_xi0",
    "obse_xi_pi2",
    "obse_to_traveling",
    "semiclassical_ode",
    "NonclassicalReport",
    "FewerThanTwoDips",
    "ZeroPhotonNumber",
    "find_extrema",
    "rabi_splitting",
    "mandel_q",
    "quadrature_q",
    "cauchy_schwarz",
]
