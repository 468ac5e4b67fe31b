"""Shared parameter sets for the test suite.

Two parameter families recur throughout: the backscattering-dominated set
(g0 < |beta|) used by the spectra and anticrossing runs, and the beta = 0
set where the QD itself mediates all mode coupling.  Rates are entered in
the f/2pi GHz convention and converted once.
"""

import numpy as np
import pytest

from disksim import SystemParams, ghz_to_angular


def family_a(xi=0.0, delta_ac_ghz=0.0, p_in=0.02, **over) -> SystemParams:
    """{g0, |beta|, kappa_T, kappa_e, gamma_par, gamma_p}/2pi =
    {6, 9.6, 1.2, 0.44, 0.16, 2.4} GHz."""
    kw = dict(
        g0=ghz_to_angular(6.0),
        beta_mag=ghz_to_angular(9.6),
        xi=xi,
        kappa_i=ghz_to_angular(0.76),
        kappa_e=ghz_to_angular(0.44),
        gamma_par=ghz_to_angular(0.16),
        gamma_p=ghz_to_angular(2.4),
        delta_ac=ghz_to_angular(delta_ac_ghz),
        p_in=p_in,
    )
    kw.update(over)
    return SystemParams(**kw)


def family_b0(p_in=0.02, **over) -> SystemParams:
    """beta = 0 family {6, 0, 1.2, 0.44, 0.16, 0.7} GHz."""
    kw = dict(
        g0=ghz_to_angular(6.0),
        beta_mag=0.0,
        xi=0.0,
        kappa_i=ghz_to_angular(0.76),
        kappa_e=ghz_to_angular(0.44),
        gamma_par=ghz_to_angular(0.16),
        gamma_p=ghz_to_angular(0.7),
        delta_ac=0.0,
        p_in=p_in,
    )
    kw.update(over)
    return SystemParams(**kw)


def empty_cavity(beta_ghz=9.6, p_in=0.02, **over) -> SystemParams:
    """g0 = 0 cavity with the family-a linewidths.  gamma_par stays nonzero
    so the decoupled QD still relaxes to its ground state and the steady
    state is unique."""
    kw = dict(
        g0=0.0,
        beta_mag=ghz_to_angular(beta_ghz),
        xi=0.0,
        kappa_i=ghz_to_angular(0.76),
        kappa_e=ghz_to_angular(0.44),
        gamma_par=ghz_to_angular(0.16),
        gamma_p=0.0,
        delta_ac=0.0,
        p_in=p_in,
    )
    kw.update(over)
    return SystemParams(**kw)


@pytest.fixture
def report(capsys):
    """Print a per-criterion pass/fail line that bypasses pytest capture."""

    def _report(tag: str, ok: bool, detail: str):
        with capsys.disabled():
            print(f"criterion {tag}: {'PASS' if ok else 'FAIL'} - {detail}")

    return _report
