"""Independent evaluation of the emitter-cavity coupling rate.

    g0 = (1 / 2 tau_sp) sqrt(3 c lambda0^2 tau_sp / (2 pi n^3 V_eff))

evaluated with scipy.constants for c and the mode volume expressed in
physical um^3 (V_eff = v (lambda0 / n)^3), so the package's shortcut of
working in cubic-wavelength units is checked against a dimensional
calculation where n does not cancel by construction.

Run:  python3 tests/oracles/oracle_coupling_rate.py
"""

import math

from scipy import constants

C_UM_PER_NS = constants.c * 1e6 / 1e9  # um/ns = 299792.458


def g0_dimensional(tau_sp_ns: float, lambda0_um: float, n: float, v_cubic_wavelengths: float) -> float:
    v_eff_um3 = v_cubic_wavelengths * (lambda0_um / n) ** 3
    return (0.5 / tau_sp_ns) * math.sqrt(
        3.0 * C_UM_PER_NS * lambda0_um ** 2 * tau_sp_ns
        / (2.0 * math.pi * n ** 3 * v_eff_um3))


if __name__ == "__main__":
    two_pi = 2.0 * math.pi
    for n in (3.46, 2.5, 1.0):  # n must cancel in cubic-wavelength units
        g0 = g0_dimensional(1.0, 1.26541, n, 5.6)
        print(f"n = {n}: g0 = {g0!r} rad/ns = {g0 / two_pi!r} GHz")
    print(f"tau_sp = 4 ns: g0/2pi = {g0_dimensional(4.0, 1.26541, 3.46, 5.6) / two_pi!r} GHz")
    print(f"V_eff = 2.8:   g0/2pi = {g0_dimensional(1.0, 1.26541, 3.46, 2.8) / two_pi!r} GHz")
