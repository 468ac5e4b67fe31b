"""Canned run configurations for the bundled figure presets.

Each preset expands to a complete flat configuration (parameter set, grids,
truncation, run mode) keyed by the same names the CLI config parser accepts,
so ``disksim <mode> --preset fig4c`` needs no config file.  Preset names
follow the figure panels they reproduce; all frequencies are quoted in the
f/2pi GHz convention used throughout.

The classical doublet presets derive their linewidths from an intrinsic
quality factor Q_i = 3e5 at lambda = 1265.41 nm, so kappa_i/2pi =
(c/lambda)/(2 Q_i) ~ 0.3949 GHz, and set kappa_T and |beta| through the
quoted ratios (beta/kappa_T, kappa_T/kappa_i).
"""

from __future__ import annotations

import math

_SQRT2 = math.sqrt(2.0)

_C_NM_PER_NS = 2.99792458e8
_LAMBDA_NM = 1265.41
_Q_I = 3.0e5

# kappa_i/2pi in GHz for the classical presets.
_KI = (_C_NM_PER_NS / _LAMBDA_NM) / (2.0 * _Q_I)


def _base(mode: str, g0: float, beta: float, xi: float, kappa_t: float,
          kappa_e: float, gamma_par: float, gamma_p: float, delta_ac: float,
          p_in: float, n_max: int, **extra) -> dict:
    cfg = {
        "mode": mode,
        "g0_ghz": float(g0),
        "beta_ghz": float(beta),
        "xi_rad": float(xi),
        "kappa_t_ghz": float(kappa_t),
        "kappa_e_ghz": float(kappa_e),
        "gamma_par_ghz": float(gamma_par),
        "gamma_p_ghz": float(gamma_p),
        "delta_ac_ghz": float(delta_ac),
        "p_in_photons_ns": float(p_in),
        "n_max_cw": int(n_max),
        "n_max_ccw": int(n_max),
    }
    cfg.update(extra)
    return cfg


def _probe(lo: float, hi: float, points: int) -> dict:
    return {"probe_min_ghz": float(lo), "probe_max_ghz": float(hi),
            "probe_points": int(points)}


def _classical(beta_over_kt: float, kt_over_ki: float, half: float) -> dict:
    kappa_t = kt_over_ki * _KI
    return _base("classical", 0.0, beta_over_kt * kappa_t, 0.0, kappa_t,
                 kappa_t - _KI, 0.0, 0.0, 0.0, 0.02, 1,
                 **_probe(-half, half, 601))


# The spectra family shared by the xi scans, the anti-crossing map, and the
# first g2 set: {g0, |beta|, kappa_T, kappa_e, gamma_par, gamma_p}/2pi =
# {6, 9.6, 1.2, 0.44, 0.16, 2.4} GHz.
def _family_a(mode: str, xi: float, delta_ac: float, **extra) -> dict:
    return _base(mode, 6.0, 9.6, xi, 1.2, 0.44, 0.16, 2.4, delta_ac,
                 0.02, 2, **extra)


# The beta=0 family used by the no-splitting spectrum, the third/fourth g2
# sets, and the mixed-mode diagnostics: {6, 0, 1.2, 0.44, 0.16, 0.7} GHz.
def _family_b0(mode: str, **extra) -> dict:
    return _base(mode, 6.0, 0.0, 0.0, 1.2, 0.44, 0.16, 0.7, 0.0,
                 0.02, 2, **extra)


def _g2(cfg: dict, omega_l: float, mode_a: str = "ccw", mode_b: str = "ccw",
        tau_max: float = 2.0, points: int = 401) -> dict:
    cfg.update({"omega_l_ghz": float(omega_l), "g2_mode_a": mode_a,
                "g2_mode_b": mode_b, "tau_max_ns": float(tau_max),
                "tau_points": int(points)})
    return cfg


_PI = math.pi

PRESETS: dict[str, tuple[str, dict]] = {
    # -- classical coupled-mode doublets -----------------------------------
    "fig2a": ("2(a) classical doublet, beta/kappa_T=8, kappa_T/kappa_i=3",
              _classical(8.0, 3.0, 15.0)),
    "fig2b": ("2(b) classical doublet, beta/kappa_T=1, kappa_T/kappa_i=3",
              _classical(1.0, 3.0, 6.0)),
    "fig2c": ("2(c) classical doublet, beta/kappa_T=1, kappa_T/kappa_i=20",
              _classical(1.0, 20.0, 30.0)),
    # -- weak-drive QME spectra, xi scan -----------------------------------
    "fig4a": ("4(a) spectrum, xi=0, QD at cavity center",
              _family_a("spectrum", 0.0, 0.0, **_probe(-30, 30, 601))),
    "fig4b": ("4(b) spectrum, xi=0, QD at +beta",
              _family_a("spectrum", 0.0, 9.6, **_probe(-30, 30, 601))),
    "fig4c": ("4(c) spectrum, xi=0, QD at -beta",
              _family_a("spectrum", 0.0, -9.6, **_probe(-30, 30, 601),
                        rabi_channel="reflection",
                        rabi_exclude_min_ghz=6.6, rabi_exclude_max_ghz=12.6)),
    "fig5a": ("5(a) spectrum, xi=pi, QD at cavity center",
              _family_a("spectrum", _PI, 0.0, **_probe(-30, 30, 601))),
    "fig5b": ("5(b) spectrum, xi=pi, QD at +beta",
              _family_a("spectrum", _PI, 9.6, **_probe(-30, 30, 601))),
    "fig5c": ("5(c) spectrum, xi=pi, QD at -beta",
              _family_a("spectrum", _PI, -9.6, **_probe(-30, 30, 601))),
    "fig6a": ("6(a) spectrum, xi=pi/2, QD at cavity center",
              _family_a("spectrum", _PI / 2, 0.0, **_probe(-30, 30, 601))),
    "fig6b": ("6(b) spectrum, xi=pi/2, QD at +beta",
              _family_a("spectrum", _PI / 2, 9.6, **_probe(-30, 30, 601))),
    "fig6c": ("6(c) spectrum, xi=pi/2, QD at -beta",
              _family_a("spectrum", _PI / 2, -9.6, **_probe(-30, 30, 601))),
    # -- transmission-dip map versus QD detuning ---------------------------
    "fig7_anticrossing": (
        "7 dip positions vs QD-cavity detuning, xi=pi/2",
        _family_a("anticrossing", _PI / 2, 0.0, **_probe(-30, 30, 601),
                  delta_ac_min_ghz=-40.0, delta_ac_max_ghz=40.0,
                  delta_ac_points=81)),
    # -- weak-drive QME spectra, rate-hierarchy scan -----------------------
    "fig8a": ("8(a) spectrum, g0 > beta > kappa_T > gamma_perp",
              _base("spectrum", 12.0, 4.8, 0.0, 1.2, 0.44, 0.16, 2.4, -4.8,
                    0.02, 2, **_probe(-40, 40, 801),
                    rabi_channel="reflection",
                    rabi_exclude_min_ghz=1.8, rabi_exclude_max_ghz=7.8)),
    "fig8b": ("8(b) spectrum, kappa_T > g0 > beta > gamma_perp",
              _base("spectrum", 6.0, 1.2, 0.0, 9.6, 3.5, 0.16, 0.7, 0.0,
                    0.17, 2, **_probe(-30, 30, 601),
                    rabi_channel="transmission")),
    "fig8c": ("8(c) spectrum, gamma_par > g0 > beta > kappa_T",
              _base("spectrum", 6.0, 1.2, 0.0, 0.6, 0.22, 9.4, 0.0, -1.2,
                    0.010, 2, **_probe(-20, 20, 601),
                    rabi_channel="transmission",
                    rabi_exclude_min_ghz=-0.8, rabi_exclude_max_ghz=3.2)),
    "fig8d": ("8(d) spectrum, g0 > kappa_T > beta > gamma_perp",
              _base("spectrum", 12.0, 1.2, 0.0, 6.0, 2.2, 0.16, 0.7, 0.0,
                    0.10, 2, **_probe(-40, 40, 801),
                    rabi_channel="transmission",
                    rabi_exclude_min_ghz=-0.8, rabi_exclude_max_ghz=3.2)),
    "fig10_beta0_spectrum": (
        "10 inset spectrum, beta=0, QD-mediated mode coupling",
        _family_b0("spectrum", **_probe(-20, 20, 601),
                   rabi_channel="transmission",
                   rabi_exclude_min_ghz=-2.0, rabi_exclude_max_ghz=2.0)),
    # -- two-time intensity autocorrelations -------------------------------
    "fig8_g2a": ("8 g2(tau) ccw, xi=0 set, probe at -beta-sqrt(2)g0",
                 _g2(_family_a("g2", 0.0, -9.6), -9.6 - 6 * _SQRT2)),
    "fig8_g2b": ("8 g2(tau) ccw, xi=0 set, probe at -beta+sqrt(2)g0",
                 _g2(_family_a("g2", 0.0, -9.6), -9.6 + 6 * _SQRT2)),
    "fig8_g2c": ("8 g2(tau) ccw, xi=0 set, probe at +beta",
                 _g2(_family_a("g2", 0.0, -9.6), 9.6)),
    "fig9_g2a": ("9 g2(tau) ccw, xi=pi/2 set, probe at -12.8 GHz",
                 _g2(_family_a("g2", _PI / 2, 0.0), -12.8)),
    "fig9_g2b": ("9 g2(tau) ccw, xi=pi/2 set, probe at 0 GHz",
                 _g2(_family_a("g2", _PI / 2, 0.0), 0.0)),
    "fig9_g2c": ("9 g2(tau) ccw, xi=pi/2 set, probe at +12.8 GHz",
                 _g2(_family_a("g2", _PI / 2, 0.0), 12.8)),
    "fig10_beta0_g2": ("10(a) g2(tau) ccw, beta=0, probe at -sqrt(2)g0",
                       _g2(_family_b0("g2"), -6 * _SQRT2)),
    "fig10_beta0_g2b": ("10(b) g2(tau) ccw, beta=0, probe at 0 GHz",
                        _g2(_family_b0("g2"), 0.0)),
    "fig10_beta0_g2c": ("10(c) g2(tau) ccw, beta=0, probe at +sqrt(2)g0",
                        _g2(_family_b0("g2"), 6 * _SQRT2)),
    "fig11_sw1_g2a": ("11(a) g2(tau) sw1, beta=0, probe at -sqrt(2)g0",
                      _g2(_family_b0("g2"), -6 * _SQRT2, "sw1", "sw1")),
    "fig11_sw1_g2b": ("11(b) g2(tau) sw1, beta=0, probe at 0 GHz",
                      _g2(_family_b0("g2"), 0.0, "sw1", "sw1")),
    "fig11_sw1_g2c": ("11(c) g2(tau) sw1, beta=0, probe at +sqrt(2)g0",
                      _g2(_family_b0("g2"), 6 * _SQRT2, "sw1", "sw1")),
    "fig11_sw2_g2a": ("11(a) g2(tau) sw2, beta=0, probe at -sqrt(2)g0",
                      _g2(_family_b0("g2"), -6 * _SQRT2, "sw2", "sw2")),
    "fig11_sw2_g2b": ("11(b) g2(tau) sw2, beta=0, probe at 0 GHz",
                      _g2(_family_b0("g2"), 0.0, "sw2", "sw2")),
    "fig11_sw2_g2c": ("11(c) g2(tau) sw2, beta=0, probe at +sqrt(2)g0",
                      _g2(_family_b0("g2"), 6 * _SQRT2, "sw2", "sw2")),
    # -- mixed-mode correlations and moment diagnostics --------------------
    "fig12_cs": ("12(a) zero-delay correlations vs probe, beta=0",
                 _family_b0("nonclassical", **_probe(-15, 15, 121)) |
                 {"n_max_cw": 4, "n_max_ccw": 4}),
    "fig12_transient": (
        "12(b) equal-time correlations from vacuum, beta=0, probe -6 GHz",
        _family_b0("transient") |
        {"n_max_cw": 3, "n_max_ccw": 3, "omega_l_ghz": -6.0,
         "t_max_ns": 1.5, "t_points": 301}),
    # n_max = 5 is converged here: the Q minimum sits at omega_l = 0 where
    # the intracavity population stays near 0.14 photons and raising n_max
    # to 7 moves Q by ~1e-5; the solve cost drops 25x versus n_max = 7.
    "fig13_strong": (
        "13 photon-number and quadrature Q vs probe, strong drive",
        _base("nonclassical", 6.0, 9.6, _PI / 2, 1.2, 0.44, 0.16, 0.7, 0.0,
              30.0, 5, **_probe(-20, 20, 81))),
}


def get_preset(name: str) -> dict:
    """A fresh copy of the named preset configuration.

    Raises KeyError with the list of valid names for typos.
    """
    try:
        label, cfg = PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise KeyError(f"unknown preset {name!r}; known presets: {known}") from None
    return dict(cfg)


def preset_label(name: str) -> str:
    return PRESETS[name][0]


def _param_summary(cfg: dict) -> str:
    vals = (cfg["g0_ghz"], cfg["beta_ghz"], cfg["kappa_t_ghz"],
            cfg["kappa_e_ghz"], cfg["gamma_par_ghz"], cfg["gamma_p_ghz"])
    xi = cfg["xi_rad"]
    beta = f"{vals[1]:g}" if xi == 0.0 else f"{vals[1]:g}@xi={xi:.4g}"
    return ("{" + f"{vals[0]:g}, {beta}, {vals[2]:g}, {vals[3]:g}, "
            f"{vals[4]:g}, {vals[5]:g}" + "} GHz")


def preset_table() -> str:
    """Formatted table of every preset: name, figure tag, parameter set."""
    rows = [(name, label, PRESETS[name][1]["mode"], _param_summary(PRESETS[name][1]))
            for name, (label, _) in sorted(PRESETS.items())]
    w_name = max(len(r[0]) for r in rows)
    w_label = max(len(r[1]) for r in rows)
    w_mode = max(len(r[2]) for r in rows)
    lines = [f"{'preset':<{w_name}}  {'figure':<{w_label}}  {'mode':<{w_mode}}  parameters"]
    for name, label, mode, params in rows:
        lines.append(f"{name:<{w_name}}  {label:<{w_label}}  {mode:<{w_mode}}  {params}")
    return "\n".join(lines)
