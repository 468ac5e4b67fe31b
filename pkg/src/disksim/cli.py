"""Configuration-driven command-line front end.

Usage::

    disksim [mode] --config FILE [--preset NAME] [--out PATH]
                   [--format csv|json] [--threads N]
    disksim list-presets

The run mode (spectrum, classical, obse, g2, anticrossing, nonclassical,
transient) may come from the positional argument, the config file, or the
preset, in that order of precedence.  Config files are flat ``key = value``
text with ``#`` comments; all frequencies are entered and reported in the
f/2pi GHz convention, and complex backscattering is entered as magnitude
``beta_ghz`` plus phase ``xi_rad``.  Unknown keys are an error.

Exit codes: 0 success, 1 configuration error (message names the offending
key), 2 solver failure (message names the grid point).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from . import __version__
from .analysis import ZeroPhotonNumber, cauchy_schwarz, find_extrema, mandel_q, quadrature_q
from .classical import ObseParams, classical_spectrum, obse_xi0, obse_xi_pi2
from .dynamics import StepSizeUnderflow, ZeroDenominator, evolve, g2_two_time
from .hilbert import CCW, CW, HilbertSpace, annihilation, expectation, standing_wave_ops, vacuum_state
from .model import SystemParams, build_liouvillian, ghz_to_angular
from .presets import get_preset, preset_label, preset_table
from .steady import NonUniqueSteadyState, SweepFailure, solve_steady_state, sweep_probe


class ConfigError(Exception):
    """Configuration problem; the message names the offending key."""


class SolverFailure(Exception):
    """A numerical routine failed; the message names the grid point."""


MODES = ("spectrum", "classical", "obse", "g2", "anticrossing",
         "nonclassical", "transient")

# Every key a config file (or preset) may set, with its parser.  Anything
# else is a typo and is rejected by name.
_FLOAT_KEYS = (
    "g0_ghz", "beta_ghz", "xi_rad", "kappa_t_ghz", "kappa_e_ghz",
    "gamma_par_ghz", "gamma_p_ghz", "delta_ac_ghz", "p_in_photons_ns",
    "probe_min_ghz", "probe_max_ghz", "delta_ac_min_ghz", "delta_ac_max_ghz",
    "omega_l_ghz", "tau_max_ns", "t_max_ns",
    "rabi_exclude_min_ghz", "rabi_exclude_max_ghz",
)
_INT_KEYS = ("n_max_cw", "n_max_ccw", "probe_points", "delta_ac_points",
             "tau_points", "t_points")
_STR_KEYS = ("mode", "g2_mode_a", "g2_mode_b", "rabi_channel")
KNOWN_KEYS = frozenset(_FLOAT_KEYS) | frozenset(_INT_KEYS) | frozenset(_STR_KEYS)

_DEFAULTS = {
    "g0_ghz": 0.0,
    "beta_ghz": 0.0,
    "xi_rad": 0.0,
    "gamma_par_ghz": 0.0,
    "gamma_p_ghz": 0.0,
    "delta_ac_ghz": 0.0,
    "p_in_photons_ns": 0.02,
    "n_max_cw": 2,
    "n_max_ccw": 2,
    "probe_points": 401,
    "tau_max_ns": 2.0,
    "tau_points": 401,
    "t_max_ns": 1.5,
    "t_points": 301,
    "delta_ac_points": 81,
    "g2_mode_a": "ccw",
    "g2_mode_b": "ccw",
    "rabi_channel": "transmission",
}

_G2_MODE_NAMES = ("cw", "ccw", "sw1", "sw2")

# Exceptions that mean "the numerics gave up at this point", as opposed to a
# bug; they map to exit code 2.
_SOLVER_ERRORS = (SweepFailure, NonUniqueSteadyState, StepSizeUnderflow,
                  ZeroDenominator, ZeroPhotonNumber, np.linalg.LinAlgError)


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if not raw:
        raise ConfigError(f"key '{key}': empty value")
    if key in _STR_KEYS:
        return raw
    caster = int if key in _INT_KEYS else float
    try:
        return caster(raw)
    except ValueError:
        kind = "integer" if caster is int else "number"
        raise ConfigError(f"key '{key}': expected {kind}, got {raw!r}") from None


def parse_config_file(path: str) -> dict:
    """Flat ``key = value`` config file -> dict of typed values.

    ``#`` starts a comment (whole-line or trailing); blank lines are
    skipped; later assignments override earlier ones; unknown keys raise
    ConfigError.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"key 'config': cannot read {path!r}: {exc}") from exc
    out: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {body!r}")
        key, _, raw = body.partition("=")
        key = key.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
        out[key] = _parse_value(key, raw)
    return out


def _require(cfg: dict, key: str):
    if key not in cfg:
        raise ConfigError(f"missing required key '{key}'")
    return cfg[key]


def resolve_config(mode_arg: str | None, preset: str | None,
                   config_path: str | None) -> dict:
    """Merge preset, config file, and positional mode into one resolved
    config with defaults applied and every value validated.

    Precedence: positional mode > config file > preset.  The returned dict
    is complete enough to reproduce the run byte-for-byte (this is what the
    JSON metadata echoes).
    """
    cfg: dict = {}
    if preset is not None:
        try:
            cfg.update(get_preset(preset))
        except KeyError as exc:
            raise ConfigError(f"key 'preset': {exc.args[0]}") from None
    if config_path is not None:
        cfg.update(parse_config_file(config_path))
    if mode_arg is not None:
        cfg["mode"] = mode_arg

    mode = _require(cfg, "mode")
    if mode not in MODES:
        raise ConfigError(f"key 'mode': unknown mode {mode!r}; "
                          f"expected one of {', '.join(MODES)}")

    for key, val in _DEFAULTS.items():
        cfg.setdefault(key, val)

    _require(cfg, "kappa_t_ghz")
    _require(cfg, "kappa_e_ghz")
    for key in ("g0_ghz", "beta_ghz", "kappa_t_ghz", "kappa_e_ghz",
                "gamma_par_ghz", "gamma_p_ghz", "p_in_photons_ns"):
        if cfg[key] < 0:
            raise ConfigError(f"key '{key}': must be >= 0, got {cfg[key]}")
    if cfg["kappa_t_ghz"] <= 0:
        raise ConfigError(f"key 'kappa_t_ghz': must be > 0, got {cfg['kappa_t_ghz']}")
    if cfg["kappa_e_ghz"] > cfg["kappa_t_ghz"]:
        raise ConfigError("key 'kappa_e_ghz': waveguide rate exceeds total "
                          f"({cfg['kappa_e_ghz']} > {cfg['kappa_t_ghz']})")
    for key in ("n_max_cw", "n_max_ccw"):
        if cfg[key] < 1:
            raise ConfigError(f"key '{key}': must be >= 1, got {cfg[key]}")

    if mode in ("spectrum", "classical", "obse", "anticrossing", "nonclassical"):
        if "probe_min_ghz" not in cfg or "probe_max_ghz" not in cfg:
            # Default probe span: wide enough to cover both doublet branches
            # and the polariton shoulders.
            half = 3.0 * cfg["beta_ghz"] + 3.0 * cfg["g0_ghz"] + 10.0 * cfg["kappa_t_ghz"]
            cfg.setdefault("probe_min_ghz", -half)
            cfg.setdefault("probe_max_ghz", half)
        if cfg["probe_min_ghz"] >= cfg["probe_max_ghz"]:
            raise ConfigError("key 'probe_min_ghz': probe window is empty "
                              f"({cfg['probe_min_ghz']} >= {cfg['probe_max_ghz']})")
        min_pts = 3 if mode == "anticrossing" else 2
        if cfg["probe_points"] < min_pts:
            raise ConfigError(f"key 'probe_points': must be >= {min_pts}, "
                              f"got {cfg['probe_points']}")

    if mode == "anticrossing":
        _require(cfg, "delta_ac_min_ghz")
        _require(cfg, "delta_ac_max_ghz")
        if cfg["delta_ac_min_ghz"] > cfg["delta_ac_max_ghz"]:
            raise ConfigError("key 'delta_ac_min_ghz': detuning window is empty")
        if cfg["delta_ac_points"] < 1:
            raise ConfigError("key 'delta_ac_points': must be >= 1, "
                              f"got {cfg['delta_ac_points']}")

    if mode in ("g2", "transient"):
        _require(cfg, "omega_l_ghz")
    if mode == "g2":
        if cfg["tau_max_ns"] <= 0:
            raise ConfigError(f"key 'tau_max_ns': must be > 0, got {cfg['tau_max_ns']}")
        if cfg["tau_points"] < 2:
            raise ConfigError(f"key 'tau_points': must be >= 2, got {cfg['tau_points']}")
        for key in ("g2_mode_a", "g2_mode_b"):
            if cfg[key] not in _G2_MODE_NAMES:
                raise ConfigError(f"key '{key}': expected one of "
                                  f"{', '.join(_G2_MODE_NAMES)}, got {cfg[key]!r}")
    if mode == "transient":
        if cfg["t_max_ns"] <= 0:
            raise ConfigError(f"key 't_max_ns': must be > 0, got {cfg['t_max_ns']}")
        if cfg["t_points"] < 2:
            raise ConfigError(f"key 't_points': must be >= 2, got {cfg['t_points']}")

    if cfg["rabi_channel"] not in ("transmission", "reflection"):
        raise ConfigError("key 'rabi_channel': expected transmission or "
                          f"reflection, got {cfg['rabi_channel']!r}")

    if mode == "obse":
        if cfg["g0_ghz"] <= 0:
            raise ConfigError("key 'g0_ghz': the optical Bloch steady state "
                              "needs g0 > 0 (use classical mode for g0 = 0)")
        if cfg["gamma_par_ghz"] <= 0:
            raise ConfigError("key 'gamma_par_ghz': the optical Bloch steady "
                              "state needs gamma_par > 0")
        _obse_branch(cfg["xi_rad"])  # raises on unsupported phase

    return cfg


def _obse_branch(xi: float) -> str:
    """Which printed OBSE solution applies: 'xi0' or 'xi_pi2'."""
    tau = 2.0 * np.pi
    xin = xi % tau
    if min(xin, tau - xin) < 1e-9:
        return "xi0"
    if abs(xin - np.pi / 2.0) < 1e-9:
        return "xi_pi2"
    raise ConfigError("key 'xi_rad': closed-form optical Bloch solutions "
                      f"cover xi = 0 and xi = pi/2 only, got {xi}")


def _system_params(cfg: dict) -> SystemParams:
    return SystemParams(
        g0=ghz_to_angular(cfg["g0_ghz"]),
        beta_mag=ghz_to_angular(cfg["beta_ghz"]),
        xi=cfg["xi_rad"],
        kappa_i=ghz_to_angular(cfg["kappa_t_ghz"] - cfg["kappa_e_ghz"]),
        kappa_e=ghz_to_angular(cfg["kappa_e_ghz"]),
        gamma_par=ghz_to_angular(cfg["gamma_par_ghz"]),
        gamma_p=ghz_to_angular(cfg["gamma_p_ghz"]),
        delta_ac=ghz_to_angular(cfg["delta_ac_ghz"]),
        p_in=cfg["p_in_photons_ns"],
    )


def _probe_grid_ghz(cfg: dict) -> np.ndarray:
    return np.linspace(cfg["probe_min_ghz"], cfg["probe_max_ghz"],
                       cfg["probe_points"])


def _mode_ops(space: HilbertSpace, xi: float) -> dict:
    sw1, sw2 = standing_wave_ops(space, xi)
    return {"cw": annihilation(space, CW), "ccw": annihilation(space, CCW),
            "sw1": sw1, "sw2": sw2}


def run_spectrum(cfg: dict, threads: int):
    params = _system_params(cfg)
    grid = _probe_grid_ghz(cfg)
    records = sweep_probe(params, ghz_to_angular(grid),
                          n_max=(cfg["n_max_cw"], cfg["n_max_ccw"]),
                          threads=threads)
    cols = ["delta_lc_ghz", "T", "R", "T_coh", "n_cw", "n_ccw", "qd_excitation"]
    rows = [[float(g), rec.transmission, rec.reflection, rec.t_coherent,
             rec.n_cw, rec.n_ccw, rec.qd_excitation]
            for g, rec in zip(grid, records)]
    return cols, rows


def run_classical(cfg: dict, threads: int):
    params = _system_params(cfg)
    grid = _probe_grid_ghz(cfg)
    tr = classical_spectrum(params, ghz_to_angular(grid))
    cols = ["delta_lc_ghz", "T", "R"]
    rows = [[float(g), t, r] for g, (t, r) in zip(grid, tr)]
    return cols, rows


def run_obse(cfg: dict, threads: int):
    params = _system_params(cfg)
    grid = _probe_grid_ghz(cfg)
    branch_fn = obse_xi0 if _obse_branch(cfg["xi_rad"]) == "xi0" else obse_xi_pi2
    cols = ["delta_lc_ghz", "branch", "x_plus_re", "x_plus_im",
            "x_minus_re", "x_minus_im"]
    rows = []
    for g in grid:
        obse = ObseParams.from_system(params, ghz_to_angular(float(g)))
        xps, xms = branch_fn(obse)
        if not isinstance(xms, (list, tuple)):
            xms = [xms] * len(xps)
        for idx, (xp, xm) in enumerate(zip(xps, xms)):
            rows.append([float(g), idx, xp.real, xp.imag, xm.real, xm.imag])
    return cols, rows


def run_g2(cfg: dict, threads: int):
    params = _system_params(cfg)
    space = HilbertSpace(cfg["n_max_cw"], cfg["n_max_ccw"])
    omega = cfg["omega_l_ghz"]
    taus = np.linspace(0.0, cfg["tau_max_ns"], cfg["tau_points"])
    try:
        L = build_liouvillian(space, params, ghz_to_angular(omega))
        rho = solve_steady_state(L)
        ops = _mode_ops(space, params.xi)
        g2 = g2_two_time(L, rho, ops[cfg["g2_mode_a"]], ops[cfg["g2_mode_b"]], taus)
    except _SOLVER_ERRORS as exc:
        raise SolverFailure(f"at omega_l = {omega:.6g} GHz: {exc}") from exc
    cols = ["tau_ns", "g2"]
    rows = [[float(t), float(v)] for t, v in zip(taus, g2)]
    return cols, rows


def run_anticrossing(cfg: dict, threads: int):
    params = _system_params(cfg)
    probe = _probe_grid_ghz(cfg)
    probe_rad = ghz_to_angular(probe)
    ac_grid = np.linspace(cfg["delta_ac_min_ghz"], cfg["delta_ac_max_ghz"],
                          cfg["delta_ac_points"])
    n_max = (cfg["n_max_cw"], cfg["n_max_ccw"])
    cols = ["delta_ac_ghz", "dip1_ghz", "dip2_ghz", "dip3_ghz"]
    rows = []
    for ac in ac_grid:
        try:
            recs = sweep_probe(replace(params, delta_ac=ghz_to_angular(float(ac))),
                               probe_rad, n_max=n_max, threads=threads)
        except SweepFailure as exc:
            raise SolverFailure(f"at delta_ac = {ac:.6g} GHz, {exc}") from exc
        dips = find_extrema(probe, [rec.transmission for rec in recs], kind="min")
        # keep the three deepest, reported in frequency order
        deepest = sorted(sorted(dips, key=lambda dv: dv[1])[:3])
        row: list = [float(ac)] + [pos for pos, _ in deepest]
        row += [None] * (4 - len(row))
        rows.append(row)
    return cols, rows


def run_nonclassical(cfg: dict, threads: int):
    params = _system_params(cfg)
    space = HilbertSpace(cfg["n_max_cw"], cfg["n_max_ccw"])
    grid = _probe_grid_ghz(cfg)
    ops = _mode_ops(space, params.xi)

    def one_point(omega: float):
        try:
            L = build_liouvillian(space, params, ghz_to_angular(omega))
            rho = solve_steady_state(L)
            rep = cauchy_schwarz(rho, ops["cw"], ops["ccw"], labels=(CW, CCW))
            q_sw1 = mandel_q(rho, ops["sw1"])
            q_sw2 = mandel_q(rho, ops["sw2"])
        except _SOLVER_ERRORS as exc:
            raise SolverFailure(f"at omega_l = {omega:.6g} GHz: {exc}") from exc
        return [omega, rep.q_number[CW], rep.q_number[CCW], q_sw1, q_sw2,
                rep.q_quadrature[CW][0], rep.q_quadrature[CW][1],
                rep.q_quadrature[CCW][0], rep.q_quadrature[CCW][1],
                rep.cs_lhs, rep.cs_rhs]

    cols = ["omega_l_ghz", "q_cw", "q_ccw", "q_sw1", "q_sw2",
            "qx1_cw", "qx2_cw", "qx1_ccw", "qx2_ccw", "cs_lhs", "cs_rhs"]
    pts = [float(g) for g in grid]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one_point, pts))
    else:
        rows = [one_point(g) for g in pts]
    return cols, rows


# Populations below this are treated as "no photons yet"; the corresponding
# transient correlations are undefined and reported as empty/null.
_MIN_TRANSIENT_POPULATION = 1e-8

_TRANSIENT_PAIRS = (("cw", "cw"), ("ccw", "ccw"), ("cw", "ccw"),
                    ("sw1", "sw1"), ("sw2", "sw2"), ("sw1", "sw2"))


def run_transient(cfg: dict, threads: int):
    params = _system_params(cfg)
    space = HilbertSpace(cfg["n_max_cw"], cfg["n_max_ccw"])
    omega = cfg["omega_l_ghz"]
    times = np.linspace(0.0, cfg["t_max_ns"], cfg["t_points"])
    ops = _mode_ops(space, params.xi)
    num_ops = {name: (op.dagger() @ op) for name, op in ops.items()}
    pair_ops = {(a, b): (ops[a].dagger() @ (ops[b].dagger() @ ops[b]) @ ops[a])
                for a, b in _TRANSIENT_PAIRS}
    try:
        L = build_liouvillian(space, params, ghz_to_angular(omega))
        traj = evolve(L, vacuum_state(space), times)
    except _SOLVER_ERRORS as exc:
        raise SolverFailure(f"at omega_l = {omega:.6g} GHz: {exc}") from exc

    cols = ["t_ns"] + [f"g2_{a}_{b}" for a, b in _TRANSIENT_PAIRS] + ["cs_lhs", "cs_rhs"]
    rows = []
    for t, rho in zip(traj.times, traj.states):
        pops = {name: float(np.real(expectation(rho, op)))
                for name, op in num_ops.items()}
        g2 = {}
        for a, b in _TRANSIENT_PAIRS:
            if pops[a] <= _MIN_TRANSIENT_POPULATION or pops[b] <= _MIN_TRANSIENT_POPULATION:
                g2[(a, b)] = None
                continue
            num = float(np.real(expectation(rho, pair_ops[(a, b)])))
            g2[(a, b)] = num / (pops[a] * pops[b])
        trav = (g2[("cw", "ccw")], g2[("cw", "cw")], g2[("ccw", "ccw")])
        if any(v is None for v in trav):
            cs_lhs = cs_rhs = None
        else:
            cs_lhs = trav[0] ** 2
            cs_rhs = trav[1] * trav[2]
        rows.append([float(t)] + [g2[p] for p in _TRANSIENT_PAIRS] + [cs_lhs, cs_rhs])
    return cols, rows


_RUNNERS = {
    "spectrum": run_spectrum,
    "classical": run_classical,
    "obse": run_obse,
    "g2": run_g2,
    "anticrossing": run_anticrossing,
    "nonclassical": run_nonclassical,
    "transient": run_transient,
}


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if np.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def render_csv(cols, rows) -> str:
    """Deterministic CSV text; floats use shortest round-trip repr, missing
    values are empty fields."""
    lines = [",".join(cols)]
    for row in rows:
        lines.append(",".join(_format_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_cell(value):
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def render_json(cols, rows, cfg: dict, preset: str | None, threads: int) -> str:
    """JSON mirror of the CSV with a metadata header.

    metadata.config echoes the fully resolved configuration; writing it back
    out as ``key = value`` lines and re-running reproduces the CSV byte for
    byte.  Non-finite values become null.
    """
    meta = {
        "tool": "disksim",
        "version": __version__,
        "mode": cfg["mode"],
        "preset": preset,
        "preset_label": preset_label(preset) if preset else None,
        "threads": threads,
        "truncation": {"n_max_cw": cfg["n_max_cw"], "n_max_ccw": cfg["n_max_ccw"]},
        "config": {k: cfg[k] for k in sorted(cfg)},
        "columns": cols,
    }
    doc = {"metadata": meta,
           "rows": [[_json_cell(v) for v in row] for row in rows]}
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=False) + "\n"


def _write_output(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        return
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="disksim",
        description="QD-microdisk cavity simulator: spectra, correlations, "
                    "and non-classicality diagnostics.")
    parser.add_argument("mode", nargs="?", default=None,
                        help="one of %s, or list-presets" % ", ".join(MODES))
    parser.add_argument("--config", default=None, metavar="FILE",
                        help="flat key = value configuration file")
    parser.add_argument("--preset", default=None, metavar="NAME",
                        help="named figure preset (see list-presets)")
    parser.add_argument("--out", default=None, metavar="PATH",
                        help="output file (default: stdout)")
    parser.add_argument("--format", default="csv", metavar="FMT",
                        help="csv or json (default: csv)")
    parser.add_argument("--threads", default="1", metavar="N",
                        help="worker threads for sweep points (default: 1)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.mode in ("list-presets", "list_presets"):
            sys.stdout.write(preset_table() + "\n")
            return 0
        if args.format not in ("csv", "json"):
            raise ConfigError(f"key 'format': expected csv or json, got {args.format!r}")
        try:
            threads = int(args.threads)
        except ValueError:
            raise ConfigError(f"key 'threads': expected integer, got {args.threads!r}") from None
        if threads < 1:
            raise ConfigError(f"key 'threads': must be >= 1, got {threads}")
        cfg = resolve_config(args.mode, args.preset, args.config)
        cols, rows = _RUNNERS[cfg["mode"]](cfg, threads)
        if args.format == "csv":
            text = render_csv(cols, rows)
        else:
            text = render_json(cols, rows, cfg, args.preset, threads)
        _write_output(text, args.out)
    except ConfigError as exc:
        print(f"disksim: config error: {exc}", file=sys.stderr)
        return 1
    except (SolverFailure,) + _SOLVER_ERRORS as exc:
        print(f"disksim: solver failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
