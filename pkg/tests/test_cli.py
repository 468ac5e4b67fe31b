"""Command-line front end: config parsing, precedence, output formats,
exit codes, and the JSON config echo round trip."""

import json

import numpy as np
import pytest

from disksim.cli import ConfigError, main, parse_config_file, resolve_config

_CAVITY = "kappa_t_ghz = 1.2\nkappa_e_ghz = 0.44\nbeta_ghz = 9.6\n"


def _write(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def _cfg_text(d):
    lines = []
    for k, v in d.items():
        if isinstance(v, str):
            lines.append(f"{k} = {v}")
        elif isinstance(v, float):
            lines.append(f"{k} = {v!r}")
        else:
            lines.append(f"{k} = {v}")
    return "\n".join(lines) + "\n"


def test_parse_config_comments_blanks_and_override(tmp_path):
    path = _write(tmp_path, "\n".join([
        "# full-line comment",
        "",
        "kappa_t_ghz = 1.0",
        "kappa_t_ghz = 1.2   # later assignment wins",
        "probe_points = 7",
        "mode = classical",
    ]))
    cfg = parse_config_file(path)
    assert cfg["kappa_t_ghz"] == 1.2
    assert cfg["probe_points"] == 7
    assert isinstance(cfg["probe_points"], int)
    assert cfg["mode"] == "classical"


def test_parse_config_unknown_key_names_file_and_line(tmp_path):
    path = _write(tmp_path, "kappa_t_ghz = 1.2\n\nkappa = 0.3\n")
    with pytest.raises(ConfigError, match=r"run\.cfg:3: unknown key 'kappa'"):
        parse_config_file(path)


def test_parse_config_rejects_non_assignment(tmp_path):
    path = _write(tmp_path, "just some words\n")
    with pytest.raises(ConfigError, match="expected 'key = value'"):
        parse_config_file(path)


def test_parse_config_rejects_bad_number(tmp_path):
    path = _write(tmp_path, "probe_points = many\n")
    with pytest.raises(ConfigError, match="expected integer"):
        parse_config_file(path)


def test_missing_config_file_is_a_config_error(tmp_path):
    rc = main(["classical", "--config", str(tmp_path / "absent.cfg")])
    assert rc == 1


def test_missing_mode_exits_1(tmp_path, capsys):
    path = _write(tmp_path, _CAVITY)
    rc = main(["--config", path])
    err = capsys.readouterr().err
    assert rc == 1
    assert "config error" in err and "mode" in err


def test_unknown_mode_exits_1(tmp_path, capsys):
    path = _write(tmp_path, _CAVITY)
    rc = main(["warp", "--config", path])
    err = capsys.readouterr().err
    assert rc == 1
    assert "unknown mode" in err


def test_bad_format_and_threads_flags(tmp_path, capsys):
    path = _write(tmp_path, _CAVITY + "mode = classical\nprobe_points = 3\n")
    assert main(["--config", path, "--format", "yaml"]) == 1
    assert "format" in capsys.readouterr().err
    assert main(["--config", path, "--threads", "zero"]) == 1
    assert "threads" in capsys.readouterr().err
    assert main(["--config", path, "--threads", "0"]) == 1
    assert "threads" in capsys.readouterr().err


def test_list_presets_both_spellings(capsys):
    for spelling in ("list-presets", "list_presets"):
        assert main([spelling]) == 0
        out = capsys.readouterr().out
        assert "fig7_anticrossing" in out
        assert "fig10_beta0_g2" in out


def test_validation_errors_name_the_key(tmp_path, capsys):
    cases = [
        (_CAVITY + "mode = anticrossing\n", "delta_ac_min_ghz"),
        (_CAVITY + "mode = g2\n", "omega_l_ghz"),
        (_CAVITY + "mode = obse\ng0_ghz = 6\ngamma_par_ghz = 0.16\n"
         "xi_rad = 0.3\n", "xi_rad"),
        ("kappa_t_ghz = 1.2\nkappa_e_ghz = 1.5\nmode = classical\n",
         "kappa_e_ghz"),
        (_CAVITY + "mode = spectrum\nn_max_cw = 0\n", "n_max_cw"),
        (_CAVITY + "mode = g2\nomega_l_ghz = 0\ng2_mode_a = fw\n", "g2_mode_a"),
    ]
    for text, key in cases:
        path = _write(tmp_path, text)
        assert main(["--config", path]) == 1, key
        assert key in capsys.readouterr().err


def test_mode_precedence_positional_config_preset(tmp_path, capsys):
    # config overrides the preset's mode; the positional argument overrides both
    path = _write(tmp_path, "mode = spectrum\ngamma_par_ghz = 0.16\n"
                  "n_max_cw = 1\nn_max_ccw = 1\nprobe_points = 7\n")
    rc = main(["classical", "--config", path, "--preset", "fig2a",
               "--format", "json"])
    assert rc == 0
    meta = json.loads(capsys.readouterr().out)["metadata"]
    assert meta["mode"] == "classical"
    assert meta["preset"] == "fig2a"
    assert meta["config"]["probe_points"] == 7

    rc = main(["--config", path, "--preset", "fig2a", "--format", "json"])
    assert rc == 0
    meta = json.loads(capsys.readouterr().out)["metadata"]
    assert meta["mode"] == "spectrum"
    assert meta["truncation"] == {"n_max_cw": 1, "n_max_ccw": 1}


_SCHEMAS = {
    "classical": "delta_lc_ghz,T,R",
    "spectrum": "delta_lc_ghz,T,R,T_coh,n_cw,n_ccw,qd_excitation",
    "obse": "delta_lc_ghz,branch,x_plus_re,x_plus_im,x_minus_re,x_minus_im",
    "g2": "tau_ns,g2",
    "anticrossing": "delta_ac_ghz,dip1_ghz,dip2_ghz,dip3_ghz",
    "nonclassical": ("omega_l_ghz,q_cw,q_ccw,q_sw1,q_sw2,"
                     "qx1_cw,qx2_cw,qx1_ccw,qx2_ccw,cs_lhs,cs_rhs"),
    "transient": ("t_ns,g2_cw_cw,g2_ccw_ccw,g2_cw_ccw,"
                  "g2_sw1_sw1,g2_sw2_sw2,g2_sw1_sw2,cs_lhs,cs_rhs"),
}

_FAST_CONFIGS = {
    "classical": _CAVITY + "mode = classical\nprobe_points = 5\n"
                 "probe_min_ghz = -12\nprobe_max_ghz = 12\n",
    "spectrum": _CAVITY + "mode = spectrum\ngamma_par_ghz = 0.16\n"
                "n_max_cw = 1\nn_max_ccw = 1\nprobe_points = 5\n"
                "probe_min_ghz = -12\nprobe_max_ghz = 12\n",
    "obse": _CAVITY + "mode = obse\ng0_ghz = 6\ngamma_par_ghz = 0.16\n"
            "gamma_p_ghz = 2.4\nprobe_points = 3\n"
            "probe_min_ghz = -12\nprobe_max_ghz = 0\n",
    "g2": _CAVITY + "mode = g2\ngamma_par_ghz = 0.16\nomega_l_ghz = -9.6\n"
          "n_max_cw = 1\nn_max_ccw = 1\ntau_points = 5\ntau_max_ns = 0.5\n",
    "anticrossing": _CAVITY + "mode = anticrossing\ng0_ghz = 6\n"
                    "gamma_par_ghz = 0.16\nn_max_cw = 1\nn_max_ccw = 1\n"
                    "probe_points = 41\nprobe_min_ghz = -15\nprobe_max_ghz = 15\n"
                    "delta_ac_min_ghz = -5\ndelta_ac_max_ghz = 5\n"
                    "delta_ac_points = 3\n",
    "nonclassical": _CAVITY + "mode = nonclassical\ngamma_par_ghz = 0.16\n"
                    "n_max_cw = 1\nn_max_ccw = 1\nprobe_points = 3\n"
                    "probe_min_ghz = -10\nprobe_max_ghz = -9\n",
    "transient": _CAVITY + "mode = transient\ngamma_par_ghz = 0.16\n"
                 "omega_l_ghz = -9.6\nn_max_cw = 1\nn_max_ccw = 1\n"
                 "t_points = 5\nt_max_ns = 1.0\n",
}


@pytest.mark.parametrize("mode", sorted(_SCHEMAS))
def test_csv_schema_and_row_count(mode, tmp_path, capsys):
    path = _write(tmp_path, _FAST_CONFIGS[mode])
    rc = main(["--config", path])
    out = capsys.readouterr().out
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == _SCHEMAS[mode]
    assert len(lines) >= 3
    # every data row has the full column count
    n_cols = len(lines[0].split(","))
    for line in lines[1:]:
        assert len(line.split(",")) == n_cols


def test_out_file_matches_stdout(tmp_path, capsys):
    path = _write(tmp_path, _FAST_CONFIGS["classical"])
    assert main(["--config", path]) == 0
    stdout_text = capsys.readouterr().out
    out_file = tmp_path / "run.csv"
    assert main(["--config", path, "--out", str(out_file)]) == 0
    assert out_file.read_text() == stdout_text


def test_probe_column_is_the_ghz_grid(tmp_path, capsys):
    path = _write(tmp_path, _FAST_CONFIGS["classical"])
    assert main(["--config", path]) == 0
    lines = capsys.readouterr().out.strip().splitlines()[1:]
    got = [float(line.split(",")[0]) for line in lines]
    np.testing.assert_allclose(got, np.linspace(-12, 12, 5), atol=0)


def test_transient_vacuum_rows_are_empty(tmp_path, capsys):
    path = _write(tmp_path, _FAST_CONFIGS["transient"])
    assert main(["--config", path]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    first = lines[1].split(",")
    assert float(first[0]) == 0.0
    assert all(cell == "" for cell in first[1:])
    last = lines[-1].split(",")
    assert all(cell != "" for cell in last)


def test_json_metadata_and_round_trip(tmp_path, capsys):
    path = _write(tmp_path, _FAST_CONFIGS["spectrum"])
    assert main(["--config", path]) == 0
    first_csv = capsys.readouterr().out

    assert main(["--config", path, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    meta = doc["metadata"]
    assert meta["tool"] == "disksim"
    assert meta["mode"] == "spectrum"
    assert meta["preset"] is None
    assert meta["columns"] == _SCHEMAS["spectrum"].split(",")
    assert len(doc["rows"]) == 5

    # the echoed config reproduces the CSV byte for byte
    echo = _write(tmp_path, _cfg_text(meta["config"]), name="echo.cfg")
    assert main(["--config", echo]) == 0
    assert capsys.readouterr().out == first_csv


def test_preset_json_carries_label(capsys):
    rc = main(["--preset", "fig2a", "--format", "json"])
    assert rc == 0
    meta = json.loads(capsys.readouterr().out)["metadata"]
    assert meta["preset"] == "fig2a"
    assert meta["preset_label"]
    assert meta["mode"] == "classical"


def test_solver_failure_exits_2_and_names_the_point(tmp_path, capsys):
    # decoupled undamped QD: no unique steady state anywhere on the grid
    path = _write(tmp_path, "kappa_t_ghz = 1.2\nkappa_e_ghz = 0.44\n"
                  "mode = spectrum\nn_max_cw = 1\nn_max_ccw = 1\n"
                  "probe_points = 3\nprobe_min_ghz = -1\nprobe_max_ghz = 1\n")
    rc = main(["--config", path])
    err = capsys.readouterr().err
    assert rc == 2
    assert "solver failure" in err
    assert "delta_lc" in err


def test_resolve_config_requires_the_cavity_rates():
    with pytest.raises(ConfigError, match="kappa_t_ghz"):
        resolve_config("classical", None, None)


def test_resolve_config_default_probe_window(tmp_path):
    path = _write(tmp_path, _CAVITY + "mode = classical\ng0_ghz = 6\n")
    cfg = resolve_config(None, None, path)
    half = 3 * 9.6 + 3 * 6.0 + 10 * 1.2
    assert cfg["probe_min_ghz"] == -half
    assert cfg["probe_max_ghz"] == half
