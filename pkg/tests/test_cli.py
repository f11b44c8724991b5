import json
import math

import jsonschema
import numpy as np
import pytest

from fput_micropteron.cli import (EXIT_CONFIG, EXIT_HYPOTHESIS, EXIT_OK, EXIT_STAGE, ConfigError, RunConfig,
                                  emit_plot_data, load_schema, main, read_profile_csv, run)
from fput_micropteron.dispersion import WaveParameters, critical_frequency_mu


def files_of(path):
    return {p.relative_to(path).as_posix(): p.read_bytes() for p in sorted(path.rglob("*")) if p.is_file()}


def test_config_validation():
    with pytest.raises(ConfigError, match=r"requires \|c\| > 1"):
        RunConfig("dispersion", c=0.9)
    with pytest.raises(ConfigError, match="exactly one"):
        RunConfig("dispersion", c=1.1, epsilon=0.2)
    with pytest.raises(ConfigError, match="positive"):
        RunConfig("solitary", epsilon=0.2, tol=0.0)
    with pytest.raises(ConfigError):
        RunConfig.from_json({"subcommand": "solitary", "epsilon": 0.2, "bogus": 1})


def test_main_exit_code_for_bad_speed(tmp_path, capsys):
    assert main(["dispersion", "--c", "0.9", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert "requires |c| > 1" in capsys.readouterr().err


def test_env_var_sets_output_root(tmp_path, monkeypatch):
    monkeypatch.setenv("FPUT_MICROPTERON_OUTPUT", str(tmp_path / "env"))
    assert RunConfig("dispersion", c=1.1).run_dir() == tmp_path / "env" / "dispersion"
    assert RunConfig("dispersion", c=1.1, out=str(tmp_path)).run_dir() == tmp_path / "dispersion"


def test_pipeline_mu_zero_is_trivial_and_deterministic(tmp_path):
    args = ["pipeline", "--epsilon", "0.2", "--mu", "0", "--T", "4", "--out", str(tmp_path)]
    assert main(args + ["--name", "a"]) == EXIT_OK
    assert main(args + ["--name", "b"]) == EXIT_OK
    fa, fb = files_of(tmp_path / "a"), files_of(tmp_path / "b")
    assert fa.keys() == fb.keys()
    diff = [k for k in fa if fa[k] != fb[k]]
    assert diff == ["config.json", "diagnostics.json"]  # they differ only by the run name
    rec = json.loads((tmp_path / "a" / "diagnostics.json").read_text())
    sol = rec["stages"]["micropteron"]["solutions"][0]
    assert sol["iterations"] == 1 and sol["a"] == 0.0 and sol["eta_sup"] == 0.0
    assert all(h["status"] == "pass" for h in rec["hypotheses"].values())
    strip = lambda d: {k: v for k, v in json.loads(d).items() if k != "config"}
    assert strip(fa["diagnostics.json"]) == strip(fb["diagnostics.json"])


def test_emitted_json_validates(tmp_path):
    record, _ = run(RunConfig("jost", epsilon=0.2, out=str(tmp_path)))
    schema = load_schema()
    jsonschema.validate(json.loads((tmp_path / "jost" / "diagnostics.json").read_text()), schema)
    bad = dict(record, kind="nonsense")
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(bad, schema)


def test_plot_data_contracts(tmp_path):
    assert emit_plot_data({}, tmp_path / "empty") == []
    assert not (tmp_path / "empty").exists()
    record, art = run(RunConfig("pipeline", epsilon=0.2, mu=1e-3, T=2.0, out=str(tmp_path)))
    d = tmp_path / "pipeline"
    inter = np.loadtxt(d / "dispersion_intersections.dat", ndmin=2)
    assert inter.shape == (1, 2)
    w = critical_frequency_mu(WaveParameters.from_epsilon(0.2, 1e-3)).omega
    assert abs(inter[0, 0] - w) < math.pi / 2000
    prof = np.loadtxt(d / "profile_solitary.dat")
    assert prof.shape == (art["solitary"].grid.n_points, 2)
    assert np.loadtxt(d / "profile_micropteron_00_p1.dat").shape == prof.shape
    for name in ("sweep_a.dat", "sweep_eta.dat", "sweep_theta.dat"):
        assert np.loadtxt(d / name, ndmin=2).shape[1] == 2


def test_simulate_from_saved_profile(tmp_path):
    assert main(["micropteron", "--epsilon", "0.2", "--mu", "1e-3", "--out", str(tmp_path)]) == EXIT_OK
    path = tmp_path / "micropteron" / "mu_00" / "profile.csv"
    prof = read_profile_csv(path)
    assert prof.mu == 1e-3
    assert main(["simulate", "--profiles", str(path), "--T", "10", "--out", str(tmp_path)]) == EXIT_OK
    rec = json.loads((tmp_path / "simulate" / "diagnostics.json").read_text())
    assert rec["stages"]["simulate"]["shift_error"] < 1e-8


def test_stage_failure_exit_code(tmp_path):
    assert main(["periodic", "--c", "1.01", "--mu", "0.5", "--out", str(tmp_path)]) == EXIT_STAGE
    rec = json.loads((tmp_path / "periodic" / "diagnostics.json").read_text())
    assert rec["stages"]["periodic"]["status"] == "failed"


def test_hypothesis_failure_exit_code(tmp_path):
    # a box far too small for eps = 0.2 breaks the manufactured H_c solve
    code = main(["jost", "--epsilon", "0.2", "--L", "32", "--N", "256", "--out", str(tmp_path)])
    assert code == EXIT_HYPOTHESIS
    rec = json.loads((tmp_path / "jost" / "diagnostics.json").read_text())
    assert rec["hypotheses"]["H2"]["status"] == "fail"


def test_config_file_round_trip(tmp_path):
    cfg = RunConfig("solitary", epsilon=0.3, out=str(tmp_path), name="fromfile")
    (tmp_path / "cfg.json").write_text(json.dumps(cfg.to_json()))
    assert main(["solitary", "--config", str(tmp_path / "cfg.json")]) == EXIT_OK
    assert (tmp_path / "fromfile" / "solitary.csv").exists()
