import json

import numpy as np

from worldtube import cli


SMALL_CFG = {
    "seed": 11,
    "worldline": {"accel": 1.0},
    "shell": {"radius": 0.15, "charge": 1.0},
    "test_functions": [{"center": [0.0, 2.0, 0.0, 0.0], "radius": 0.5}],
    "quadrature": {"n_theta": 8, "n_phi": 16, "pairing_order": 12,
                   "pairing_err_order": 8, "prediction_order": 16,
                   "prediction_err_order": 12},
    "verify": {"boost_pairs": 150, "retardation_cases": 400},
}


def write_cfg(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def test_config_roundtrip_idempotent(tmp_path):
    path = write_cfg(tmp_path, SMALL_CFG)
    cfg1 = cli.load_config(path)
    path2 = write_cfg(tmp_path, cfg1, "effective.json")
    cfg2 = cli.load_config(path2)
    assert cfg1 == cfg2


def test_unknown_key_rejected(tmp_path):
    bad = dict(SMALL_CFG)
    bad["not_a_key"] = 1
    path = write_cfg(tmp_path, bad)
    assert cli.main(["verify", "--config", path, "--out", str(tmp_path / "o")]) == 2


def test_nested_unknown_key_rejected(tmp_path):
    bad = json.loads(json.dumps(SMALL_CFG))
    bad["worldline"]["rapidty"] = 0.5
    path = write_cfg(tmp_path, bad)
    assert cli.main(["verify", "--config", path, "--out", str(tmp_path / "o")]) == 2


def test_corrupted_json_exit_2(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{broken")
    assert cli.main(["verify", "--config", str(path), "--out", str(tmp_path / "o")]) == 2


def test_wedge_violation_exit_2(tmp_path):
    bad = json.loads(json.dumps(SMALL_CFG))
    bad["shell"]["radius"] = 1.5
    path = write_cfg(tmp_path, bad)
    assert cli.main(["verify", "--config", path, "--out", str(tmp_path / "o")]) == 2


def test_verify_passes(tmp_path):
    path = write_cfg(tmp_path, SMALL_CFG)
    out = tmp_path / "out"
    assert cli.main(["verify", "--config", path, "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["pass"] is True
    assert all(e["passed"] for e in report["suite"])
    # every suite entry reports its worst value against a tolerance
    assert all("worst" in e and "tolerance" in e for e in report["suite"])


def test_compare_deterministic(tmp_path):
    path = write_cfg(tmp_path, SMALL_CFG)
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert cli.main(["compare", "--config", path, "--out", str(out1)]) == 0
    assert cli.main(["compare", "--config", path, "--out", str(out2)]) == 0
    assert (out1 / "results.csv").read_bytes() == (out2 / "results.csv").read_bytes()
    header = (out1 / "results.csv").read_text().splitlines()[0]
    assert header == ("eps,a_c,delta_t,delta_x,delta_y,delta_z,"
                      "pred_t,pred_x,pred_y,pred_z,ratio,err_est")
    report = json.loads((out1 / "report.json").read_text())
    assert report["records"][0]["verdict"] == "NOT_EQUAL"


def test_compare_inertial_equal(tmp_path):
    cfg = json.loads(json.dumps(SMALL_CFG))
    cfg["worldline"]["accel"] = 0.0
    path = write_cfg(tmp_path, cfg)
    out = tmp_path / "out"
    assert cli.main(["compare", "--config", path, "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    rec = report["records"][0]
    assert rec["verdict"] == "EQUAL"
    assert np.linalg.norm(rec["delta"]) <= 10 * rec["delta_error"]


def test_compare_flushes_partial_results(tmp_path):
    # second test function hugs the tube: its comparison aborts, but the
    # first row is still flushed to the CSV and the report records the error
    cfg = json.loads(json.dumps(SMALL_CFG))
    cfg["test_functions"] = [
        {"center": [0.0, 2.0, 0.0, 0.0], "radius": 0.5},
        {"center": [0.0, 0.2, 0.0, 0.0], "radius": 0.5},
    ]
    path = write_cfg(tmp_path, cfg)
    out = tmp_path / "out"
    assert cli.main(["compare", "--config", path, "--out", str(out)]) == 1
    lines = (out / "results.csv").read_text().splitlines()
    assert len(lines) == 2          # header + the completed first row
    report = json.loads((out / "report.json").read_text())
    assert report["error"] is not None
    assert len(report["records"]) == 1


def test_sweep_too_few_values(tmp_path):
    cfg = json.loads(json.dumps(SMALL_CFG))
    cfg["sweep"] = {"eps_values": [0.1, 0.2]}
    path = write_cfg(tmp_path, cfg)
    assert cli.main(["sweep", "--config", path, "--out", str(tmp_path / "o")]) == 2


def test_sweep_runs_and_fits_slope(tmp_path):
    cfg = json.loads(json.dumps(SMALL_CFG))
    cfg["sweep"] = {"eps_factors": [0.16, 0.08, 0.04], "convention": "fixed_charge"}
    path = write_cfg(tmp_path, cfg)
    out = tmp_path / "out"
    assert cli.main(["sweep", "--config", path, "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert 1.8 < report["slope"] < 2.2
    lines = (out / "results.csv").read_text().splitlines()
    assert lines[0] == "eps,norm_delta,norm_pred,ratio"
    assert len(lines) == 4


def test_sweep_fixed_sigma_convention(tmp_path):
    cfg = json.loads(json.dumps(SMALL_CFG))
    cfg["sweep"] = {"eps_factors": [0.16, 0.08, 0.04], "convention": "fixed_sigma"}
    path = write_cfg(tmp_path, cfg)
    out = tmp_path / "out"
    assert cli.main(["sweep", "--config", path, "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert 3.5 < report["slope"] < 4.5
    assert report["convention"] == "fixed_sigma"


def test_threads_env_fallback(tmp_path, monkeypatch):
    path = write_cfg(tmp_path, SMALL_CFG)
    out = tmp_path / "out"
    monkeypatch.setenv("WORLDTUBE_THREADS", "3")
    assert cli.main(["verify", "--config", path, "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["threads"] == 3


def test_out_dir_from_config(tmp_path):
    cfg = json.loads(json.dumps(SMALL_CFG))
    cfg["out_dir"] = str(tmp_path / "cfg_out")
    path = write_cfg(tmp_path, cfg)
    assert cli.main(["verify", "--config", path]) == 0
    assert (tmp_path / "cfg_out" / "report.json").exists()
    # --out still wins over the config value
    assert cli.main(["verify", "--config", path, "--out", str(tmp_path / "flag")]) == 0
    assert (tmp_path / "flag" / "report.json").exists()


def test_verify_covers_compare_invariants(tmp_path):
    path = write_cfg(tmp_path, SMALL_CFG)
    out = tmp_path / "out"
    assert cli.main(["verify", "--config", path, "--out", str(out)]) == 0
    names = {e["name"] for e in
             json.loads((out / "report.json").read_text())["suite"]}
    assert {"inertial_equivalence", "route_equivalence_point",
            "kappa_independence"} <= names


def test_seed_flag_overrides_config(tmp_path):
    path = write_cfg(tmp_path, SMALL_CFG)
    out = tmp_path / "out"
    assert cli.main(["verify", "--config", path, "--out", str(out), "--seed", "99"]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["seed"] == 99


def test_shell_rejects_charge_and_sigma(tmp_path):
    cfg = json.loads(json.dumps(SMALL_CFG))
    cfg["shell"] = {"radius": 0.1, "charge": 1.0, "sigma": 2.0}
    path = write_cfg(tmp_path, cfg)
    assert cli.main(["compare", "--config", path, "--out", str(tmp_path / "o")]) == 2


def test_shell_sigma_form_accepted(tmp_path):
    cfg = json.loads(json.dumps(SMALL_CFG))
    cfg["shell"] = {"radius": 0.1, "sigma": 2.0}
    cfg2 = cli.load_config(write_cfg(tmp_path, cfg))
    _, shell, _, _ = cli.build_experiment(cfg2)
    assert shell.sigma == 2.0


def test_boosted_config_builds(tmp_path):
    cfg = json.loads(json.dumps(SMALL_CFG))
    cfg["worldline"]["rapidity"] = 1.0
    center, shell, phis, quad = cli.build_experiment(
        cli.load_config(write_cfg(tmp_path, cfg)))
    # the worldline velocity has the requested rapidity; n stays orthonormal
    assert abs(center.u[0] - np.cosh(1.0)) < 1e-12
    assert abs(cli.lorentz_product(center.u, center.n)) < 1e-12
    # the (0, 2, 0, 0) tetrad offset is purely spatial in the boosted frame
    offset = phis[0].center - center.x0
    assert abs(cli.lorentz_product(offset, center.u)) < 1e-12
    assert abs(cli.lorentz_product(offset, center.n) - 2.0) < 1e-12
