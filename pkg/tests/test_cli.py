import json

import numpy as np
import pytest

from nhtopo import ConfigError, Statistics
from nhtopo.cli import main
from nhtopo.configio import (load_config, model_from_jsonable,
                             model_to_jsonable, resolve_hn_params,
                             resolve_model)
from nhtopo.tables import format_value, read_csv, read_json

from conftest import PHI

HN_LINES = """\
# reference chain
omega0 = 0.0
t_c = 1.0
phi = {phi}
kappa = {kappa}
t_d = 1.0
n_sites = {n}
statistics = bosonic
boundary = {boundary}
"""


def write_cfg(path, body):
    path.write_text(body)
    return str(path)


def hn_cfg(tmp_path, name="run.cfg", kappa=4.0, n=12, boundary="open",
           phi=PHI, extra=""):
    body = HN_LINES.format(phi=repr(phi), kappa=kappa, n=n,
                           boundary=boundary) + extra
    return write_cfg(tmp_path / name, body)


class TestConfigIO:
    def test_key_value_parsing(self, tmp_path):
        cfg = load_config(hn_cfg(tmp_path, extra="kappas = 2.0, 4.0\n"))
        assert cfg["omega0"] == 0.0
        assert cfg["n_sites"] == 12
        assert cfg["kappas"] == [2.0, 4.0]
        params = resolve_hn_params(cfg)
        assert params.kappa == 4.0
        assert params.statistics is Statistics.BOSONIC

    def test_json_config(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({
            "omega0": 0.0, "t_c": 1.0, "phi": 0.0, "kappa": 2.0, "t_d": 0.5,
            "n_sites": 4, "statistics": "fermionic", "boundary": "open"}))
        model, params = resolve_model(load_config(path))
        assert params.statistics is Statistics.FERMIONIC
        assert model.n_sites == 4

    def test_missing_keys_rejected(self, tmp_path):
        path = write_cfg(tmp_path / "bad.cfg", "omega0 = 1.0\n")
        with pytest.raises(ConfigError, match="missing model keys"):
            resolve_model(load_config(path))

    def test_malformed_line_reports_position(self, tmp_path):
        path = write_cfg(tmp_path / "bad.cfg", "omega0 = 0\nnonsense\n")
        with pytest.raises(ConfigError, match="bad.cfg:2"):
            load_config(path)

    def test_bad_statistics_rejected(self, tmp_path):
        cfg = load_config(hn_cfg(tmp_path))
        cfg["statistics"] = "anyonic"
        with pytest.raises(ConfigError, match="anyonic"):
            resolve_hn_params(cfg)

    def test_generic_model_roundtrip(self, stable_open_model, tmp_path):
        data = model_to_jsonable(stable_open_model)
        text = json.dumps(data)
        back = model_from_jsonable(json.loads(text))
        np.testing.assert_allclose(back.hamiltonian,
                                   stable_open_model.hamiltonian)
        np.testing.assert_allclose(back.gamma_pump,
                                   stable_open_model.gamma_pump)
        assert back.statistics is stable_open_model.statistics

    def test_generic_model_file(self, stable_open_model, tmp_path):
        model_path = tmp_path / "model.json"
        model_path.write_text(json.dumps(model_to_jsonable(stable_open_model)))
        cfg_path = write_cfg(tmp_path / "run.cfg",
                             "model_file = model.json\n")
        model, params = resolve_model(load_config(cfg_path),
                                      base_dir=tmp_path)
        assert params is None
        assert model.n_sites == stable_open_model.n_sites


class TestFormatting:
    def test_twelve_significant_digits(self):
        assert format_value(np.pi) == "3.14159265359"
        assert format_value(1e-8) == "1e-08"
        assert format_value(2.0) == "2"
        assert format_value(-3) == "-3"
        assert format_value(None) == ""
        assert format_value(True) == "true"

    def test_reformat_is_stable(self):
        rng = np.random.default_rng(61)
        for x in rng.normal(scale=10.0, size=200):
            s = format_value(float(x))
            assert format_value(float(s)) == s


class TestCommands:
    def test_winding_exit_codes_and_determinism(self, tmp_path, capsys):
        cfg = hn_cfg(tmp_path, extra=(
            "omega_min = -3.0\nomega_max = 3.0\nomega_steps = 13\n"
            "k_steps = 128\nkappas = 4.0, 12.0\n"))
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        code1 = main(["winding", "--config", cfg, "--out", str(out1)])
        code2 = main(["winding", "--config", cfg, "--out", str(out2),
                      "--threads", "8"])
        err = capsys.readouterr().err
        # omega = +/- 2 sits on the grid: flagged cells, nonzero exit
        assert code1 == 1 and code2 == 1
        assert out1.read_bytes() == out2.read_bytes()
        summary = json.loads(err.splitlines()[-1])
        assert summary["flags"]
        table = read_csv(out1)
        sec = {s.name: s for s in table.sections}
        w1_topo = {row[0]: row[1] for row in sec["winding kappa=4"].rows}
        assert w1_topo[0.0] == 1 and w1_topo[3.0] == 0
        assert all(row[1] == 0 for row in sec["winding kappa=12"].rows
                   if row[3] != "critical")

    def test_loop_sections(self, tmp_path):
        cfg = hn_cfg(tmp_path, n=12, boundary="periodic",
                      extra="k_steps = 128\nprobes = 0.0, 5.0\n")
        out = tmp_path / "loop.csv"
        assert main(["loop", "--config", cfg, "--out", str(out)]) == 0
        table = read_csv(out)
        sec = {s.name: s for s in table.sections}
        probes = {(row[0], row[1]): row[2] for row in sec["probes"].rows}
        assert abs(probes[(0.0, 0.0)]) == 1
        assert probes[(5.0, 0.0)] == 0
        # skin collapse: all open-chain eigenvalues on one point
        eigs = np.array([[row[1], row[2]] for row in
                         sec["obc_eigenvalues"].rows])
        center = eigs.mean(axis=0)
        assert np.max(np.linalg.norm(eigs - center, axis=1)) < 1e-7

    def test_loop_flat_when_no_dissipative_hopping(self, tmp_path):
        cfg = write_cfg(tmp_path / "flat.cfg", HN_LINES.format(
            phi="0.0", kappa=3.0, n=8, boundary="open")
            .replace("t_d = 1.0", "t_d = 0.0") + "k_steps = 64\n")
        out = tmp_path / "flat.csv"
        assert main(["loop", "--config", cfg, "--out", str(out)]) == 0
        table = read_csv(out)
        loop_rows = next(s for s in table.sections if s.name == "pbc_loop").rows
        ims = {row[2] for row in loop_rows}
        assert ims == {-1.5}

    def test_spectrum_sections(self, tmp_path):
        cfg = hn_cfg(tmp_path, n=40, extra=(
            "omega_min = -3.0\nomega_max = 3.0\nomega_steps = 7\n"
            "k_steps = 64\nomega_fixed = 2.0\n"))
        out = tmp_path / "spec.csv"
        assert main(["spectrum", "--config", cfg, "--out", str(out)]) == 0
        table = read_csv(out)
        sec = {s.name: s for s in table.sections}
        # gap closure at the fixed frequency
        assert min(r[1] for r in sec["vs_k"].rows) < 1e-6
        # near-zero open-chain mode inside the window
        obc_min = {}
        for w, idx, eps in sec["obc_vs_omega"].rows:
            obc_min[w] = min(obc_min.get(w, np.inf), eps)
        assert obc_min[1.0] < 1e-6
        assert obc_min[3.0] > 0.1

    def test_susceptibility_fit_note(self, tmp_path):
        cfg = write_cfg(tmp_path / "sus.cfg", HN_LINES.format(
            phi=repr(-PHI), kappa=7.0, n=10, boundary="open") + (
            "omega_min = 0.9\nomega_max = 1.7\nomega_steps = 17\n"
            "source_site = 1\nprobe_sites = 2, 4, 6, 8, 10\n"))
        out = tmp_path / "sus.json"
        code = main(["susceptibility", "--config", cfg, "--out", str(out),
                     "--format", "json"])
        assert code == 0
        table = read_json(out)
        beta = table.notes["fit"]["beta"]
        assert beta == pytest.approx(2 * np.sqrt(1 - 0.75 ** 2), rel=0.05)
        sites = {row[1] for row in table.sections[0].rows}
        assert sites == {2, 4, 6, 8, 10}

    def test_validate_stable_chain(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path / "val.cfg", HN_LINES.format(
            phi=repr(PHI), kappa=7.0, n=6, boundary="open"))
        out = tmp_path / "val.csv"
        assert main(["validate", "--config", cfg, "--out", str(out)]) == 0
        table = read_csv(out)
        rows = table.sections[0].rows
        status = {row[0]: row[1] for row in rows}
        assert status["sum_rule"] == "pass"
        assert status["regression_spectrum"] == "pass"
        assert all(s in ("pass", "skipped") for s in status.values())

    def test_validate_unstable_reports_but_greens_pass(self, tmp_path,
                                                       capsys):
        cfg = hn_cfg(tmp_path, kappa=4.0, n=12, boundary="periodic")
        out = tmp_path / "val.csv"
        code = main(["validate", "--config", cfg, "--out", str(out)])
        assert code == 1
        summary = json.loads(capsys.readouterr().err.splitlines()[-1])
        assert any(f["check"] == "stability" for f in summary["flags"])
        table = read_csv(out)
        status = {row[0]: row[1] for row in table.sections[0].rows}
        assert status["stability"] == "unstable"
        assert status["sum_rule"] == "skipped"
        greens_rows = [s for c, s, *_ in table.sections[0].rows
                       if c.startswith(("greens", "svd", "correlation"))]
        assert greens_rows and all(s == "pass" for s in greens_rows)

    def test_validate_single_fermionic_site(self, tmp_path):
        path = tmp_path / "one.json"
        path.write_text(json.dumps({
            "model": {
                "n_sites": 1, "statistics": "fermionic", "boundary": "open",
                "hamiltonian": [[[0.0, 0.0]]],
                "gamma_decay": [[[3.0, 0.0]]],
                "gamma_pump": [[[1.0, 0.0]]]},
        }))
        out = tmp_path / "one.csv"
        assert main(["validate", "--config", str(path), "--out",
                     str(out)]) == 0
        table = read_csv(out)
        rows = {row[0]: row for row in table.sections[0].rows}
        check = rows["single_site_occupation"]
        assert check[1] == "pass"
        assert check[2] == pytest.approx(0.25)  # p / (kappa + p)

    def test_config_error_exit_code(self, tmp_path, capsys):
        path = write_cfg(tmp_path / "bad.cfg", "omega0 = 0\n")
        assert main(["winding", "--config", str(path)]) == 2
        err = json.loads(capsys.readouterr().err.splitlines()[-1])
        assert err["error"] == "ConfigError"

    def test_csv_roundtrip_byte_identical(self, tmp_path):
        cfg = hn_cfg(tmp_path, extra=(
            "omega_min = -1.0\nomega_max = 1.0\nomega_steps = 5\n"
            "k_steps = 64\n"))
        out = tmp_path / "w.csv"
        main(["winding", "--config", cfg, "--out", str(out)])
        assert read_csv(out).to_csv() == out.read_text()

    def test_json_roundtrip_byte_identical(self, tmp_path):
        cfg = hn_cfg(tmp_path, extra=(
            "omega_min = -1.0\nomega_max = 1.0\nomega_steps = 5\n"
            "k_steps = 64\n"))
        out = tmp_path / "w.json"
        main(["winding", "--config", cfg, "--out", str(out), "--format",
              "json"])
        assert read_json(out).to_json() == out.read_text()

    def test_env_thread_fallback(self, tmp_path, monkeypatch):
        cfg = hn_cfg(tmp_path, extra=(
            "omega_min = -1.0\nomega_max = 1.0\nomega_steps = 5\n"
            "k_steps = 64\n"))
        out1 = tmp_path / "w1.csv"
        out2 = tmp_path / "w2.csv"
        main(["winding", "--config", cfg, "--out", str(out1)])
        monkeypatch.setenv("NHTOPO_THREADS", "4")
        main(["winding", "--config", cfg, "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()
