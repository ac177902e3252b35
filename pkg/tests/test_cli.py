import csv
import json

import numpy as np
import pytest

from invlabel import cli
from invlabel.constants import ExitCode
from invlabel.error import ConfigError, FileIOError, SingularSystemError

BASE = {
    "map": {"type": "standard", "k": 0.5},
    "domain": {"topology": "cylinder", "y_range": [0.0, 1.0]},
    "kernel": {"family": "periodic_product", "sigma": 0.1},
    "boundary": {"type": "smoothed", "a": 0.0, "b": 1.0},
    "N": 30,
    "epsilon": 1e-3,
    "validation": {"J": 20, "T": 10},
}

ZERO_REGION = {
    "type": "zero_region",
    "region": {"type": "union", "regions": [{"type": "below", "y": 0.15}, {"type": "above", "y": 0.85}]},
}


def _read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


@pytest.fixture
def run(tmp_path):
    """Runs the CLI with a config and an output directory under tmp_path."""
    def _run(command, config_path, *extra, out="out"):
        return cli.main([command, "--config", config_path, "--output-dir", str(tmp_path / out), *extra])
    return _run


# --- Configuration ---

def test_parse_override():
    assert cli.parse_override("kernel.sigma=0.1") == (["kernel", "sigma"], 0.1)
    assert cli.parse_override("output.directory=results") == (["output", "directory"], "results")
    assert cli.parse_override('map={"type": "rotation"}') == (["map"], {"type": "rotation"})
    with pytest.raises(ConfigError):
        cli.parse_override("kernel.sigma")
    with pytest.raises(ConfigError):
        cli.parse_override("=1")


def test_apply_overrides_copies_the_document():
    raw = {"kernel": {"family": "periodic_product", "sigma": 0.1}, "N": 10}
    doc = cli.apply_overrides(raw, ["kernel.sigma=0.2", "scan.workers=2", "N=20"])
    assert doc["kernel"]["sigma"] == 0.2
    assert doc["scan"] == {"workers": 2}
    assert doc["N"] == 20
    assert raw["kernel"]["sigma"] == 0.1
    with pytest.raises(ConfigError):
        cli.apply_overrides(raw, ["N.value=3"])


def test_load_config_errors(tmp_path, write_config):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        cli.load_config(str(bad_json))
    with pytest.raises(ConfigError):
        cli.load_config(write_config([1, 2, 3]))
    with pytest.raises(ConfigError):
        cli.load_config(write_config(BASE), ["epsilon=-1"])
    with pytest.raises(FileIOError):
        cli.load_config(str(tmp_path / "missing.json"))
    assert cli.load_config(write_config(BASE), ["N=12"]).N == 12


def test_bad_command_line_exits_with_usage_code(write_config):
    assert cli.main([]) == 2
    assert cli.main(["solve-bvp"]) == 2


# --- Commands ---

def test_poincare(tmp_path, run, write_config):
    path = write_config(BASE)
    assert run("poincare", path, "--set", "poincare.n_seeds=3", "--set", "poincare.steps=4") == ExitCode.OK
    rows = _read_rows(tmp_path / "out" / "poincare.csv")
    assert rows[0] == ["trajectory_id", "step", "x", "y"]
    assert len(rows) == 1 + 3 * 5


def test_poincare_without_kick_keeps_y(tmp_path, run, write_config):
    path = write_config(BASE)
    assert run("poincare", path, "--set", "map.k=0", "--set", "poincare.n_seeds=2", "--set", "poincare.steps=6") == 0
    rows = _read_rows(tmp_path / "out" / "poincare.csv")[1:]
    for traj in ("0", "1"):
        ys = {row[3] for row in rows if row[0] == traj}
        assert len(ys) == 1


def test_solve_bvp_is_deterministic(tmp_path, run, write_config):
    path = write_config(BASE)
    assert run("solve-bvp", path, out="a") == ExitCode.OK
    assert run("solve-bvp", path, out="b") == ExitCode.OK
    for name in ("model.json", "report.json", "samples.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    report = json.loads((tmp_path / "a" / "report.json").read_text(encoding="utf-8"))
    assert set(report) == {"report", "provenance", "config"}
    assert report["provenance"]["N"] == 30


def test_solve_bvp_uses_the_sample_cache(tmp_path, run, write_config):
    cache = str(tmp_path / "cache" / "samples.csv")
    path = write_config({**BASE, "output": {"samples_cache": cache}})
    assert run("solve-bvp", path, out="a") == 0
    assert (tmp_path / "cache" / "samples.csv").exists()
    assert run("solve-bvp", path, out="b") == 0
    assert (tmp_path / "a" / "model.json").read_bytes() == (tmp_path / "b" / "model.json").read_bytes()


def test_sample_cache_is_rebuilt_for_another_map(tmp_path, write_config):
    cache = str(tmp_path / "cache" / "samples.csv")
    path = write_config({**BASE, "output": {"samples_cache": cache}})
    cli.get_samples(cli.load_config(path))
    cfg = cli.load_config(path, ["map.k=1.2"])
    np.testing.assert_array_equal(cli.get_samples(cfg).z, cli.get_samples(cfg, use_cache=False).z)
    # the rebuilt cache now serves k = 1.2
    np.testing.assert_array_equal(cli.get_samples(cfg).z, cli.get_samples(cfg, use_cache=False).z)


def test_invalid_utf8_config_is_a_config_error(tmp_path, run):
    path = tmp_path / "bad.json"
    path.write_bytes(b"{\"N\": \"\xff\"}")
    assert run("solve-bvp", str(path)) == ExitCode.CONFIG


def test_solve_bvp_needs_a_kernel(run, write_config):
    doc = {k: v for k, v in BASE.items() if k != "kernel"}
    assert run("solve-bvp", write_config(doc)) == ExitCode.CONFIG


def test_solve_evp(tmp_path, run, write_config):
    path = write_config({**BASE, "boundary": ZERO_REGION, "n_eigs": 2})
    assert run("solve-evp", path) == ExitCode.OK
    eigen = json.loads((tmp_path / "out" / "eigen.json").read_text(encoding="utf-8"))
    assert eigen["models"] == ["model_1.json", "model_2.json"]
    assert eigen["eigenvalues"][0] <= eigen["eigenvalues"][1]
    assert (tmp_path / "out" / "model_2.json").exists()


def test_solve_evp_argument_errors(run, write_config):
    assert run("solve-evp", write_config({**BASE, "boundary": ZERO_REGION, "n_eigs": 60})) == ExitCode.CONFIG
    assert run("solve-evp", write_config(BASE)) == ExitCode.CONFIG


def test_validate(tmp_path, run, write_config):
    path = write_config(BASE)
    assert run("validate", path, "--model", str(tmp_path / "nope.json")) == ExitCode.IO
    assert run("solve-bvp", path) == 0
    assert run("validate", path, "--model", str(tmp_path / "out" / "model.json")) == ExitCode.OK
    result = json.loads((tmp_path / "out" / "validation.json").read_text(encoding="utf-8"))
    assert result["S"] >= 0.0
    assert result["J"] == 20 and result["T"] == 10
    rows = _read_rows(tmp_path / "out" / "validation_pairs.csv")
    assert rows[0] == ["h", "wb"]
    assert len(rows) == 21


def test_eval_grid(tmp_path, run, write_config):
    path = write_config(BASE)
    assert run("solve-bvp", path) == 0
    model = str(tmp_path / "out" / "model.json")
    assert run("eval-grid", path, "--model", model, "--nx", "4", "--ny", "3") == ExitCode.OK
    rows = _read_rows(tmp_path / "out" / "grid.csv")
    assert rows[0] == ["x", "y", "h"]
    assert len(rows) == 13
    assert run("eval-grid", path, "--model", model, "--nx", "1") == ExitCode.CONFIG
    assert run("eval-grid", path, "--model", model, "--nx", "0") == ExitCode.CONFIG


def test_numerical_failures_exit_with_their_code(monkeypatch, run, write_config):
    def singular(*args, **kwargs):
        raise SingularSystemError("singular", condition=float("inf"))

    monkeypatch.setattr(cli, "solve_bvp", singular)
    assert run("solve-bvp", write_config(BASE)) == ExitCode.NUMERICAL


# --- Scans ---

def test_scan_needs_two_values(run, write_config):
    assert run("scan", write_config({**BASE, "scan": {"parameter": "k", "values": [0.3]}})) == ExitCode.CONFIG
    assert run("scan", write_config(BASE)) == ExitCode.CONFIG


def test_k_scan(tmp_path, run, write_config):
    path = write_config({**BASE, "scan": {"parameter": "k", "values": [0.6, 0.0, 0.3], "workers": 2}})
    assert run("scan", path) == ExitCode.OK
    rows = _read_rows(tmp_path / "out" / "scan.csv")
    assert rows[0] == ["k", "R", "E_inv", "E_bd", "E_K"]
    assert [float(r[0]) for r in rows[1:]] == [0.0, 0.3, 0.6]


def test_epsilon_scan_kernel_energy_decreases(tmp_path, run, write_config):
    path = write_config({**BASE, "scan": {"parameter": "epsilon", "values": [1e-2, 1e-4, 1e-3]}})
    assert run("scan", path) == ExitCode.OK
    rows = _read_rows(tmp_path / "out" / "scan.csv")[1:]
    energies = [float(r[4]) for r in rows]
    assert energies[1] <= energies[0] * (1.0 + 1e-9)
    assert energies[2] <= energies[1] * (1.0 + 1e-9)


def test_scan_parameter_must_fit_the_map(run, write_config):
    path = write_config({**BASE, "scan": {"parameter": "omega", "values": [0.1, 0.2]}})
    assert run("scan", path) == ExitCode.CONFIG


def test_evp_and_validation_scans(tmp_path, run, write_config):
    evp = write_config({**BASE, "boundary": ZERO_REGION, "n_eigs": 2,
                        "scan": {"parameter": "sigma", "values": [0.1, 0.2], "solver": "evp"}}, name="evp.json")
    assert run("scan", evp, out="evp") == ExitCode.OK
    rows = _read_rows(tmp_path / "evp" / "scan.csv")
    assert rows[0] == ["sigma", "lambda_1", "lambda_2"]
    assert len(rows) == 3

    val = write_config({**BASE, "scan": {"parameter": "N", "values": [10, 20], "solver": "validate"}}, name="val.json")
    assert run("scan", val, out="val") == ExitCode.OK
    rows = _read_rows(tmp_path / "val" / "scan.csv")
    assert rows[0] == ["N", "sigma0", "S"]
    assert [int(r[0]) for r in rows[1:]] == [10, 20]
    assert float(rows[1][1]) == pytest.approx(0.1 * 10 ** 0.5)


def test_two_axis_scans(tmp_path, run, write_config):
    val = write_config({**BASE, "kernel": {"family": "periodic_product", "sigma0": 1.0}, "scan": {
        "parameter": "sigma0", "values": [2.0, 1.0], "solver": "validate",
        "secondary": {"parameter": "N", "values": [20, 10]},
    }}, name="val.json")
    assert run("scan", val, out="val") == ExitCode.OK
    rows = _read_rows(tmp_path / "val" / "scan.csv")
    assert rows[0] == ["sigma0", "N", "S"]
    assert [(float(r[0]), int(r[1])) for r in rows[1:]] == [(1.0, 10), (1.0, 20), (2.0, 10), (2.0, 20)]

    bvp = write_config({**BASE, "scan": {
        "parameter": "k", "values": [0.0, 0.5], "secondary": {"parameter": "sigma", "values": [0.1, 0.2]},
    }}, name="bvp.json")
    assert run("scan", bvp, out="bvp") == ExitCode.OK
    rows = _read_rows(tmp_path / "bvp" / "scan.csv")
    assert rows[0] == ["k", "sigma", "R", "E_inv", "E_bd", "E_K"]
    assert len(rows) == 5


def test_scan_axes_must_differ(run, write_config):
    same = write_config({**BASE, "scan": {"parameter": "k", "values": [0.1, 0.2],
                                          "secondary": {"parameter": "k", "values": [0.3]}}})
    assert run("scan", same) == ExitCode.CONFIG
