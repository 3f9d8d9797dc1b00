import csv
import io
import json
from pathlib import Path

import numpy as np
import pytest

from opevolve.cli import main
from opevolve.cli.chaos import chaos_demo
from opevolve.cli.heisenberg import heisenberg_print
from opevolve.opalgebra import HamiltonianSpec


def _write(tmp_path: Path, config: dict) -> str:
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return str(path)


def _run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


def _free_config(tmp_path):
    return {
        "hamiltonian": {"kind": "free"},
        "initial_state": {"type": "gaussian", "width": 1.0},
        "methods": [{"name": "fourier"}, {"name": "oracle", "steps": 4096}],
        "times": [0.0, 0.5, 1.0],
        "outputs": [
            {"kind": "comparison_json", "path": str(tmp_path / "cmp.json")},
            {"kind": "observables_csv", "path": str(tmp_path / "obs.csv")},
            {"kind": "density_csv", "path": str(tmp_path / "density")},
            {"kind": "metadata_json", "path": str(tmp_path / "meta.json")},
        ],
    }


def test_compare_free_gaussian(tmp_path):
    code, text = _run(["compare", _write(tmp_path, _free_config(tmp_path))])
    assert code == 0
    assert len(text.strip().splitlines()) == 3
    cmp = json.loads((tmp_path / "cmp.json").read_text())
    assert cmp["method_a"] == "fourier" and cmp["method_b"] == "oracle4096"
    assert all(row["l2"] <= 1e-6 for row in cmp["per_time"])
    density = sorted((tmp_path / "density").iterdir())
    assert len(density) == 6
    rows = list(csv.reader(density[0].open()))
    assert rows[0] == ["q", "re_psi", "im_psi", "density"]
    assert all(len(r) == 4 for r in rows) and len(rows) == 1025


def test_metadata_echo_reruns_identically(tmp_path):
    cfg = _free_config(tmp_path)
    _run(["run", _write(tmp_path, cfg)])
    meta = json.loads((tmp_path / "meta.json").read_text())
    assert meta["tool"] == "opevolve"
    first = (tmp_path / "obs.csv").read_bytes()
    first_density = (tmp_path / "density" / "density_fourier_0002.csv").read_bytes()
    rerun = tmp_path / "again"
    rerun.mkdir()
    _run(["run", _write(rerun, meta["config"])])
    assert (tmp_path / "obs.csv").read_bytes() == first
    assert (tmp_path / "density" / "density_fourier_0002.csv").read_bytes() == first_density


def test_harmonic_coherent_observables(tmp_path):
    times = list(np.linspace(0, 2 * np.pi, 17))
    cfg = {
        "hamiltonian": {"kind": "harmonic", "omega": 1.0},
        "initial_state": {"type": "gaussian", "center": 2.0, "width": 1.0},
        "methods": [{"name": "fourier"}],
        "times": times,
        "outputs": [{"kind": "observables_csv", "path": str(tmp_path / "obs.csv")},
                    {"kind": "metadata_json", "path": str(tmp_path / "meta.json")}],
    }
    assert _run(["run", _write(tmp_path, cfg)])[0] == 0
    rows = list(csv.DictReader((tmp_path / "obs.csv").open()))
    assert len(rows) == 17
    for row in rows:
        assert abs(float(row["mean_q"]) - 2.0 * np.cos(float(row["t"]))) <= 1e-6
    meta = json.loads((tmp_path / "meta.json").read_text())
    assert [e["name"] for e in meta["errata"]] == ["harmonic_fourier_rederived"]


def test_polynomial_method_on_window(tmp_path):
    cfg = {
        "hamiltonian": {"kind": "constant_force", "force": 1.0},
        "initial_state": {"type": "polynomial", "coefficients": [0, 1]},
        "methods": [{"name": "polynomial"}, {"name": "operator_series", "order": 3}],
        "times": [0.5],
        "outputs": [{"kind": "metadata_json", "path": str(tmp_path / "meta.json")}],
    }
    code, _ = _run(["compare", _write(tmp_path, cfg)])
    assert code == 0
    meta = json.loads((tmp_path / "meta.json").read_text())
    names = {e["name"] for e in meta["errata"]}
    assert "constant_force_kernel_time_factor" in names


def test_harmonic_series_failure_exits_3(tmp_path):
    cfg = {
        "hamiltonian": {"kind": "harmonic", "omega": 1.0},
        "initial_state": {"type": "polynomial", "coefficients": [1]},
        "methods": [{"name": "polynomial", "window": [-4, 4]}],
        "times": [1.0],
    }
    assert _run(["run", _write(tmp_path, cfg)])[0] == 3
    cfg["methods"] = [{"name": "polynomial", "resummed": True}]
    assert _run(["run", _write(tmp_path, cfg)])[0] == 0


@pytest.mark.parametrize("patch", [
    {"times": [1.0, 0.5]},
    {"times": [-1.0]},
    {"methods": [{"name": "polynomial"}]},
    {"hamiltonian": {"kind": "harmonic"}},
    {"grid": {"n_points": 1000}},
    {"unknown": 1},
])
def test_invalid_configs_exit_2(tmp_path, patch, capsys):
    cfg = _free_config(tmp_path)
    cfg.update(patch)
    assert _run(["run", _write(tmp_path, cfg)])[0] == 2
    assert capsys.readouterr().err.strip()


def test_validation_message_names_field(tmp_path, capsys):
    cfg = _free_config(tmp_path)
    cfg["times"] = [1.0, 0.5]
    _run(["run", _write(tmp_path, cfg)])
    assert capsys.readouterr().err.startswith("times:")


def test_compare_requires_two_methods(tmp_path):
    cfg = _free_config(tmp_path)
    cfg["methods"] = [{"name": "fourier"}]
    cfg["outputs"] = []
    assert _run(["compare", _write(tmp_path, cfg)])[0] == 2


def test_missing_and_malformed_config(tmp_path):
    assert _run(["run", str(tmp_path / "nope.json")])[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert _run(["run", str(bad)])[0] == 2


def test_heisenberg_free_golden():
    code, text = _run(["heisenberg", "--hamiltonian", "free", "--op", "q", "--order", "3", "--mass", "1"])
    assert code == 0
    assert text == "q(t) = q + t·p\n# coefficients of t^2 through t^3 are identically zero\n"


def test_heisenberg_constant_force_golden():
    code, text = _run(["heisenberg", "--hamiltonian", "constant-force", "--op", "p", "--order", "2",
                       "--force", "1"])
    lines = text.splitlines()
    assert code == 0
    assert lines[0] == "p(t) = p + t"
    assert lines[1] == "# coefficient of t^2 is identically zero"
    assert lines[2].startswith("# constant_force_momentum_rate:")


def test_heisenberg_harmonic_golden():
    code, text = _run(["heisenberg", "--hamiltonian", "harmonic", "--op", "q", "--order", "4",
                       "--omega", "1"])
    assert code == 0
    assert text == "q(t) = q + t·p - 1/2·t^2·q - 1/6·t^3·p + 1/24·t^4·q\n"


def test_heisenberg_rational_parameters():
    text = heisenberg_print(HamiltonianSpec.constant_force(m=2, F=3), "q", 2)
    assert text.splitlines()[0] == "q(t) = q + 1/2·t·p + 3/4·t^2"


def test_heisenberg_rejects_bad_number():
    assert _run(["heisenberg", "--hamiltonian", "free", "--mass", "abc"])[0] == 2


def test_chaos_demo_command(tmp_path):
    code, text = _run(["chaos-demo", "--lambda", "1", "--width", "0.5", "--tmax", "1",
                       "--samples", "4", "--output-dir", str(tmp_path / "chaos")])
    assert code == 0
    lines = text.splitlines()
    assert len(lines) == 6
    summary = json.loads(lines[-1])
    assert summary["truncated"] is False
    assert summary["max_parity_asymmetry"] <= 1e-8
    assert len(list((tmp_path / "chaos").glob("density_*.csv"))) == 5


def test_chaos_variance_matches_closed_form():
    report = chaos_demo(1.0, 0.5, 1.0, 10)
    for v, c in zip(report.var_q, report.var_q_closed_form):
        assert abs(v - c) <= 1e-5


def test_chaos_truncates_at_boundary():
    report = chaos_demo(1.0, 0.5, 3.0, 6, n_points=1024, half_width=10.0)
    assert report.truncated and "boundary_reached" in report.flags
