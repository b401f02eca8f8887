import json

import numpy as np
import pytest
from conftest import kahler_test_potential

from scalarflat import MetricModel4T
from scalarflat.catalog import catalog_entries, check_entry
from scalarflat.cli import run
from scalarflat.curvature import save_metric


def run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_classify_ruled_success(capsys):
    code, payload = run_json(capsys, ["classify", "ruled", "--genus", "2", "--m", "2"])
    assert code == 0
    assert payload["scalar_flat_hermitian"] == "yes"
    assert payload["fired_case"] == "case (4)"


def test_classify_ruled_nagata_violation(capsys):
    code, payload = run_json(capsys, ["classify", "ruled", "--genus", "2", "--m", "3"])
    assert code == 2
    assert payload["error"] == "NagataViolation"


def test_unknown_flag_exits_2(capsys):
    code = run(["classify", "ruled", "--genus", "2", "--m", "2", "--bogus"])
    captured = capsys.readouterr()
    assert code == 2
    assert "usage" in captured.err


def test_classify_split_and_minimal(capsys):
    code, payload = run_json(capsys,
                             ["classify", "split", "--genus", "2", "--deg-l", "0"])
    assert code == 0
    assert payload["scalar_flat_kahler"] == "yes"
    code, payload = run_json(capsys, ["classify", "minimal", "--class", "Hopf"])
    assert code == 0
    assert payload["verdict"] == "rejected"
    code, payload = run_json(capsys, ["classify", "minimal", "--class", "Ruled",
                                      "--genus", "2", "--m", "0"])
    assert code == 0
    assert payload["verdict"] == "admits"


def test_rc_check(capsys):
    code, payload = run_json(capsys, ["rc-check", "--genus", "2", "--deg-l", "1",
                                      "--n", "2", "--resolution", "16"])
    assert code == 0
    assert payload["certificate"]["issued"]
    assert payload["certificate"]["margin"] == pytest.approx(np.pi, abs=1e-12)
    assert payload["rc_scan"]["rc_positive"]
    code, payload = run_json(capsys, ["rc-check", "--genus", "0", "--deg-l", "1"])
    assert code == 2


def test_report_combines_pipeline(capsys):
    code, payload = run_json(capsys, ["report", "--genus", "6", "--deg-l", "5",
                                      "--n", "2", "--resolution", "16"])
    assert code == 0
    assert payload["classification"]["scalar_flat_hermitian"] == "yes"
    assert payload["certificate"]["margin"] == pytest.approx(5 * np.pi, abs=1e-12)
    assert payload["rc_scan"]["min_max_eigenvalue"] == pytest.approx(5 * np.pi, abs=1e-9)


def test_catalog_listing_and_regression(capsys):
    code, payload = run_json(capsys, ["catalog"])
    assert code == 0
    assert len(payload["entries"]) >= 20
    code, payload = run_json(capsys, ["catalog", "--run-all"])
    assert code == 0
    assert payload["all_pass"]


def test_catalog_entries_have_provenance():
    for entry in catalog_entries():
        assert entry.source
        ok, _actual, mismatches = check_entry(entry)
        assert ok, mismatches


def test_catalog_regression_failure_exits_3(capsys, monkeypatch):
    import scalarflat.cli as cli_module
    from scalarflat.catalog import CatalogEntry
    broken = CatalogEntry("broken", "ruled", {"genus": 2, "m": 2},
                          {"scalar_flat_hermitian": "no"},
                          "intentionally wrong expectation")
    monkeypatch.setattr(cli_module, "catalog_entries", lambda: [broken])
    code, payload = run_json(capsys, ["catalog", "--run-all"])
    assert code == 3
    assert not payload["all_pass"]
    assert payload["entries"][0]["mismatches"]


def test_curvature_report_roundtrip(tmp_path, capsys):
    metric = MetricModel4T.from_kahler_potential(kahler_test_potential(8, 0.02))
    manifest = save_metric(metric, tmp_path / "metric")
    code, payload = run_json(capsys, ["curvature", "--metric", str(manifest),
                                      "--out", str(tmp_path / "report.json")])
    assert code == 0
    assert set(payload) == {"min", "max", "integral", "cross_check_residual"}
    assert abs(payload["integral"]) < 1e-8
    on_disk = json.loads((tmp_path / "report.json").read_text())
    assert on_disk == payload


def test_solve_scalar_flat_pipeline(tmp_path, capsys):
    metric = MetricModel4T.from_kahler_potential(
        kahler_test_potential(8, 0.1 / np.pi ** 2))
    manifest = save_metric(metric, tmp_path / "metric")
    out = tmp_path / "solution.json"
    code, payload = run_json(capsys, ["solve", "scalar-flat", "--metric", str(manifest),
                                      "--out", str(out)])
    assert code == 0
    assert payload["solve_residual"] < 1e-10
    assert payload["end_to_end_residual"] < 1e-6
    stored = json.loads(out.read_text())
    assert stored == payload
    assert (tmp_path / payload["f_csv"]).exists()


def test_solve_exhausted_budget_exits_4(tmp_path, capsys):
    metric = MetricModel4T.from_kahler_potential(
        kahler_test_potential(8, 0.1 / np.pi ** 2))
    manifest = save_metric(metric, tmp_path / "metric")
    code, payload = run_json(capsys, ["solve", "scalar-flat", "--metric", str(manifest),
                                      "--out", str(tmp_path / "solution.json"),
                                      "--max-iterations", "1"])
    assert code == 4
    assert payload["error"] == "ConvergenceError"


def test_missing_metric_file_exits_2(capsys):
    code, payload = run_json(capsys, ["curvature", "--metric", "no/such/metric.json"])
    assert code == 2


def test_output_is_byte_deterministic(capsys):
    run(["classify", "split", "--genus", "6", "--deg-l", "5"])
    first = capsys.readouterr().out
    run(["classify", "split", "--genus", "6", "--deg-l", "5"])
    second = capsys.readouterr().out
    assert first == second
