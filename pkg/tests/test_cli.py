"""
Command line: JSON output, exit codes, cache handling and plots
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import json

import mpmath
import pytest

from m11lab import cli, config, triangle_group
from m11lab.reduction_lab import count_points


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    # main() writes command-line values into the shared settings
    for name in ("M11_PRECISION", "M11_BOX", "M11_WORKERS"):
        monkeypatch.setattr(config.settings, name, getattr(config.settings, name))
    monkeypatch.setattr(config.settings, "M11_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.setattr(config.settings, "DATABASE_URL", None)


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, [json.loads(line) for line in out.splitlines() if line.strip()]


def test_certify_group(capsys):
    code, lines = _run(capsys, "certify-group")
    assert code == 0
    assert lines[0]["certified"] is True
    assert all(lines[0]["relations"].values())
    assert _run(capsys, "certify-group", "--json") == (code, lines)


def test_fixed_points_and_area(capsys):
    code, lines = _run(capsys, "fixed-points")
    assert code == 0
    assert [p["name"] for p in lines[0]["points"]] == ["P", "Q", "R"]
    assert lines[0]["area"].startswith("0.2094395")
    assert lines[0]["certified"] is True


def test_fixed_points_fails_on_wrong_area(capsys, monkeypatch):
    monkeypatch.setattr(triangle_group, "triangle_area", lambda vertices=None: mpmath.mpf("0.2"))
    code, lines = _run(capsys, "fixed-points")
    assert code == 3
    assert lines[0]["error"] == "CertificationFailed"
    assert "area" in lines[0]["detail"]


def test_scan_summary_is_logged_by_default(capsys):
    code = cli.main(["scan-basic", "--t", "2", "--pmax", "14", "--no-cache"])
    assert code == 0
    err = capsys.readouterr().err
    assert "scan t=2" in err, f"summary missing from stderr: {err!r}"



def test_forms(capsys):
    code, lines = _run(capsys, "forms")
    assert code == 0
    assert {f["name"] for f in lines[0]["forms"]} == {"QR", "QP", "PR"}


def test_cm_locate(capsys):
    code, lines = _run(capsys, "cm-locate", "--lambda", "3")
    assert code == 0
    points = lines[0]["points"]
    assert {p["order"] for p in points} == {"MaximalOE", "NonMaximal"}
    assert lines[0]["schema_version"] == 1


def test_exit_codes(capsys):
    code, lines = _run(capsys, "cm-locate", "--lambda", "3", "--box", "0")
    assert code == 4
    assert lines[0]["error"] == "SearchExhausted"
    assert lines[0]["command"] == "cm-locate"

    code, lines = _run(capsys, "cm-locate", "--lambda", "2+u")
    assert code == 2
    assert lines[0]["error"] == "DomainError"

    code, lines = _run(capsys, "lpoly", "--t", "2", "--p", "5")
    assert code == 2
    assert lines[0]["error"] == "BadPrimeError"

    code, lines = _run(capsys, "count", "--t", "abc", "--q", "11")
    assert code == 2

    code, lines = _run(capsys, "plot")
    assert code == 2


def test_count_writes_out_file(capsys, tmp_path):
    out = tmp_path / "count.json"
    code, lines = _run(capsys, "count", "--t", "2", "--q", "11", "--out", str(out))
    assert code == 0
    assert lines[0] == {"t": "2", "q": 11, "count": count_points(2, 11)}
    assert json.loads(out.read_text()) == lines[0]


def test_lpoly_and_newton(capsys):
    code, lines = _run(capsys, "lpoly", "--t=-1", "--p", "3")
    assert code == 0
    assert lines[0]["coefficients"][1:4] == [0, 0, 0]
    assert lines[0]["coefficients"][8] == 81

    code, lines = _run(capsys, "newton", "--t", "2", "--p", "11", "--method", "characters")
    assert code == 0
    assert lines[0]["label"] in ("MuOrdinary", "Basic")
    assert len(lines[0]["slopes"]) == 8


def test_scan_basic_uses_cache(capsys, tmp_path):
    cache_dir = str(tmp_path / "scan-cache")
    code, first = _run(capsys, "scan-basic", "--t", "2", "--pmax", "20", "--cache-dir", cache_dir)
    assert code == 0
    assert {r["p"] for r in first[0]["skipped"]} == {2, 5}
    code, second = _run(capsys, "scan-basic", "--t", "2", "--p-bound", "20", "--cache-dir", cache_dir)
    assert code == 0
    assert all(r["method"] == "cache" for r in second[0]["rows"])
    assert first[0]["summary"] == second[0]["summary"]


def test_scan_basic_without_cache(capsys):
    code, lines = _run(capsys, "scan-basic", "--t", "3", "--pmax", "14", "--no-cache")
    assert code == 0
    assert all(r["method"] != "cache" for r in lines[0]["rows"])
    code, lines = _run(capsys, "scan-basic", "--t", "1", "--no-cache")
    assert code == 2
    assert lines[0]["error"] == "PoleError"


def test_census(capsys):
    code, lines = _run(capsys, "census", "--t", "2", "3", "--pmax", "14", "--no-cache")
    assert code == 0
    record = lines[0]
    assert set(record["basic_primes"]) == {"2", "3"}
    assert set(record["by_residue"]) == {"1 mod 5", "2 mod 5", "3 mod 5", "4 mod 5"}


def test_hypotheses_and_predictions(capsys):
    code, lines = _run(capsys, "hypotheses", "--J=-1")
    assert code == 0
    assert lines[0]["all"] is True
    assert lines[0]["literal_h2"] is False
    assert lines[0]["val5_j"] == -5

    code, lines = _run(capsys, "st-predict", "--lambda", "3", "--p", "11")
    assert code == 0
    assert [row["prediction"] for row in lines[0]["primes"]] == ["Basic", "Basic"]


def test_density_from_parameters(capsys):
    code, lines = _run(capsys, "density", "--params", "0", "0.5", "1.2", "--bins", "4")
    assert code == 0
    assert sum(lines[0]["counts"]) == 3
    assert lines[0]["both_sides"] is True


def test_search_lambda_emits_json_lines(capsys):
    code, lines = _run(capsys, "search-lambda", "--norm-bound", "200")
    assert code == 0
    for line in lines:
        assert line["passes"] is True
        assert line["norm"] <= 200


def test_cache_export_import(capsys, tmp_path):
    source = str(tmp_path / "source")
    target = str(tmp_path / "target")
    csv_path = str(tmp_path / "counts.csv")
    assert _run(capsys, "scan-basic", "--t", "2", "--pmax", "12", "--cache-dir", source)[0] == 0
    code, lines = _run(capsys, "cache-export", csv_path, "--cache-dir", source)
    assert code == 0
    rows = lines[0]["rows"]
    assert rows == 4 * 3
    code, lines = _run(capsys, "cache-import", csv_path, "--cache-dir", target)
    assert code == 0
    assert lines[0]["added"] == rows


def test_settings_override(capsys):
    code, _ = _run(capsys, "count", "--t", "2", "--q", "7", "--precision", "55", "--box", "30")
    assert code == 0
    assert config.settings.M11_PRECISION == 55
    assert config.settings.M11_BOX == 30


def test_plots_are_deterministic(capsys, tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    code, lines = _run(capsys, "plot", "--triangle", "--geodesic", "--lambda", "3", "--out", str(first))
    assert code == 0
    assert [line["figure"] for line in lines] == ["triangle", "geodesic"]
    code, _ = _run(capsys, "plot", "--triangle", "--geodesic", "--lambda", "3", "--out", str(second))
    assert code == 0
    for name in ("triangle.svg", "geodesic.svg"):
        assert (first / name).read_bytes() == (second / name).read_bytes(), f"{name} differs between runs"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
