"""End-to-end behavior of the command line interface."""

import json

import pytest

from tensorcalc.cli import main


def test_list_prints_suites_and_geometries(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "suites:" in out
    assert "geometries:" in out
    for name in ("tensor-algebra", "all", "sphere", "torus", "expanding_sphere"):
        assert name in out


def test_verify_writes_report_and_summary(tmp_path, capsys):
    target = tmp_path / "report.json"
    code = main(["verify", "--suite", "projection", "--out", str(target)])
    assert code == 0
    report = json.loads(target.read_text())
    assert report["schema"] == 1
    assert report["suite"] == "projection"
    assert report["overall_pass"] is True
    assert all(c["pass"] for c in report["checks"])
    assert {"id", "identity", "abs_residual", "rel_residual", "tolerance"} <= set(
        report["checks"][0]
    )
    out = capsys.readouterr().out
    assert "PASS: 5/5" in out


def test_verify_without_out_streams_json(capsys):
    assert main(["verify", "--suite", "projection"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["suite"] == "projection"


def test_unknown_geometry_is_usage_error(tmp_path, capsys):
    target = tmp_path / "never.json"
    code = main(["verify", "--suite", "stokes", "--geometry", "nosuch", "--out", str(target)])
    assert code == 2
    assert not target.exists()
    assert "error:" in capsys.readouterr().err


def test_unknown_suite_is_rejected_by_the_parser(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nosuch"])
    assert exc.value.code == 2


def test_failing_tolerance_still_writes_report(tmp_path, capsys):
    target = tmp_path / "report.json"
    code = main(
        [
            "verify",
            "--suite",
            "projection",
            "--tol",
            "projection.idempotent=1e-30",
            "--out",
            str(target),
        ]
    )
    assert code == 1
    report = json.loads(target.read_text())
    assert report["overall_pass"] is False
    failed = [c["id"] for c in report["checks"] if not c["pass"]]
    assert failed == ["projection.idempotent"]
    assert "FAIL" in capsys.readouterr().out


def test_config_file_merging(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults for smoke runs\nsuite = projection\norder = 9\nseed = 5\n")
    out1 = tmp_path / "a.json"
    assert main(["verify", "--config", str(cfg), "--out", str(out1)]) == 0
    report = json.loads(out1.read_text())
    assert report["suite"] == "projection"
    assert report["config"]["order"] == 9
    assert report["config"]["seed"] == 5

    out2 = tmp_path / "b.json"
    assert main(["verify", "--config", str(cfg), "--seed", "11", "--out", str(out2)]) == 0
    assert json.loads(out2.read_text())["config"]["seed"] == 11
    capsys.readouterr()


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("not_a_key = 3\n")
    assert main(["verify", "--config", str(cfg)]) == 2
    assert "not_a_key" in capsys.readouterr().err


def test_reports_are_deterministic(tmp_path, capsys):
    paths = [tmp_path / "r1.json", tmp_path / "r2.json"]
    for p in paths:
        assert main(["verify", "--suite", "projection", "--seed", "3", "--out", str(p)]) == 0
    a, b = (json.loads(p.read_text()) for p in paths)
    a.pop("wall_time_s")
    b.pop("wall_time_s")
    assert a == b
    capsys.readouterr()


def test_geometry_override_changes_the_run(tmp_path, capsys):
    target = tmp_path / "r.json"
    code = main(
        [
            "verify",
            "--suite",
            "stokes",
            "--geometry",
            "torus",
            "--geom-params",
            "major=2.0,minor=0.4",
            "--out",
            str(target),
        ]
    )
    assert code == 0
    report = json.loads(target.read_text())
    assert report["config"]["geometry"] == "torus"
    assert report["config"]["geom_params"] == {"major": 2.0, "minor": 0.4}
    capsys.readouterr()


def test_convergence_csv(tmp_path, capsys):
    target = tmp_path / "conv.csv"
    assert main(["convergence", "--out", str(target)]) == 0
    lines = target.read_text().strip().splitlines()
    assert lines[0] == "quantity,parameter,value,residual,decreasing"
    area = [ln.split(",") for ln in lines[1:] if ln.startswith("sphere-area")]
    assert len(area) >= 4
    assert area[0][4] == ""
    assert all(row[4] == "true" for row in area[1:])
    curvature = [ln for ln in lines[1:] if ln.startswith("curvature-sphere")]
    assert len(curvature) >= 4
    capsys.readouterr()
