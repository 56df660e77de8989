import json
import math
import subprocess
import sys

import pytest

from bouncing_billiards import cli
from bouncing_billiards.export import read_orbit_csv

SEG = {"shape": {"type": "segment"}, "initial": [{"x": 0.2, "h": 1.0, "theta": 0.3}], "steps": 50}


def test_orbit_writes_csv_svg_and_report(tmp_json, tmp_path, capsys):
    cfg = tmp_json(SEG)
    out, svg = tmp_path / "o.csv", tmp_path / "o.svg"
    assert cli.main(["orbit", "--config", cfg, "--out", str(out), "--svg", str(svg)]) == 0
    rec = read_orbit_csv(out.read_text(encoding="utf-8"))
    assert len(rec) == 51
    assert svg.read_text(encoding="utf-8").startswith("<?xml")
    report = json.loads(capsys.readouterr().out)
    assert report[0]["termination"] == "completed" and report[0]["records"] == 51


def test_orbit_steps_override_and_numbered_files(tmp_json, tmp_path):
    cfg = tmp_json(dict(SEG, initial=SEG["initial"] * 2))
    out = tmp_path / "o.csv"
    assert cli.main(["orbit", "--config", cfg, "--out", str(out), "--steps", "5"]) == 0
    for i in (0, 1):
        assert len(read_orbit_csv((tmp_path / f"o-{i}.csv").read_text())) == 6


def test_orbit_nudge_restart_is_announced(tmp_json, capsys):
    cfg = tmp_json({"shape": {"type": "polygon", "vertices": [[-1, -1], [1, -1], [1, 1], [-1, 1]]},
                    "initial": [{"x": 2, "y": 2, "angle": -3 * math.pi / 4}], "steps": 5})
    assert cli.main(["orbit", "--config", cfg]) == 0
    assert json.loads(capsys.readouterr().out)[0]["termination"] == "degenerate_bounce"
    assert cli.main(["orbit", "--config", cfg, "--nudge-restart"]) == 0
    cap = capsys.readouterr()
    assert "not the canonical map" in cap.err
    assert json.loads(cap.out)[0]["termination"] == "completed"


@pytest.mark.parametrize("argv", [
    [],
    ["orbit"],
    ["orbit", "--config", "/nonexistent/cfg.json"],
    ["wobble"],
    ["rotation"],
    ["rotation", "--a", "0.5"],
    ["sweep", "--config", "x", "--threads", "-1"],
])
def test_usage_errors_exit_1(argv, capsys):
    assert cli.main(argv) == 1


def test_schema_and_validation_errors_exit_1(tmp_json, capsys):
    assert cli.main(["orbit", "--config", tmp_json(dict(SEG, extra=1))]) == 1
    assert "extra" in capsys.readouterr().err
    assert cli.main(["orbit", "--config", tmp_json(dict(SEG, initial=[]))]) == 1


def test_rotation_command(capsys):
    assert cli.main(["rotation", "--h", "1", "--a", "0.6"]) == 0
    res = json.loads(capsys.readouterr().out)
    assert res["b"] == pytest.approx(0.75)
    assert res["phi"] == pytest.approx(2 * math.pi - 2 * math.atan(0.75 / 0.6))
    assert cli.main(["rotation", "--h", "0.5"]) == 0
    assert json.loads(capsys.readouterr().out)["rho"] == pytest.approx(5.3558901, abs=1e-7)


def test_sweep_command(tmp_json, tmp_path):
    cfg = tmp_json({"task": "rotation", "grid": {"a": [0.2, 0.4]}, "fixed": {"h": 1}})
    out = tmp_path / "s.csv"
    assert cli.main(["sweep", "--config", cfg, "--out", str(out), "--threads", "0"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("cell,") and len(lines) == 3


def test_fixed_points_command(tmp_json, capsys):
    cfg = tmp_json({"shape": {"type": "ellipse", "A": 1, "B": 0.4},
                    "initial": [{"x": 2, "y": 0, "angle": math.pi}], "steps": 1})
    assert cli.main(["fixed-points", "--config", cfg, "--radius", "2"]) == 0
    res = json.loads(capsys.readouterr().out)
    assert res[0]["count"] >= 4


def test_plot_command(tmp_json, tmp_path):
    svg = tmp_path / "p.svg"
    assert cli.main(["plot", "--config", tmp_json(SEG), "--svg", str(svg), "--max-points", "10"]) == 0
    assert svg.read_text().count("<circle") == 10
    assert cli.main(["plot", "--config", tmp_json(SEG)]) == 1


def test_verify_exit_code_reflects_failures(monkeypatch, tmp_path, capsys):
    from bouncing_billiards import verify

    def fake(level):
        return verify.VerifyReport(level, [verify.Claim("1", "x", True), verify.Claim("2", "y", False)])
    monkeypatch.setattr(verify, "verify_suite", fake)
    out = tmp_path / "v.json"
    assert cli.main(["verify", "--quick", "--out", str(out)]) == 2
    assert json.loads(out.read_text())["passed"] is False
    monkeypatch.setattr(verify, "verify_suite",
                        lambda level: verify.VerifyReport(level, [verify.Claim("1", "x", True)]))
    assert cli.main(["verify"]) == 0


def test_module_entry_point(tmp_json):
    res = subprocess.run([sys.executable, "-m", "bouncing_billiards", "rotation", "--h", "1", "--b", "1"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["a"] == pytest.approx(1 / math.sqrt(2))
    res = subprocess.run([sys.executable, "-m", "bouncing_billiards", "nope"], capture_output=True)
    assert res.returncode == 1
