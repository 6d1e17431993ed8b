import csv
import io
import json
import math
import subprocess
import sys

import pytest

from heisgeo import cli


def _run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCommands:
    def test_dist_vertical_example(self, capsys):
        code, out, _ = _run(["dist", "0", "0", "0", "0", "0", "0.3183098861"], capsys)
        assert code == 0
        assert json.loads(out)["distance"] == pytest.approx(1.0, abs=1e-9)

    def test_curvature_plane_example(self, capsys):
        code, out, _ = _run(["curvature", "--surface", "plane", "--point", "1", "0", "0"], capsys)
        assert code == 0
        row = json.loads(out)["results"][0]
        assert row["h"] == 0.0
        assert row["p"] == pytest.approx(2.0, rel=1e-15)

    def test_hessian_trace(self, capsys):
        code, out, _ = _run(["hessian", "--surface", "paraboloid", "--point", "1", "0", "1"], capsys)
        assert code == 0
        doc = json.loads(out)["results"][0]
        assert code == 0
        assert doc["hess"][0][0] + doc["hess"][1][1] == pytest.approx(doc["h"], abs=1e-12)

    def test_surfdist_plane(self, capsys):
        code, out, _ = _run(["surfdist", "--surface", "plane", "--point", "0", "0", "0.5"], capsys)
        row = json.loads(out)["results"][0]
        assert code == 0
        assert abs(row["oracle"]) == pytest.approx(math.sqrt(math.pi * 0.5 / 2), rel=1e-8)
        assert row["closed_form"] == pytest.approx(row["oracle"], abs=1e-8)

    def test_inline_surface(self, capsys):
        code, out, _ = _run(["curvature", "--surface", '{"type": "cylinder", "r": 2.0}',
                             "--point", "2", "0", "0.3"], capsys)
        assert code == 0
        assert json.loads(out)["results"][0]["h"] == pytest.approx(0.5, rel=1e-12)

    def test_sphere_profile_rows(self, capsys):
        code, out, _ = _run(["sphere-profile", "1", "7", "--output", "csv"], capsys)
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0
        assert len(rows) == 8


class TestErrors:
    def test_characteristic_point(self, capsys):
        code, _, err = _run(["curvature", "--surface", "paraboloid", "--point", "0", "0", "0"], capsys)
        assert code == 2
        assert "characteristic" in err

    def test_unknown_surface(self, capsys):
        code, _, err = _run(["curvature", "--surface", "torus", "--point", "1", "0", "0"], capsys)
        assert code == 2
        assert "error" in err

    def test_bad_json_surface(self, capsys):
        code, _, _ = _run(["hessian", "--surface", '{"type": "plane", "c": "x"}', "--point", "1", "0", "0"],
                          capsys)
        assert code == 2

    def test_bad_scale(self, capsys):
        code, _, err = _run(["verify", "--scale", "0"], capsys)
        assert code == 2
        assert "scale" in err

    def test_config_validation(self):
        with pytest.raises(cli.ConfigError):
            cli.RunConfig(command="curvature", surface={"type": "plane", "c": 0.0})
        with pytest.raises(cli.ConfigError):
            cli.RunConfig(command="nope")


class TestSerialisation:
    @pytest.mark.parametrize("argv", [
        ["dist", "0", "0", "0", "1", "2", "3"],
        ["geodesic", "0.3", "1.5", "0", "2", "5"],
        ["ruling", "0", "0.5", "2", "0.5"],
        ["hessian", "--surface", "cc-sphere", "--point", "0.6366197723675814", "0", "0.6366197723675814"],
    ])
    def test_csv_header(self, argv, capsys):
        code, out, _ = _run(argv + ["--output", "csv"], capsys)
        header = next(csv.reader(io.StringIO(out)))
        assert code == 0
        assert header == cli.CSV_COLUMNS[argv[0]].split(",")

    def test_empty_csv_keeps_header(self):
        assert cli.to_csv("dist", []).splitlines() == [cli.CSV_COLUMNS["dist"]]

    @pytest.mark.parametrize("argv", [
        ["geodesic", "0.3", "1.5", "0", "2", "5"],
        ["surfdist", "--surface", "graph-poly", "--point", "0.3", "0.2", "0.5"],
    ])
    def test_deterministic(self, argv, capsys):
        first = _run(argv, capsys)[1]
        second = _run(argv, capsys)[1]
        assert first == second

    def test_json_round_trip(self, capsys):
        _, out, _ = _run(["hessian", "--surface", "paraboloid", "--point", "1", "0", "1",
                          "--point", "0.5", "0.5", "0.5"], capsys)
        doc = json.loads(out)
        assert cli.to_json(doc).rstrip("\n") == out.rstrip("\n")
        assert json.loads(cli.to_json(doc)) == doc

    def test_floats_round_trip(self, capsys):
        _, out, _ = _run(["dist", "0", "0", "0", "0.1", "0.2", "0.3", "--output", "csv"], capsys)
        _, js, _ = _run(["dist", "0", "0", "0", "0.1", "0.2", "0.3"], capsys)
        row = next(csv.DictReader(io.StringIO(out)))
        assert float(row["distance"]) == json.loads(js)["distance"]


class TestVerify:
    def test_small_scale_passes(self, capsys, monkeypatch):
        monkeypatch.setenv("HEISGEO_THREADS", "2")
        code, out, _ = _run(["verify", "--seed", "42", "--scale", "0.02", "--output", "csv"], capsys)
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0
        assert rows and all(r["passed"] == "True" for r in rows)
        assert {r["criterion"] for r in rows} == {str(k) for k in range(1, 12)}

    def test_thread_count(self, monkeypatch):
        monkeypatch.setenv("HEISGEO_THREADS", "3")
        assert cli.thread_count() == 3
        monkeypatch.setenv("HEISGEO_THREADS", "0")
        with pytest.raises(cli.ConfigError):
            cli.thread_count()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "heisgeo", "dist", "0", "0", "0", "1", "0", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["distance"] == pytest.approx(1.0)
