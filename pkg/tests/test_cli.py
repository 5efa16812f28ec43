import csv
import json
import math

import pytest

import highenergy.radial
from highenergy.cli import RunConfig, config_from_args, dumps, main
from highenergy.errors import InvalidInput, QuadratureError
from highenergy.specs import parse_measure, parse_profile, parse_weight


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestEnergyCommands:
    def test_energy(self, capsys):
        code, out, _ = run(capsys, "energy", "--profile", "trunc:M=2", "--weight", "poly:p=2", "--n", "1")
        assert code == 0
        doc = json.loads(out)
        assert doc["command"] == "energy"
        assert doc["result"]["value"] == pytest.approx(math.sqrt(2.0), rel=1e-12)

    def test_jenergy(self, capsys):
        code, out, _ = run(capsys, "jenergy", "--profile", "trunc:M=2", "--weight", "poly:p=1")
        assert code == 0
        assert json.loads(out)["result"]["value"] == pytest.approx(math.sqrt(2.0), rel=1e-10)

    def test_infinite_energy_is_a_string(self, capsys):
        code, out, _ = run(capsys, "energy", "--profile", "log")
        assert code == 0
        assert json.loads(out)["result"]["value"] == "inf"

    def test_byte_identical(self, capsys):
        argv = ("energy", "--profile", "iterlog:k=1", "--weight", "exp", "--n", "2")
        _, a, _ = run(capsys, *argv)
        _, b, _ = run(capsys, *argv)
        assert a == b

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "e.json"
        _, out, _ = run(capsys, "energy", "--profile", "trunc:M=2", "--out", str(path))
        assert path.read_text() == out

    def test_numbers_round_trip(self, capsys):
        _, out, _ = run(capsys, "jenergy", "--profile", "exp:c=2", "--weight", "poly:p=1")
        value = json.loads(out)["result"]["value"]
        assert float(repr(value)) == value and len(repr(value).replace(".", "").lstrip("0")) <= 17


class TestOtherCommands:
    def test_solve_csv(self, capsys, tmp_path):
        table = tmp_path / "m.csv"
        table.write_text("s,m\n-2,0\n-2,1\n0,1\n")
        plot = tmp_path / "plot.csv"
        code, out, _ = run(capsys, "solve", "--measure", f"table:{table}", "--csv", str(plot))
        assert code == 0
        res = json.loads(out)["result"]
        assert res["bounded"] and res["lower"] == pytest.approx(-2.0)
        rows = list(csv.reader(open(plot)))
        assert rows[0] == ["x", "y", "series"]
        assert {r[2] for r in rows[1:]} == {"g", "mass"}

    def test_subext(self, capsys):
        code, out, _ = run(capsys, "subext", "--profile", "trunc:M=2", "--log-radius", "1")
        res = json.loads(out)["result"]
        assert code == 0
        assert res["slope"] == pytest.approx(2.0 / 3.0)
        assert res["energy_subextension"] == pytest.approx(4.0 / 3.0)

    def test_kappa(self, capsys, tmp_path):
        plot = tmp_path / "k.csv"
        code, out, _ = run(capsys, "kappa", "--measure", "ma:trunc:M=2", "--weight", "poly:p=2",
                           "--family", "trunc", "--budget", "200", "--csv", str(plot))
        assert code == 0
        res = json.loads(out)["result"]
        assert res["best_ratio"] == pytest.approx(2.0 ** -0.5, rel=1e-8)
        assert res["claim"] == "lower bound relative to the family"
        assert len(list(csv.reader(open(plot)))) == res["trace_length"] + 1

    def test_fit(self, capsys):
        code, out, _ = run(capsys, "fit", "--measure", "ma:trunc:M=2", "--family", "trunc", "--samples", "8")
        assert code == 0
        assert json.loads(out)["result"]["violations"] == 0

    def test_bedford(self, capsys):
        code, out, _ = run(capsys, "bedford", "--profile", "iterlog:k=1")
        assert code == 0
        assert json.loads(out)["result"]["diverges"] is True

    def test_verify_jsonl(self, capsys, tmp_path):
        path = tmp_path / "report.jsonl"
        code, out, _ = run(capsys, "verify", "--suite", "cone", "--n", "1", "--out", str(path))
        assert code == 0
        lines = path.read_text().splitlines()
        assert len(lines) == json.loads(out)["result"]["checks"]
        assert all(json.loads(line)["status"] in ("pass", "skipped") for line in lines)

    def test_verify_multiple_dimensions_and_weights(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "fundamental", "--n", "1", "--n", "2",
                           "--weight", "poly:p=1;exp")
        res = json.loads(out)["result"]
        assert code == 0 and res["n"] == [1, 2] and res["fail"] == 0
        assert res["checks"] == 2 * 2 * 6


class TestErrors:
    @pytest.mark.parametrize("argv", [
        ("energy",),
        ("energy", "--profile", "spiral:x=1"),
        ("energy", "--profile", "trunc:M=2", "--n", "0"),
        ("energy", "--profile", "trunc:M=2", "--weight", "poly:p=0.5"),
        ("solve", "--measure", "table:/nonexistent.csv"),
        ("verify", "--suite", "nothing"),
        ("launch",),
        ("energy", "--profile", "trunc:M=2", "--quad-rel-tol", "2"),
        ("kappa", "--measure", "atom:s=-inf,mass=1", "--family", "power", "--budget", "8"),
    ])
    def test_input_errors(self, capsys, argv):
        code, out, err = run(capsys, *argv)
        assert code == 2 and out == ""
        diag = json.loads(err)
        assert diag["exit_code"] == 2 and diag["message"]

    def test_nonconvergence(self, capsys, monkeypatch):
        def boom(*args, **kwargs):
            raise QuadratureError("interval budget exhausted", partial=1.5, block=(0.0, 1.0))
        monkeypatch.setattr(highenergy.radial, "energy_solution", boom)
        code, out, err = run(capsys, "energy", "--profile", "trunc:M=2")
        assert code == 3 and out == ""
        diag = json.loads(err)
        assert diag["error"] == "non-convergence" and diag["partial"] == 1.5


class TestConfig:
    def test_file_defaults_and_override(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"profile": "trunc:M=4", "weight": "exp", "n": 2}))
        cfg = config_from_args(["energy", "--config", str(path), "--weight", "poly:p=2"])
        assert cfg.profile == "trunc:M=4" and cfg.weight == "poly:p=2" and cfg.n == [2]

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"colour": "red"}))
        with pytest.raises(InvalidInput):
            config_from_args(["energy", "--config", str(path)])

    def test_config_run(self, capsys, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"profile": "trunc:M=2", "weight": "poly:p=2"}))
        code, out, _ = run(capsys, "energy", "--config", str(path))
        assert code == 0 and json.loads(out)["result"]["value"] == pytest.approx(math.sqrt(2.0))

    def test_validate(self):
        with pytest.raises(InvalidInput):
            RunConfig(command="fit").validate()

    def test_dumps_non_finite(self):
        assert json.loads(dumps({"a": math.inf, "b": [math.nan, -math.inf]})) == {"a": "inf", "b": ["nan", "-inf"]}


class TestSpecs:
    def test_weights(self):
        assert parse_weight("poly:p=2").h(2.0) == pytest.approx(2.0)
        assert parse_weight("exp").h(1.0) == pytest.approx(math.e - 1.0)
        assert parse_weight("iterexp:k=2").to_json()["kind"]

    def test_profiles(self):
        assert float(parse_profile("trunc:M=2").g(-5.0)) == -2.0
        assert parse_profile("iterlog:k=2", 3).n == 3
        with pytest.raises(InvalidInput):
            parse_profile("power:alpha=2")

    def test_measures(self):
        mu = parse_measure("ma:trunc:M=2")
        assert mu.total == pytest.approx(1.0)
        assert parse_measure("atom:s=-1,mass=2").total == 2.0
