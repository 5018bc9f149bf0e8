import csv
import io
import json

import pytest

import main
from core.exact_ring import Qr2
from shared.types import CheckReport, Mismatch


def run_json(capsys, argv):
    code = main.run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def run_csv(capsys, argv):
    code = main.run(argv)
    out = capsys.readouterr().out
    return code, list(csv.DictReader(io.StringIO(out)))


class TestExpand:
    def test_gamma_z2_block(self, capsys):
        code, doc = run_json(capsys, ["expand", "--theorem", "2", "--order", "2"])
        assert code == 0
        assert doc["meta"] == {"subcommand": "expand", "params": {"theorem": 2, "order": 2}}
        rows = {(r["z_power"], r["t_power"]): r["matrix"] for r in doc["rows"]}
        assert rows == {
            (2, 0): [["0/1", "0/1"], ["1/2", "1/2"]],
            (2, 2): [["1/2", "-1/2"], ["0/1", "0/1"]],
        }

    def test_psi_components_csv(self, capsys):
        code, rows = run_csv(capsys, ["expand", "--theorem", "1", "--order", "4", "--format", "csv"])
        assert code == 0
        first = rows[0]
        assert (first["z_power"], first["t_power"]) == ("2", "0")
        assert Qr2.parse(first["p"]) == Qr2(0, "1/2")
        assert set(first) == {"z_power", "t_power", "p", "q", "r", "s"}

    def test_order_above_bound(self, capsys):
        assert main.run(["expand", "--order", "99"]) == 2
        assert "invalid arguments" in capsys.readouterr().err


class TestDp:
    def test_two_steps(self, capsys):
        code, doc = run_json(capsys, ["dp", "--start", "0", "--n-max", "2"])
        assert code == 0
        rows = {(r["n"], r["y"], r["k"]): r["matrix"] for r in doc["rows"]}
        assert rows[(0, 0, 0)] == [["1/1", "0/1"], ["0/1", "1/1"]]
        assert rows[(2, 0, 0)] == [["0/1", "0/1"], ["1/2", "1/2"]]
        assert all((y - n) % 2 == 0 for n, y, _ in rows)

    def test_csv_columns(self, capsys):
        code, rows = run_csv(capsys, ["dp", "--n-max", "1", "--format", "csv"])
        assert code == 0
        assert list(rows[0]) == ["n", "y", "k", "m11", "m12", "m21", "m22"]
        assert len(rows) == 3


class TestMeasure:
    def test_a_measure_csv(self, capsys):
        code, rows = run_csv(capsys, ["measure", "--kind", "A", "--n", "4", "--format", "csv"])
        assert code == 0
        assert [(r["k"], r["weight"], r["probability"]) for r in rows] == [
            ("0", "5/8", "5/12"),
            ("2", "1/4", "1/6"),
            ("4", "5/8", "5/12"),
        ]

    def test_classical_uniform(self, capsys):
        code, doc = run_json(capsys, ["measure", "--kind", "classical-uniform", "--n", "6"])
        assert code == 0
        assert {r["probability"] for r in doc["rows"]} == {"1/4"}

    def test_explicit_state(self, capsys):
        code, doc = run_json(capsys, ["measure", "--kind", "B", "--n", "2", "--state", "1,0,0,0"])
        assert code == 0
        assert doc["meta"]["params"]["state"] == "1/1,0/1,0/1,0/1"

    def test_output_file(self, capsys, tmp_path):
        out = tmp_path / "b.json"
        assert main.run(["measure", "--kind", "B", "--n", "4", "--output", str(out)]) == 0
        assert capsys.readouterr().out == ""
        probabilities = [r["probability"] for r in json.loads(out.read_text())["rows"]]
        assert probabilities == ["0/1", "1/1", "0/1"]

    @pytest.mark.parametrize(
        "argv",
        [
            ["measure", "--kind", "A", "--n", "3"],
            ["measure", "--kind", "A"],
            ["measure", "--kind", "Z", "--n", "4"],
            ["measure", "--n", "4", "--state", "1,0,1,0"],
            ["measure", "--n", "4", "--state", "nonsense"],
            ["measure", "--n", "4", "--state", "1/0,0,0,1"],
            ["measure", "--n", "4", "--state", "1,0,0,0/0"],
            ["measure", "--n", "4", "--state", "1 2,0,0,0"],
            ["dp", "--n-max", "100000"],
            ["measure", "--n", "4", "--config", "/nonexistent/config.yaml"],
            ["bogus"],
            [],
        ],
    )
    def test_usage_errors(self, argv):
        assert main.run(argv) == 2

    @pytest.mark.parametrize(
        "text",
        ["logging: {level: LOUD}\n", "series: [1, 2\n", "walk: 5\n", "7\n"],
    )
    def test_bad_config_file_is_a_usage_error(self, capsys, config_file, text):
        path = config_file(text)
        assert main.run(["measure", "--n", "4", "--config", str(path)]) == 2
        assert capsys.readouterr().err.startswith("error: ")


class TestFirstReturn:
    def test_rows(self, capsys):
        code, rows = run_csv(capsys, ["first-return", "--n-max", "7", "--format", "csv"])
        assert code == 0
        assert [r["amplitude"] for r in rows] == ["-1/1", "1/2", "0/1", "-1/8"]
        assert rows[0]["plus_11"] == "1/2"
        assert rows[0]["minus_22"] == "1/2"


class TestVerify:
    def test_low_order_passes(self, capsys):
        code = main.run(["verify", "--order", "6", "--x-min", "-2", "--x-max", "2"])
        captured = capsys.readouterr()
        assert code == 0
        assert all(row["passed"] for row in json.loads(captured.out)["rows"])
        assert "Verification summary" in captured.err

    def test_default_order_passes(self, capsys):
        assert main.run(["verify", "--order", "12"]) == 0

    def test_mismatch_exits_one(self, capsys, monkeypatch):
        broken = CheckReport(name="demo")
        broken.record(False, Mismatch("Gamma closed form vs DP", 4, 2, "1/4", "-1/4"))
        monkeypatch.setattr(main, "run_verification", lambda *args: [CheckReport(name="ok"), broken])
        assert main.run(["verify"]) == 1
        err = capsys.readouterr().err
        assert "MISMATCH [demo] Gamma closed form vs DP at n=4, k=2" in err

    def test_config_file_sets_defaults(self, capsys, config_file, monkeypatch):
        seen = {}

        def fake(order, x_min, x_max):
            seen.update(order=order, x_min=x_min, x_max=x_max)
            return []

        monkeypatch.setattr(main, "run_verification", fake)
        path = config_file("verify:\n  order: 4\n  x_min: -1\n  x_max: 1\n")
        assert main.run(["verify", "--config", str(path)]) == 0
        assert seen == {"order": 4, "x_min": -1, "x_max": 1}
