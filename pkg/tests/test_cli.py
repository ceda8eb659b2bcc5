import csv
import io
import json
from importlib import resources

import jsonschema
import pytest

from curveatlas.cli import build_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def csv_rows(text):
    return [r for r in csv.reader(io.StringIO(text)) if r]


def load_schema():
    with resources.files("curveatlas").joinpath("report_schema.json").open() as fh:
        return json.load(fh)


class TestVerifyPoints:
    def test_exit_zero_and_29_records(self, capsys):
        code, out = run(capsys, "verify-points", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert len(data["checks"]) == 29
        assert all(c["status"] == "pass" for c in data["checks"])

    def test_json_validates_against_schema(self, capsys):
        _, out = run(capsys, "verify-points", "--format", "json")
        jsonschema.validate(json.loads(out), load_schema())

    def test_csv_export(self, capsys):
        code, out = run(capsys, "verify-points", "--format", "csv")
        assert code == 0
        rows = csv_rows(out)
        assert rows[0] == ["curve", "coord1", "coord2", "provenance", "d"]
        assert len(rows) == 30  # header + 29 table points
        curves = {r[0] for r in rows[1:]}
        assert curves == {"K1", "K3", "Ks"}


class TestVerifyMaps:
    def test_all_pass(self, capsys):
        code, out = run(capsys, "verify-maps", "--format", "json")
        assert code == 0
        data = json.loads(out)
        ids = [c["id"] for c in data["checks"]]
        assert "map:commuting-square" in ids
        assert "map:euler-resolvent" in ids
        assert any(i.startswith("map:pell:") for i in ids)
        assert any(i.startswith("map:k3_to_ks:exceptional") for i in ids)


class TestModularCommands:
    def test_verify_tower_single_d(self, capsys):
        code, out = run(capsys, "verify-tower", "--d", "19", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert any(c["id"] == "tower:d=19:recover" for c in data["checks"])

    def test_modular_reports_values(self, capsys):
        code, out = run(capsys, "modular", "--d", "163", "--bits", "256",
                        "--format", "json")
        assert code == 0
        data = json.loads(out)
        by_id = {c["id"]: c for c in data["checks"]}
        assert by_id["modular:d=163:pair"]["values"] == {"a3": "-17", "b3": "150"}
        assert by_id["modular:d=163:j"]["values"]["j"] == "-262537412640768000"

    def test_invalid_d_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as ei:
            main(["modular", "--d", "7"])
        assert ei.value.code == 2


class TestSearchCommand:
    def test_ks_search(self, capsys):
        code, out = run(capsys, "search", "--curve", "ks", "--height", "25",
                        "--format", "json")
        assert code == 0
        data = json.loads(out)
        pts = [c for c in data["checks"] if c["id"].startswith("search:Ks:point:")]
        assert len(pts) == 9

    def test_search_csv(self, capsys):
        code, out = run(capsys, "search", "--curve", "k1", "--box", "5",
                        "--format", "csv")
        assert code == 0
        rows = csv_rows(out)
        assert len(rows) == 7  # header + 6 integral points
        assert all(r[3] == "search" for r in rows[1:])

    def test_missing_bound_is_usage_error(self):
        with pytest.raises(SystemExit) as ei:
            main(["search", "--curve", "ks"])
        assert ei.value.code == 2

    def test_zero_height_is_usage_error(self):
        with pytest.raises(SystemExit) as ei:
            main(["search", "--curve", "ks", "--height", "0"])
        assert ei.value.code == 2


class TestReport:
    def test_full_battery(self, capsys, tmp_path):
        out_path = tmp_path / "report.json"
        code, _ = run(capsys, "report", "--height", "30", "--box", "20",
                      "--format", "json", "--out", str(out_path))
        assert code == 0
        data = json.loads(out_path.read_text())
        jsonschema.validate(data, load_schema())
        assert all(c["status"] == "pass" for c in data["checks"])
        ids = {c["id"] for c in data["checks"]}
        assert "singular:K3" in ids
        assert any(i.startswith("selftest:product") for i in ids)
        assert any(i.startswith("tower:d=163") for i in ids)

    def test_deterministic_apart_from_timing(self, capsys):
        _, out1 = run(capsys, "verify-maps", "--format", "json")
        _, out2 = run(capsys, "verify-maps", "--format", "json")
        d1, d2 = json.loads(out1), json.loads(out2)
        for d in (d1, d2):
            d.pop("timestamp")
            d.pop("elapsed_seconds")
        assert d1 == d2


class TestParser:
    def test_subcommand_required(self):
        with pytest.raises(SystemExit) as ei:
            main([])
        assert ei.value.code == 2

    def test_unknown_format_rejected(self):
        with pytest.raises(SystemExit) as ei:
            main(["verify-points", "--format", "xml"])
        assert ei.value.code == 2

    def test_parser_builds(self):
        assert build_parser().prog == "curveatlas"
