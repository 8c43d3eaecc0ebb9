import json

import pytest

from qspectra.cli import main, parse_point
from qspectra.pair import pair_to_json

from conftest import nilpotent_pair


@pytest.fixture
def nil_file(tmp_path):
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(pair_to_json(nilpotent_pair())))
    return str(path)


def test_parse_point():
    p = parse_point("y,1/2,-3")
    assert p.axis == "Y" and p.value == 0.5 - 3j
    assert parse_point("X,1/3", exact=True).value.re.denominator == 3


def test_oracle(nil_file, capsys):
    assert main(["oracle", "--pair", nil_file, "--point", "Y,1,0"]) == 0
    assert json.loads(capsys.readouterr().out) == {"h0": 0, "h1": 1, "h2": 1, "rank0": 2, "rank1": 1}


def test_classify_model(capsys):
    cfg_args = []
    assert main(["classify", "--model", "0.5", "--point", "X,2.5,0"] + cfg_args) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["in_sigma"] == "0" and out["h1"] == "0"


def test_scan_and_report(nil_file, tmp_path, capsys):
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps({"schema": 1, "axis": "both", "layout": "points", "half_width": 0.1,
                                "values": [0, 1, 3, [0, 1]]}))
    csv_out, js = tmp_path / "p.csv", tmp_path / "p.json"
    assert main(["scan", "--pair", nil_file, "--grid", str(grid), "--out", str(csv_out),
                 "--json", str(js)]) == 0
    assert csv_out.read_text().startswith("axis,re,im,h0")
    svg = tmp_path / "p.svg"
    capsys.readouterr()
    assert main(["report", "--portrait", str(js), "--svg", str(svg)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["projection"]["q_projection"] == "holds"
    assert svg.read_text().startswith("<svg")


def test_verify_model_cli(tmp_path):
    out = tmp_path / "v.json"
    assert main(["verify-model", "--q", "0.5", "--N", "60", "--no-numerics", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["pass"] is True


def test_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema": 1, "T": {"kind": "shift"}, "S": {"kind": "diagonal_powers",
                                                                          "params": {"base": 0.5}},
                               "q": 0.25}))
    assert main(["classify", "--pair", str(bad), "--point", "X,1"]) == 2
    assert "error" in capsys.readouterr().err
