import json

import pytest
from click.testing import CliRunner

from relgt.cli import main

BLOWUP_DOC = {
    "name": "blowup-2",
    "gram": [[1, 0, 0], [0, -1, 0], [0, 0, -1]],
    "labels": ["h", "E1", "E2"],
    "K": "-3h+E1+E2",
    "hypersurface": {"class": "2h-E1-E2", "genus": 0},
    "ru_table": [
        {"class": "E1", "l3": [1], "value": 1},
        {"class": "E2", "l3": [1], "value": 1},
    ],
    "rim": {"h1v_rank": 2, "matrix": [[2, 0], [0, 0]]},
}


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def manifold(tmp_path):
    p = tmp_path / "m.json"
    p.write_text(json.dumps(BLOWUP_DOC))
    return str(p)


@pytest.fixture
def data_file(tmp_path):
    p = tmp_path / "d.json"
    p.write_text(json.dumps({"l3": [1, 1]}))
    return str(p)


def test_invariant_report(runner, manifold, data_file):
    result = runner.invoke(
        main,
        ["invariant", "--manifold", manifold, "--class", "E1+E2", "--data", data_file],
    )
    assert result.exit_code == 0, result.output
    assert "d_A: 0" in result.output
    assert "proper: yes" in result.output
    assert "GT_direct: 1" in result.output
    assert "per_mode_discrepancy: yes" in result.output


def test_invariant_json_deterministic(runner, manifold, data_file):
    args = [
        "invariant", "--manifold", manifold, "--class", "E1+E2",
        "--data", data_file, "--format", "json",
    ]
    out1 = runner.invoke(main, args)
    out2 = runner.invoke(main, args)
    assert out1.exit_code == 0
    assert out1.output == out2.output
    payload = json.loads(out1.output)
    assert payload["GT_unit"] == "1"
    assert payload["GT_literal"] == "4"


def test_invariant_improper_data_exits_2(runner, manifold, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"d1": 1, "l3": [1]}))
    # E1 - ... use a negative-dimension class: h - 3E1 has d < 0
    result = runner.invoke(
        main,
        ["invariant", "--manifold", manifold, "--class", "h-3E1", "--data", str(bad)],
    )
    assert result.exit_code == 2
    assert "properness_failures" in result.output


def test_invariant_missing_file_exits_1(runner):
    result = runner.invoke(
        main, ["invariant", "--manifold", "missing.json", "--class", "E1"]
    )
    assert result.exit_code == 1


def test_invariant_parse_error_exits_1(runner, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{oops")
    result = runner.invoke(main, ["invariant", "--manifold", str(p), "--class", "E1"])
    assert result.exit_code == 1
    assert "line" in result.output


def test_decompose_counts(runner, manifold):
    result = runner.invoke(
        main,
        [
            "decompose", "--manifold", manifold, "--class", "E1+E2",
            "--support", "E1;E2;E1+E2",
        ],
    )
    assert result.exit_code == 0, result.output
    assert "count: 2" in result.output


def test_decompose_table_support(runner, manifold):
    result = runner.invoke(
        main, ["decompose", "--manifold", manifold, "--class", "E1+E2"]
    )
    assert result.exit_code == 0
    assert "count: 1" in result.output  # table knows only E1, E2


def test_decompose_empty_support(runner, manifold):
    result = runner.invoke(
        main,
        ["decompose", "--manifold", manifold, "--class", "E1+E2", "--support", " "],
    )
    assert result.exit_code == 0
    assert "count: 0" in result.output


def test_k3_roots(runner):
    result = runner.invoke(main, ["k3", "roots"])
    assert result.exit_code == 0
    assert "roots: 240" in result.output


def test_k3_picard(runner):
    vec = ",".join(["1", "1"] + ["0"] * 20)
    result = runner.invoke(main, ["k3", "picard", "--basis", vec])
    assert result.exit_code == 0
    assert "moduli_dim: 19" in result.output
    assert "(1,0)" in result.output


def test_k3_kahler_check(runner):
    re = ",".join(["1", "1"] + ["0"] * 20)
    im = ",".join(["0", "0", "1", "1"] + ["0"] * 18)
    kappa = ",".join(["0"] * 4 + ["1", "2"] + ["0"] * 16)
    result = runner.invoke(
        main,
        ["k3", "kahler-check", "--kappa", kappa, "--re", re, "--im", im, "--bound", "3"],
    )
    assert result.exit_code == 0
    assert "status: fail" in result.output
    assert "witness" in result.output


def test_rimtori_report(runner, manifold):
    result = runner.invoke(main, ["rimtori", "--manifold", manifold])
    assert result.exit_code == 0
    assert "rim_rank: 1" in result.output
    assert "torsion: [2]" in result.output


def test_rimtori_without_rim_block(runner, tmp_path):
    doc = {k: v for k, v in BLOWUP_DOC.items() if k != "rim"}
    p = tmp_path / "m.json"
    p.write_text(json.dumps(doc))
    result = runner.invoke(main, ["rimtori", "--manifold", str(p)])
    assert result.exit_code == 1
    assert "rim" in result.output
