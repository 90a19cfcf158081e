from __future__ import annotations

import json

import pytest

from stabgrid.cli import main


def run(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_model_gsd_example(capsys):
    code, out = run(capsys, "model", "gsd", "[0,1,2,3]@3x3x3:pbc")
    assert code == 0
    rep = json.loads(out)
    assert rep == {
        "spec": "[0,1,2,3]",
        "dims": "3x3x3:pbc",
        "n_qubits": 81,
        "rank": 66,
        "log2_gsd": 15,
    }


def test_model_gsd_constant_family(capsys):
    code, out = run(capsys, "model", "gsd", "[1,2,3,3]@2x2x2:pbc")
    assert code == 0
    assert json.loads(out)["log2_gsd"] == 3


def test_model_build_and_dualize(capsys):
    code, out = run(capsys, "model", "build", "[0,1,2,2]@3x3:pbc")
    assert code == 0
    rep = json.loads(out)
    assert rep["commuting"] is True and rep["n_generators"] == 18
    code, out = run(capsys, "model", "dualize", "[1,2,3,3]@2x2x2:pbc")
    assert code == 0
    rep = json.loads(out)
    assert rep["gsd_equal"] and rep["double_dual_matches"]


def test_scan_fit(capsys):
    code, out = run(capsys, "scan", "[0,1,2,3]", "--sizes", "2..3")
    assert code == 0
    rep = json.loads(out)
    assert rep["fit"] == {"c2": 0, "c1": 2, "c0": -3, "residual_max": 0, "ok": True}
    assert rep["log2_gsd"]["2x2x2:pbc"] == 9


def test_erg_verify_paper_and_general(capsys):
    for source in ("paper", "general"):
        code, out = run(
            capsys, "erg", "verify", "[0,1,2,3]@2x2x2:pbc", "--circuit", source
        )
        assert code == 0
        rep = json.loads(out)
        assert rep["equal"] and rep["recursion_ok"] and rep["mapping_ok"]
        assert rep["circuit_source"] == source
        assert set(rep) == {
            "spec", "dims_from", "dims_to", "axis", "circuit_source", "n_gates",
            "h1_rank", "h2_rank", "h3_rank", "equal", "gsd_from", "gsd_to",
            "inserted_gsd", "recursion_ok", "mapping_ok",
        }


def test_erg_circuit_report(capsys):
    code, out = run(capsys, "erg", "circuit", "[0,1,2,2]@3x3:pbc")
    assert code == 0
    rep = json.loads(out)
    assert rep["ok"] and rep["n_gates"] == 9 == len(rep["gates"])
    assert all(rep["conditions"].values())


def test_erg_classify_report(capsys):
    code, out = run(capsys, "erg", "classify", "[0,1,2,3]@2x2x2:pbc")
    assert code == 0
    rep = json.loads(out)
    assert rep["class_counts"] == {
        "AI": 4, "AII": 4, "BI": 4, "BII": 8, "BIV": 4, "BV": 12, "C": 4, "far": 4,
    }


def test_coarse_verify(capsys):
    code, out = run(capsys, "coarse", "verify", "--L", "4")
    assert code == 0
    assert json.loads(out) == {
        "L": 4, "n_configs": 32768, "ghz_ok": True, "coarse_equal_ok": True,
    }


def test_exit_code_resource(capsys):
    code, _ = run(capsys, "coarse", "verify", "--L", "9")
    assert code == 3
    code, _ = run(capsys, "model", "gsd", "[0,1,2,3]@50x50x50:pbc")
    assert code == 3


def test_exit_code_domain_and_construction(capsys):
    code, _ = run(capsys, "model", "gsd", "[3,2,1,0]@2x2x2:pbc")
    assert code == 2
    code, _ = run(capsys, "coarse", "verify", "--L", "3")
    assert code == 2
    code, _ = run(capsys, "erg", "verify", "[0,1,2,2]@3x3:obc")
    assert code == 2
    code, _ = run(capsys, "erg", "circuit", "[0,1,2,2]@3x3:pbc", "--circuit", "general")
    assert code == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["model", "gsd"])  # missing argument: argparse exits 2
    assert exc.value.code == 2


def test_unwritable_out_path(capsys, tmp_path):
    target = tmp_path / "no" / "such" / "dir" / "r.json"
    code = main(["model", "gsd", "[0,1,2,2]@3x3:pbc", "--out", str(target)])
    assert code == 2
    assert "cannot write report" in capsys.readouterr().err


def test_reports_byte_identical(tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    for p in (p1, p2):
        assert main(["erg", "verify", "[0,1,2,3]@2x2x2:pbc", "--out", str(p)]) == 0
    assert p1.read_bytes() == p2.read_bytes()
    c1, c2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (c1, c2):
        assert main(["scan", "[0,1,2,3]", "--sizes", "2..3", "--format", "csv", "--out", str(p)]) == 0
    assert c1.read_bytes() == c2.read_bytes()


def test_csv_quotes_fields_with_commas(capsys):
    code, out = run(capsys, "model", "gsd", "[0,1,2,2]@2x2:pbc", "--format", "csv")
    assert code == 0
    assert 'spec,"[0,1,2,2]"' in out
    assert "log2_gsd,2" in out


def test_axis_flag_is_one_based(capsys):
    code, out = run(capsys, "erg", "verify", "[0,1,2,3]@2x3x2:pbc", "--axis", "1")
    assert code == 0
    rep = json.loads(out)
    assert rep["axis"] == 1
    assert rep["dims_to"] == "3x3x2:pbc"


def test_sizes_comma_list(capsys):
    code, out = run(capsys, "scan", "[0,1,2,2]", "--sizes", "2,4")
    assert code == 0
    rep = json.loads(out)
    assert set(rep["log2_gsd"]) == {"2x2:pbc", "2x4:pbc", "4x2:pbc", "4x4:pbc"}
    assert all(v == 2 for v in rep["log2_gsd"].values())
