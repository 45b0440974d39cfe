import json

import pytest

from cpmgraphs.cli import main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--m", "3", "--s", "2", "--n", "7", "--r", "2")
    assert code == 0
    assert "HAT" in out and "stabilizer 4" in out and "|Aut| 1176" in out


def test_classify_verify(capsys):
    code, out, _ = run(capsys, "classify", "--m", "3", "--s", "2", "--n", "3", "--r", "1",
                       "--verify-below", "100")
    assert code == 0 and "brute force: |Aut| 1296" in out


def test_invalid_params_exit_1(capsys):
    code, _, err = run(capsys, "classify", "--m", "1", "--s", "2", "--n", "8", "--r", "2")
    assert code == 1 and "invalid" in err


def test_census_jsonl(capsys):
    code, out, _ = run(capsys, "census", "--max-order", "1000", "--class", "hat", "--radius", "odd",
                       "--format", "jsonl")
    assert code == 0
    recs = [json.loads(x) for x in out.splitlines()]
    assert {(d["m"], d["s"], d["n"], d["r"]) for d in recs} == {
        (3, 2, 7, 2), (3, 2, 9, 2), (6, 2, 7, 2), (9, 2, 7, 2), (6, 2, 9, 2)}


def test_census_out_file(tmp_path, capsys):
    path = tmp_path / "c.txt"
    code, _, _ = run(capsys, "census", "--max-order", "60", "--format", "table", "--out", str(path))
    assert code == 0 and path.read_text().startswith("graph")


def test_iso_open_case(capsys):
    code, out, _ = run(capsys, "iso", "--left", "6,2,52,3", "--right", "6,2,52,15")
    assert code == 0
    assert out.strip() == "open-case (theory); NOT isomorphic (invariants)"


def test_iso_verify(capsys):
    code, out, _ = run(capsys, "iso", "--left", "3,2,7,2", "--right", "3,2,7,4", "--verify")
    assert code == 0
    assert out.startswith("isomorphic") and "brute force: isomorphic" in out


def test_cycles(capsys):
    code, out, _ = run(capsys, "cycles", "--m", "3", "--s", "2", "--n", "7", "--r", "2")
    assert code == 0 and "anananan" in out


def test_export(capsys, tmp_path):
    code, out, _ = run(capsys, "export", "--m", "2", "--s", "2", "--n", "4", "--r", "1",
                       "--as", "adjacency")
    assert code == 0 and out.splitlines()[0] == "# CPM 2 2 4 1 16"
    path = tmp_path / "e.txt"
    run(capsys, "export", "--m", "4", "--s", "2", "--n", "4", "--r", "1", "--full", "--out", str(path))
    assert len(path.read_text().splitlines()) == 1 + 128 * 2
