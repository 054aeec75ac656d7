import json
import os

import pytest

from unitals.cli import main
from unitals.geometry import desarguesian_plane
from unitals.report import emit_plane


@pytest.fixture()
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.fixture()
def pg4_file(workdir, pg2_4):
    path = workdir / "pg4.txt"
    path.write_text(emit_plane(pg2_4, fmt="text", base=1))
    return str(path)


def test_validate_ok(pg4_file, capsys):
    assert main(["validate", pg4_file]) == 0
    assert "valid projective plane of order 4" in capsys.readouterr().out


def test_validate_corrupt_exits_1(workdir, pg4_file, capsys):
    rows = open(pg4_file).read().splitlines()
    toks = rows[2].split()
    rows[2] = " ".join(toks[:-1] + [toks[0]])
    bad = workdir / "bad.txt"
    bad.write_text("\n".join(rows))
    assert main(["validate", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "INVALID PLANE" in err and "witness" in err


def test_validate_empty_exits_2(workdir, capsys):
    empty = workdir / "empty.txt"
    empty.write_text("")
    assert main(["validate", str(empty)]) == 2
    assert "error:" in capsys.readouterr().err


def test_validate_missing_file_exits_2(capsys):
    assert main(["validate", "no_such_file.txt"]) == 2


def test_aut_text(pg4_file, capsys):
    assert main(["aut", pg4_file]) == 0
    out = capsys.readouterr().out
    assert "ORDER OF THE PLANE AUTOMORPHISM GROUP          120960" in out
    assert "GTOUP=      1" in out


def test_aut_json(pg4_file, capsys):
    assert main(["aut", pg4_file, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["group_order"] == "120960"
    assert doc["orbit_count"] == 1


def test_find_writes_results(pg4_file, workdir, capsys):
    code = main(["find", pg4_file, "--seed", "7", "--max-families", "4",
                 "--out", "res"])
    assert code == 0
    out = capsys.readouterr().out
    assert "UNITAL=" in out
    assert (workdir / "res" / "pg4.unitals.json").exists()
    assert (workdir / "res" / "certificates.index.json").exists()


def test_find_tiny_budget_flags_incomplete(pg4_file, workdir, capsys):
    code = main(["find", pg4_file, "--seed", "7", "--max-families", "4",
                 "--nodes", "5", "--out", "res2"])
    assert code == 0  # budget exhaustion is a flagged success
    doc = json.loads((workdir / "res2" / "pg4.unitals.json").read_text())
    assert doc["search"]["complete"] is False


def test_find_deterministic_bytes(pg4_file, workdir):
    argv = ["find", pg4_file, "--seed", "3", "--max-families", "4", "--out"]
    assert main(argv + ["r1"]) == 0
    assert main(argv + ["r2"]) == 0
    b1 = (workdir / "r1" / "pg4.unitals.json").read_bytes()
    b2 = (workdir / "r2" / "pg4.unitals.json").read_bytes()
    assert b1 == b2


def test_find_config_file(pg4_file, workdir, capsys):
    cfg = workdir / "cfg.json"
    cfg.write_text(json.dumps({"seed": 7, "max_families": 4}))
    assert main(["find", pg4_file, "--config", str(cfg), "--out", "rc"]) == 0
    b1 = (workdir / "rc" / "pg4.unitals.json").read_bytes()
    assert main(["find", pg4_file, "--seed", "7", "--max-families", "4",
                 "--out", "rf"]) == 0
    b2 = (workdir / "rf" / "pg4.unitals.json").read_bytes()
    assert b1 == b2


def test_find_bad_config_key(pg4_file, workdir, capsys):
    cfg = workdir / "cfg.json"
    cfg.write_text(json.dumps({"sede": 7}))
    assert main(["find", pg4_file, "--config", str(cfg)]) == 2


def test_verify_hermitian_fixture(pg4_file, workdir, capsys):
    assert main(["gen", "2", "hermitian", "--out", "fx"]) == 0
    code = main(["verify", pg4_file, str(workdir / "fx" / "pg2_4.hermitian.txt")])
    assert code == 0
    out = capsys.readouterr().out
    assert "UNITAL ok" in out
    assert "1:9" in out and "3:12" in out


def test_verify_damaged_list_exits_1(pg4_file, workdir, capsys):
    main(["gen", "2", "hermitian", "--out", "fx"])
    labels = (workdir / "fx" / "pg2_4.hermitian.txt").read_text().split()
    broken = workdir / "broken.txt"
    broken.write_text(" ".join(labels[:-1]))
    assert main(["verify", pg4_file, str(broken), "--q", "2"]) == 1
    out = capsys.readouterr().out
    assert "NOT A UNITAL" in out
    assert "0:" in out  # some line now misses the set entirely


def test_verify_label_out_of_range(pg4_file, workdir, capsys):
    bad = workdir / "oob.txt"
    bad.write_text("0 1 2 3 4 5 6 7 8")  # zero invalid under base 1
    assert main(["verify", pg4_file, str(bad)]) == 2


def test_classify_reports_classes(pg4_file, workdir, capsys):
    main(["find", pg4_file, "--seed", "7", "--max-families", "4", "--out", "cr"])
    capsys.readouterr()
    assert main(["classify", "cr"]) == 0
    out = capsys.readouterr().out
    assert "CLASS 1" in out
    assert "spanning multiple planes: 0" in out


def test_classify_spans_planes_after_copy(pg4_file, workdir, capsys):
    main(["find", pg4_file, "--seed", "7", "--max-families", "4", "--out", "cp"])
    stored = (workdir / "cp" / "pg4.unitals.json").read_text()
    clone = stored.replace('"name": "pg4"', '"name": "pg4b"').replace(
        '"plane_name": "pg4"', '"plane_name": "pg4b"')
    (workdir / "cp" / "pg4b.unitals.json").write_text(clone)
    capsys.readouterr()
    assert main(["classify", "cp", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert any(len({m["plane"] for m in c["members"]}) == 2 for c in doc["classes"])


def test_classify_empty_dir(workdir, capsys):
    os.makedirs("none", exist_ok=True)
    assert main(["classify", "none"]) == 0
    assert "classes: 0" in capsys.readouterr().out


def test_gen_plane_matches_library(workdir, capsys):
    assert main(["gen", "7", "plane"]) == 0
    out = capsys.readouterr().out
    expected = emit_plane(desarguesian_plane(7), fmt="text", base=1)
    assert out == expected
    assert len(out.splitlines()) == 57


def test_gen_plane_json_round_trip(workdir, capsys):
    assert main(["gen", "3", "plane", "--format", "json"]) == 0
    out = capsys.readouterr().out
    doc = json.loads(out)
    assert doc["order"] == 3 and len(doc["lines"]) == 13


def test_gen_unsupported_order(capsys):
    assert main(["gen", "6", "plane"]) == 2


def test_gen_hermitian_label_count(workdir, capsys):
    assert main(["gen", "3", "hermitian"]) == 0
    labels = capsys.readouterr().out.split()
    assert len(labels) == 28
