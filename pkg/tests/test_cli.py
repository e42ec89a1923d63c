import json

import pytest

from exseq.cli import main


@pytest.fixture
def files(tmp_path):
    x2 = tmp_path / "x2.json"
    x2.write_text(json.dumps({"kind": "cotangent", "ell": 2}))
    hirz = tmp_path / "f2.json"
    hirz.write_text(json.dumps({"kind": "toric", "ell": 1, "v": 1, "c": [0, -2]}))
    seq = tmp_path / "seq.json"
    seq.write_text(json.dumps([[0, 0], [0, 1], [1, 1], [0, 2], [1, 2], [1, 3]]))
    iv4 = tmp_path / "iv4.json"
    iv4.write_text(json.dumps([[0, 0], [1, 0], [1, 2], [2, 0], [2, 1], [4, 1]]))
    return {"x2": x2, "f2": hirz, "seq": seq, "iv4": iv4, "dir": tmp_path}


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_loci_formats(files, capsys):
    for fmt, probe in (("ascii", "rows j ="), ("json", '"immaculate"'), ("svg", "<svg")):
        code, out = run(
            ["loci", "--spec", str(files["x2"]), "--window", "6", "--format", fmt],
            capsys,
        )
        assert code == 0 and probe in out


def test_loci_marks_origin_and_canonical(files, capsys):
    _, out = run(
        ["loci", "--spec", str(files["x2"]), "--window", "4", "--format", "ascii"],
        capsys,
    )
    assert "O" in out and "K" in out


def test_check_class_ii(files, capsys):
    code, out = run(
        ["check", "--spec", str(files["x2"]), "--sequence", str(files["seq"])],
        capsys,
    )
    verdict = json.loads(out)
    assert code == 0
    assert verdict["exceptional"] and verdict["maximal"]
    assert verdict["strong"] and verdict["effective"]
    assert verdict["order_count"] == 2
    assert verdict["F"] and verdict["P"]


def test_enumerate_jsonl(files, capsys):
    code, out = run(
        ["enumerate", "--spec", str(files["f2"]), "--offsets", "1"], capsys
    )
    assert code == 0
    rows = [json.loads(line) for line in out.strip().splitlines()]
    assert rows and all({"bundles", "strong", "effective", "layers"} <= set(r) for r in rows)


def test_classify_x2(files, capsys):
    code, out = run(["classify-x2", "--window", "5"], capsys)
    data = json.loads(out)
    assert code == 0 and data["count"] == len(data["sets"]) > 0
    assert all(r["class"] != "unclassified" for r in data["sets"])


def test_reduce(files, capsys):
    code, out = run(
        ["reduce", "--spec", str(files["x2"]), "--sequence", str(files["iv4"])],
        capsys,
    )
    data = json.loads(out)
    assert code == 0 and data["orlov"]
    assert any(s["op"] == "banana_right" for s in data["steps"])


def test_poset(files, capsys):
    code, out = run(
        ["poset", "--spec", str(files["x2"]), "--sequence", str(files["seq"])],
        capsys,
    )
    data = json.loads(out)
    assert code == 0 and data["linear_extensions"] == 2


def test_rouquier_cmd(files, capsys):
    code, out = run(["rouquier", "--spec", str(files["x2"])], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["dim"] == 3 and data["rouquier"] == "exact"


def test_verify_section(files, capsys):
    code, out = run(["verify-paper", "--section", "6.4"], capsys)
    verdicts = json.loads(out)
    assert code == 0
    assert {v["claim"] for v in verdicts} == {"thm-6.8", "lem-6.9"}
    assert all(v["status"] == "pass" for v in verdicts)


def test_unknown_subcommand_exit_2(files, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_byte_stable_output(files, capsys):
    runs = []
    for _ in range(2):
        _, out = run(
            ["loci", "--spec", str(files["x2"]), "--window", "5", "--format", "json"],
            capsys,
        )
        runs.append(out)
    assert runs[0] == runs[1]


def test_out_flag_writes_file(files, capsys):
    target = files["dir"] / "loci.json"
    code, _ = run(
        ["loci", "--spec", str(files["x2"]), "--window", "4", "--format", "json",
         "--out", str(target)],
        capsys,
    )
    assert code == 0 and json.loads(target.read_text())["window"] == 4


def test_malformed_spec_diagnostic(files, capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "toric", "ell": 1, "v": 1, "c": [1]}))
    code = main(["loci", "--spec", str(bad)])
    err = capsys.readouterr().err
    assert code == 1 and "error" in err


def test_enumerate_families(files, capsys):
    code, out = run(
        ["enumerate", "--spec", str(files["f2"]), "--offsets", "2", "--families"],
        capsys,
    )
    assert code == 0
    rows = [json.loads(line) for line in out.strip().splitlines()]
    assert {"admissible", "free_layers", "members_in_window"} <= set(rows[0])
    assert any(r["admissible"] == [] for r in rows)


def test_malformed_sequence_diagnostic(files, capsys, tmp_path):
    bad = tmp_path / "bad_seq.json"
    bad.write_text("[[0,0],[1]]")
    code = main(["check", "--spec", str(files["x2"]), "--sequence", str(bad)])
    err = capsys.readouterr().err
    assert code == 1 and "/1" in err


def test_threaded_verify_sections():
    from exseq.verify import run_sections

    serial = run_sections(["6.2", "6.4"])
    threaded = run_sections(["6.2", "6.4"], threads=2)
    assert [v.claim for v in serial] == [v.claim for v in threaded]
    assert all(v.status == "pass" for v in threaded)
