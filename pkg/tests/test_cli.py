import io
import json

import pytest

from cflrecog.cli import main
from cflrecog.report import REPORT_FIELDS, ResourceReport
from cflrecog.sampler import Dataset, get_spec, meta_path


@pytest.fixture
def amb_file(tmp_path):
    p = tmp_path / "ambiguous.cfg"
    p.write_text("S -> S S | a\n", encoding="utf-8")
    return str(p)


@pytest.mark.parametrize("argv,code", [
    (["recognize", "-g", "dyck1", "-e", "general", "(())"], 0),
    (["recognize", "-g", "dyck1", "-e", "cyk", "(()"], 1),
    (["recognize", "-g", "dyck2", "-e", "unambiguous", "([])[]"], 0),
    (["recognize", "-g", "palindrome", "-e", "linear", "abab"], 1),
    (["recognize", "-g", "bfvp_postfix", "-e", "bfvp", "1 0 ∨"], 0),
    (["recognize", "-g", "bfvp_infix", "-e", "bfvp", "¬(1 ∧ 0)"], 0),
    (["recognize", "-g", "bfvp_postfix", "-e", "bfvp", "1 0 ∧"], 1),
    (["recognize", "-g", "no_such_grammar", "ab"], 2),
    (["recognize", "-g", "dyck1", "(x)"], 2),
    (["recognize", "-g", "dyck1", "-e", "general", "()" * 9], 2),
    (["recognize", "-g", "dyck1", "-e", "linear", "()"], 2),
    (["bogus"], 2),
])
def test_recognize_exit_codes(argv, code, capsys):
    assert main(argv) == code


def test_ambiguous_grammar_exit_three(amb_file, capsys):
    assert main(["recognize", "-g", amb_file, "-e", "unambiguous", "aaa"]) == 3
    assert "ambiguity" in capsys.readouterr().err


def test_no_convert(amb_file, tmp_path, capsys):
    p = tmp_path / "anbn.cfg"
    p.write_text("S -> a S b | a b\n", encoding="utf-8")
    assert main(["recognize", "-g", str(p), "aabb"]) == 0
    assert "converted" in capsys.readouterr().err
    assert main(["recognize", "-g", str(p), "--no-convert", "aabb"]) == 2


def test_stdin_input(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("(()())\n"))
    assert main(["recognize", "-g", "dyck1", "-e", "unambiguous"]) == 0


def test_json_report_schema(capsys):
    assert main(["recognize", "-g", "dyck1", "-e", "general", "--json", "(())"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) <= set(REPORT_FIELDS)
    assert {"engine", "accepted", "n", "rounds_used", "item_cells", "slashed_cells",
            "decomposition_pairs", "wall_time"} <= set(doc)
    assert doc["accepted"] is True and doc["n"] == 4
    rep = ResourceReport.from_dict(doc)
    assert rep.schema_dict() == doc


def test_json_unambiguous_fields(capsys):
    main(["recognize", "-g", "dyck1", "-e", "unambiguous", "--json", "(())"])
    doc = json.loads(capsys.readouterr().out)
    assert {"edge_cells", "pebble_rounds", "rounds_used", "item_cells"} <= set(doc)
    assert "slashed_cells" not in doc


def test_report_round_trip():
    r = ResourceReport("linear", True, 5, rounds_used=1, item_cells=30, pebble_rounds=7)
    assert ResourceReport.from_json(r.to_json()) == r
    with pytest.raises(ValueError):
        ResourceReport.from_dict({"engine": "cyk", "accepted": True, "n": 1, "extra": 2})
    with pytest.raises(ValueError):
        ResourceReport("neural", True, 1)


def test_verify_general_exhaustive(capsys):
    assert main(["verify", "-g", "dyck1", "-e", "general", "--exhaustive", "6"]) == 0
    out = capsys.readouterr().out
    assert "disagreements=0" in out and "checked=127" in out


def test_verify_random_json(capsys):
    assert main(["verify", "-g", "marked_palindrome", "-e", "unambiguous", "--random", "40",
                 "--max-n", "60", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["checked"] == 40 and doc["disagreements"] == 0


def test_verify_bfvp(capsys):
    assert main(["verify", "-g", "bfvp_postfix", "-e", "bfvp", "--exhaustive", "5"]) == 0
    assert "disagreements=0" in capsys.readouterr().out


def test_verify_reports_disagreement(capsys):
    # a one-round budget is too small for long members, so the general engine under-accepts
    code = main(["verify", "-g", "dyck1", "-e", "general", "--budget-c", "-3", "--exhaustive", "8"])
    captured = capsys.readouterr()
    assert code == 4
    assert "counterexample" in captured.err


def test_verify_ambiguous(amb_file, capsys):
    assert main(["verify", "-g", amb_file, "-e", "unambiguous", "--exhaustive", "3"]) == 3


def test_bench_json(tmp_path, capsys):
    out = tmp_path / "bench.json"
    assert main(["bench", "-g", "dyck1", "-e", "general", "--lengths", "4,8", "--samples", "2",
                 "-o", str(out)]) == 0
    table = capsys.readouterr().out
    assert "rounds" in table
    doc = json.loads(out.read_text())
    assert [r["n"] for r in doc["rows"]] == [4, 8]
    for r in doc["rows"]:
        assert r["rounds"] <= {4: 2, 8: 3}[r["n"]] + 4


def test_bench_infeasible_length(capsys):
    assert main(["bench", "-g", "palindrome", "-e", "linear", "--lengths", "5", "--samples", "1"]) == 0
    assert "no member" in capsys.readouterr().out


def test_sample_file_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    assert main(["sample", "-l", "dyck1", "-c", "100", "--max-n", "20", "-o", str(a)]) == 0
    assert main(["sample", "-l", "dyck1", "-c", "100", "--max-n", "20", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert meta_path(a).exists()
    ds = Dataset.read(a, get_spec("dyck1"))
    assert len(ds) == 100 and ds.mislabeled(get_spec("dyck1")) == []
    assert "100 records" in capsys.readouterr().out


def test_sample_infeasible_lengths(capsys):
    assert main(["sample", "-l", "palindrome", "--max-n", "5", "--lengths", "1,3,5"]) == 2
    err = capsys.readouterr().err
    assert "feasible lengths" in err and "2, 4" in err


def test_sample_stdout(capsys):
    assert main(["sample", "-l", "anbn", "-c", "6", "--max-n", "10"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 6
    assert all(line.split("\t")[0] in ("positive", "negative") for line in lines)
