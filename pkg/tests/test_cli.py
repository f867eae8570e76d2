import csv
import io
import json

import pytest

from chowdeg.bench import bench, loglog_slope, stage_times
from chowdeg.cli import main

ONE = "d{1,2|3,4,5,6}^2 * d{1,2,3,4|5,6}"
TWO = "d{1,2,3|4,5,6,7}^3 * d{1,2,3,4,5|6,7}"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_text(capsys):
    code, out, _ = run(capsys, "eval", ONE)
    assert code == 0
    assert "value=-1" in out and "class=general" in out


def test_eval_json_with_oracle(capsys):
    code, out, _ = run(capsys, "eval", "--json", "--oracle", TWO)
    rec = json.loads(out)
    assert code == 0
    assert rec["value"] == rec["oracle"] == 2
    assert rec["n"] == 7 and rec["degree"] == 4 and rec["proper"] is True
    assert set(rec["timings"]) >= {"degree", "quadratic"}


def test_eval_file_with_comments_and_errors(tmp_path, capsys):
    f = tmp_path / "in.txt"
    f.write_text(f"# worked examples\n{ONE}\n\nd{{1,2|3}}\nd{{1,2|3,4,5}} * d{{1,4|2,3,5}}  # crossing\n")
    code, out, err = run(capsys, "eval", "--json", str(f))
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 1 and "parse error" in err
    assert [x["classification"] for x in lines] == ["general", "zero-by-quadratic"]


def test_eval_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(ONE + "\n"))
    code, out, _ = run(capsys, "eval", "-")
    assert code == 0 and "value=-1" in out


def test_eval_cap_exceeded(capsys):
    text = " * ".join(f"d{{{','.join(map(str, range(1, i + 1)))}|{','.join(map(str, range(i + 1, 11)))}}}" for i in range(2, 9))
    code, out, err = run(capsys, "eval", "--oracle", "--oracle-cap", "9", text)
    assert code == 3 and "value=1" in out
    code, out, _ = run(capsys, "eval", "--oracle", "--oracle-cap", "10", text)
    assert code == 0 and "oracle=1" in out


def test_eval_dot_output(tmp_path, capsys):
    code, _, _ = run(capsys, "eval", "--dot", str(tmp_path), ONE)
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["0000_forest.dot", "0000_tree.dot"]


def test_identities_csv(capsys):
    code, out, _ = run(capsys, "identities", "--r-max", "3", "--m-max", "2")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert {r["status"] for r in rows} == {"pass", "skipped"}
    assert sum(r["status"] == "pass" for r in rows) == (2 + 4 + 8) + (4 + 8) + 8


def test_identities_json_single(capsys):
    code, out, _ = run(capsys, "identities", "--variant", "1", "--m", "2,2,1", "--format", "json")
    (row,) = json.loads(out)
    assert code == 0 and row["lhs"] == row["rhs"] == 30


def test_bench_csv(capsys):
    code, out, _ = run(capsys, "bench", "--shape", "sun-like", "--n", "2,3", "--repeat", "1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2
    assert all(r["value"] == r["expected"] for r in rows)


def test_export_tree(tmp_path, capsys):
    code, out, _ = run(capsys, "export-tree", ONE)
    assert code == 0 and out.count("--") == 2
    dest = tmp_path / "t.json"
    code, _, _ = run(capsys, "export-tree", "--format", "json", "-o", str(dest), ONE)
    assert code == 0 and len(json.loads(dest.read_text())["edges"]) == 2
    code, out, _ = run(capsys, "export-tree", "--forest", ONE)
    assert code == 0 and out.startswith("graph")
    code, _, err = run(capsys, "export-tree", "d{1,2|3,4,5} * d{1,4|2,3,5}")
    assert code == 1 and "error" in err


def test_unknown_subcommand():
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_bench_rows_and_slope():
    rows = bench("clever-caterpillar", [20, 40], repeat=1)
    assert [r.value for r in rows] == [1, 1] and rows[0].total_s > 0
    assert bench("random-tree", [8], repeat=1)[0].expected is None
    with pytest.raises(ValueError):
        bench("nope", [5])
    assert loglog_slope([1, 2, 4], [3, 6, 12]) == pytest.approx(1.0)
    m, *_, value = stage_times("d{1,2|3,4,5} * d{1,4|2,3,5}")
    assert value == 0 and m.n == 5
