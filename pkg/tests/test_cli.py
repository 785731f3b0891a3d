import subprocess
import sys

import pytest

from helpers import QUERY_Q, HOSPITAL_NT

from mapsq.cli import BenchReport, bench_query, bundled_queries, main
from mapsq.generator import GenConfig, generate
from mapsq.rdf_store import load_ntriples_file
from mapsq.sparql import parse_query


@pytest.fixture
def fixture_file(tmp_path):
    path = tmp_path / "hospital.nt"
    path.write_bytes(HOSPITAL_NT)
    return path


@pytest.mark.parametrize("engine", ["mr", "nested", "brute"])
def test_query_hospital(fixture_file, capsys, engine):
    assert main(["query", "--data", str(fixture_file), "--inline", QUERY_Q, "--engine", engine]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "?person"
    assert sorted(out[1:]) == ["Jim", "Susan"]


def test_query_from_file(fixture_file, tmp_path, capsys):
    qfile = tmp_path / "q.rq"
    qfile.write_text(QUERY_Q)
    assert main(["query", "--data", str(fixture_file), "--query", str(qfile), "--workers", "4"]) == 0
    assert capsys.readouterr().out == "?person\nJim\nSusan\n"


def test_query_empty_data(tmp_path, capsys):
    empty = tmp_path / "empty.nt"
    empty.write_bytes(b"")
    assert main(["query", "--data", str(empty), "--inline", QUERY_Q]) == 0
    assert capsys.readouterr().out == "?person\n"


def test_malformed_query_exit_1(fixture_file, capsys):
    assert main(["query", "--data", str(fixture_file), "--inline", "SELECT ?x WHERE {\n ?x p }"]) == 1
    assert "line 2, column 7" in capsys.readouterr().err


def test_malformed_data_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.nt"
    bad.write_bytes(b"<a> <b> <c> .\n<a> <b>\n")
    assert main(["query", "--data", str(bad), "--inline", QUERY_Q]) == 1
    assert "line 2" in capsys.readouterr().err


def test_missing_file_exit_1(tmp_path, capsys):
    assert main(["query", "--data", str(tmp_path / "nope.nt"), "--inline", QUERY_Q]) == 1


def test_workers_env_default(fixture_file, capsys, monkeypatch):
    monkeypatch.setenv("MAPSQ_WORKERS", "3")
    assert main(["query", "--data", str(fixture_file), "--inline", QUERY_Q]) == 0
    monkeypatch.setenv("MAPSQ_WORKERS", "0")
    assert main(["query", "--data", str(fixture_file), "--inline", QUERY_Q]) == 1


def test_bench_fixture(fixture_file, tmp_path, capsys):
    qfile = tmp_path / "q.rq"
    qfile.write_text(QUERY_Q)
    assert main(["bench", "--data", str(fixture_file), "--queries", str(qfile), "--reps", "3",
                 "--workers", "2"]) == 0
    out = capsys.readouterr().out
    lines = [l for l in out.splitlines() if l.startswith("query=")]
    assert len(lines) == 2
    fields = dict(kv.split("=") for kv in lines[0].split(","))
    assert fields["engine"] == "mr" and fields["rows"] == "2" and fields["workers"] == "2"
    assert float(fields["speedup"]) > 0
    assert dict(kv.split("=") for kv in lines[1].split(","))["engine"] == "nested"


def test_bench_reps_zero_is_usage_error(fixture_file, capsys):
    with pytest.raises(SystemExit) as info:
        main(["bench", "--data", str(fixture_file), "--reps", "0"])
    assert info.value.code == 1


def test_bench_disagreement_exit_2(fixture_file, tmp_path, capsys, monkeypatch):
    from mapsq import planner
    from mapsq.table import BindingTable

    def broken(a, b):
        out = planner.mr_join(a, b)
        return BindingTable(out.schema, out.data[:-1])

    monkeypatch.setitem(planner.JOINS, "nested", lambda a, b, w: broken(a, b))
    qfile = tmp_path / "q.rq"
    qfile.write_text(QUERY_Q)
    assert main(["bench", "--data", str(fixture_file), "--queries", str(qfile)]) == 2
    captured = capsys.readouterr()
    assert "disagree" in captured.err
    assert "join_ms" not in captured.out


def test_bench_report_speedup_positive():
    r = BenchReport("q", 1, 0, 0.1, 0.0, 0.1, 0.1, 0.0, 0.1)
    assert r.speedup == 1.0
    r = BenchReport("q", 4, 5, 1.0, 2.0, 3.0, 1.0, 8.0, 9.0)
    assert r.speedup == 4.0


def test_generate_command(tmp_path):
    out = tmp_path / "g.nt"
    assert main(["generate", "--universities", "1", "--seed", "42", "--out", str(out)]) == 0
    assert load_ntriples_file(out).count > 0


def test_generate_unwritable(tmp_path):
    assert main(["generate", "--universities", "1", "--out", str(tmp_path / "no" / "dir.nt")]) == 1


def test_bundled_queries_run_on_generated_data(tmp_path):
    path = tmp_path / "u1.nt"
    generate(GenConfig(1, 7, path))
    store = load_ntriples_file(path)
    paths = bundled_queries()
    assert [p.stem for p in paths] == ["q1", "q2", "q3", "q4", "q5"]
    for p in paths:
        report = bench_query(store, p.stem, parse_query(p.read_text()), workers=2, reps=1)
        assert report.rows > 0, p.stem


def test_module_entry_point(fixture_file):
    proc = subprocess.run([sys.executable, "-m", "mapsq", "query", "--data", str(fixture_file),
                           "--inline", QUERY_Q], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.split() == ["?person", "Jim", "Susan"]
    proc = subprocess.run([sys.executable, "-m", "mapsq", "query"], capture_output=True, text=True)
    assert proc.returncode == 1
