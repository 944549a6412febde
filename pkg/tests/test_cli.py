"""CLI behaviors: caching, exit codes, output determinism."""

import json

import pytest

from merge_lab.cli import main


@pytest.fixture()
def cache(tmp_path, monkeypatch):
    cachedir = tmp_path / "cache"
    monkeypatch.setenv("MERGE_LAB_CACHE", str(cachedir))
    return cachedir


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_tables_build_and_cache_hit(cache, capsys):
    rc, out, err = run(capsys, "tables", "--max-m", "6", "--max-n", "6")
    assert rc == 0 and out == "table 6x6 ready\n"
    assert (cache / "table-6x6.csv").is_file()
    rc, out, err = run(capsys, "tables", "--max-m", "6", "--max-n", "6")
    assert rc == 0 and "cache hit" in err


def test_tables_naive_equals_accelerated(cache, tmp_path, capsys):
    fast = tmp_path / "fast.csv"
    slow = tmp_path / "slow.csv"
    assert run(capsys, "tables", "--max-m", "5", "--max-n", "5", "--out", str(fast))[0] == 0
    assert run(capsys, "tables", "--max-m", "5", "--max-n", "5", "--naive", "--out", str(slow))[0] == 0
    assert fast.read_bytes() == slow.read_bytes()


def test_value_queries(cache, capsys):
    run(capsys, "tables", "--max-m", "6", "--max-n", "6")
    rc, out, _ = run(capsys, "value", "--left", "dot", "--right", "dot", "-m", "1", "-n", "1")
    assert rc == 0 and out == "1\n"
    rc, out, _ = run(capsys, "value", "--left", "bs", "--right", "fs", "-m", "1", "-n", "3")
    assert rc == 0 and out == "invalid\n"
    rc, out, _ = run(capsys, "value", "--left", "dot", "--right", "dot", "-m", "4", "-n", "6")
    assert rc == 0 and out == "9\n"


def test_value_without_coverage(cache, capsys):
    rc, out, err = run(capsys, "value", "--left", "dot", "--right", "dot", "-m", "9", "-n", "9")
    assert rc == 3 and "tables" in err


def test_exact_and_dump_cache(cache, tmp_path, capsys):
    rc, out, _ = run(capsys, "exact", "-m", "2", "-n", "2")
    assert rc == 0 and out == "3\n"
    dump = tmp_path / "s.json"
    rc, out, _ = run(capsys, "exact", "-m", "2", "-n", "2", "--dump", str(dump))
    assert rc == 0
    data = json.loads(dump.read_text())
    assert data["value"] == 3 and data["moves"]
    assert (cache / "solve-2x2.json").is_file()
    # cached value is reused
    rc, out, _ = run(capsys, "exact", "-m", "2", "-n", "2")
    assert rc == 0 and out == "3\n"


def test_exact_budget_unknown(cache, capsys):
    rc, out, _ = run(capsys, "exact", "-m", "5", "-n", "8", "--budget", "3")
    assert rc == 3 and out == "UNKNOWN(budget)\n"


def test_measure_commands(cache, capsys):
    rc, out, _ = run(capsys, "measure", "--alg", "tape", "-m", "3", "-n", "3")
    assert rc == 0 and "worst=5" in out and "correct=true" in out
    rc, out, _ = run(capsys, "measure", "--alg", "binary-insertion", "-m", "1", "-n", "7")
    assert rc == 0 and "worst=3" in out
    rc, _, err = run(capsys, "measure", "--alg", "binary-insertion", "-m", "2", "-n", "3")
    assert rc == 2
    rc, out, _ = run(capsys, "measure", "--alg", "optimal", "-m", "2", "-n", "4")
    assert rc == 0 and "worst=5" in out


def test_bounds_output(cache, capsys):
    rc, out, _ = run(capsys, "bounds", "-m", "10", "-n", "20")
    lines = out.splitlines()
    assert rc == 0
    assert lines[0] == "info 25"
    assert "upper 27 via=thm-6.4" in lines
    run(capsys, "tables", "--max-m", "6", "--max-n", "6")
    rc, out, _ = run(capsys, "bounds", "-m", "5", "-n", "6")
    assert "adversary 10" in out


def test_verify_suite(cache, capsys):
    run(capsys, "tables", "--max-m", "6", "--max-n", "6")
    rc, out, _ = run(capsys, "verify", "--suite", "thm-1.1", "--max-size", "6")
    assert rc == 0 and out.startswith("PASS thm-1.1")
    rc, _, err = run(capsys, "verify", "--suite", "nope", "--max-size", "6")
    assert rc == 2
    rc, _, err = run(capsys, "verify", "--suite", "thm-1.1", "--max-size", "9")
    assert rc == 3


def test_verify_report_deterministic(cache, tmp_path, capsys):
    run(capsys, "tables", "--max-m", "6", "--max-n", "6")
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    suite = "lemma-3.2"
    assert run(capsys, "verify", "--suite", suite, "--max-size", "6", "--report", str(r1))[0] == 0
    assert run(capsys, "verify", "--suite", suite, "--max-size", "6", "--report", str(r2))[0] == 0
    assert r1.read_bytes() == r2.read_bytes()


def test_corrupt_cache_ignored(cache, capsys):
    run(capsys, "tables", "--max-m", "5", "--max-n", "5")
    path = cache / "table-5x5.csv"
    path.write_bytes(path.read_bytes().replace(b"dot,dot,1,1,1", b"dot,dot,1,1,2"))
    rc, out, err = run(capsys, "value", "--left", "dot", "--right", "dot", "-m", "1", "-n", "1")
    assert rc == 3 and "ignoring corrupt cache" in err
