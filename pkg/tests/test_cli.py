import io
import json
import subprocess
import sys

from decparse import cli
from decparse.pow5_table import parse_dump


def run(capsys, *argv):
    status = cli.main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_parse_paper_example(capsys):
    status, out, _ = run(capsys, "parse", "--", "-3.14E+12")
    assert status == 0
    assert "sign=- w=314 q=10" in out
    assert "f64=0xC286D8B4AD400000" in out and "check_fired=false" in out


def test_parse_simple(capsys):
    status, out, _ = run(capsys, "parse", "1.5")
    assert status == 0
    assert "0x3FF8000000000000" in out and "check_fired=false" in out
    assert "f32=0x3FC00000" in out


def test_parse_error(capsys):
    status, out, err = run(capsys, "parse", "abc")
    assert status == 1 and "offset 0" in err and out == ""


def test_parse_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("1e-343\n0\n\n12345678901234567890\n"))
    status, out, _ = run(capsys, "parse")
    lines = out.splitlines()
    assert status == 0 and len(lines) == 3
    assert "f64=0x0000000000000000" in lines[0]
    assert "zero" in lines[1]
    assert "truncated=true" in lines[2]


def test_verify_f64(capsys):
    status, out, _ = run(capsys, "verify", "--target", "f64")
    assert status == 0 and "651/651 clear, k=137" in out


def test_verify_f32(capsys):
    status, out, _ = run(capsys, "verify", "--target", "f32")
    assert status == 0 and "k=166" in out


def test_verify_both_json(capsys, tmp_path):
    path = tmp_path / "out.json"
    status, _, _ = run(capsys, "verify", "--target", "both", "--json", str(path))
    doc = json.loads(path.read_text())
    assert status == 0
    assert doc["binary64"]["all_clear"] and doc["binary32"]["all_clear"]
    assert len(doc["binary32"]["entries"]) == 651


def test_verify_witness_exits_2(capsys, monkeypatch):
    from decparse.pow5_table import EMBEDDED, PowerTable

    values = list(EMBEDDED.values)
    values[342] = (1 << 128) - (1 << 55)
    monkeypatch.setattr(cli, "EMBEDDED", PowerTable(values))
    status, out, _ = run(capsys, "verify", "--target", "f64")
    assert status == 2 and "WITNESS q=0" in out


def test_dump_table(capsys, tmp_path):
    status, out, _ = run(capsys, "dump-table")
    lines = out.splitlines()
    assert status == 0 and len(lines) == 651
    assert "0\t80000000000000000000000000000000" in lines
    assert "1\tA0000000000000000000000000000000" in lines
    path = tmp_path / "t.txt"
    assert run(capsys, "dump-table", "--out", str(path))[0] == 0
    assert parse_dump(path.read_text()) == parse_dump(out)


def test_dump_table_integrity_failure(capsys, monkeypatch):
    from decparse.pow5_table import EMBEDDED, PowerTable

    values = list(EMBEDDED.values)
    values[0] ^= 1
    monkeypatch.setattr(cli, "EMBEDDED", PowerTable(values))
    status, _, err = run(capsys, "dump-table")
    assert status == 4 and "q=[-342]" in err


def test_difftest_small(capsys):
    status, out, _ = run(capsys, "difftest", "--count", "2000", "--seed", "42", "--jobs", "1")
    assert status == 0 and "0 mismatches" in out


def test_difftest_mismatch_exit(capsys, monkeypatch):
    from decparse import difftest

    real = difftest.exact_parse_bits
    monkeypatch.setattr(difftest, "exact_parse_bits",
                        lambda text, fmt: real(text, fmt) ^ (text == "1.5"))
    status, out, _ = run(capsys, "difftest", "--count", "10", "--jobs", "1")
    assert status == 3 and "MISMATCH" in out and "'1.5'" in out


def test_difftest_extra_corpus(capsys, tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("1.5\n2e-320\n")
    assert run(capsys, "difftest", "--count", "1", "--corpus", str(path), "--jobs", "1")[0] == 0
    assert run(capsys, "difftest", "--count", "1", "--corpus", str(tmp_path / "nope"))[0] == 1
    assert run(capsys, "difftest", "--count", "0")[0] == 1


def test_bench_repeated_value(capsys, tmp_path):
    path = tmp_path / "ones.txt"
    path.write_text("1.5\n" * 100_000)
    status, out, _ = run(capsys, "bench", str(path), "--variant", "no_check,with_check,oracle", "--reps", "3")
    assert status == 0
    assert "no_check" in out and "with_check" in out and "oracle" in out


def test_bench_errors(capsys, tmp_path):
    assert run(capsys, "bench", "missing.txt")[0] == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("1.5\nnope\n")
    assert run(capsys, "bench", str(bad))[0] == 1
    good = tmp_path / "good.txt"
    good.write_text("1.5\n")
    assert run(capsys, "bench", str(good), "--reps", "2")[0] == 1
    assert run(capsys, "bench", str(good), "--variant", "fastest")[0] == 1


def test_bench_refuses_on_disagreement(capsys, tmp_path, monkeypatch):
    from decparse import bench

    monkeypatch.setitem(bench._RUNNERS, "oracle", lambda lines, fmt: [0] * len(lines))
    path = tmp_path / "d.txt"
    path.write_text("1.5\n2.5\n")
    status, out, err = run(capsys, "bench", str(path), "--variant", "no_check,oracle", "--reps", "3")
    assert status == 3 and "no timings" in err and out == ""


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "decparse", "parse", "0.1"], capture_output=True, text=True)
    assert proc.returncode == 0 and "0x3FB999999999999A" in proc.stdout
