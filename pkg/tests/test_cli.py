import json
import math

import pytest

from qfb.bench import FIELDS, read_csv
from qfb.cli import EXIT_INPUT, EXIT_LIMIT, EXIT_MISMATCH, main
from qfb.circuits import grover_iterations


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_build_qft3_pairwise(capsys):
    code, out, _ = run(capsys, "build", "qft:3", "--strategy", "pairwise")
    assert code == 0
    rec = json.loads(out)
    assert list(rec) == FIELDS
    assert rec["m"] == 6 and rec["final_nodes"] == 7 and rec["status"] == "ok"


def test_build_qft1_sequential(capsys):
    code, out, _ = run(capsys, "build", "qft:1", "-s", "sequential")
    assert code == 0 and json.loads(out)["multiplications"] == 0


def test_build_grover4_repeated(capsys):
    code, out, _ = run(capsys, "build", "grover:4", "--strategy", "repeated")
    assert code == 0 and json.loads(out)["multiplications"] == 3


def test_build_dumps(capsys):
    code, out, _ = run(capsys, "build", "qft:2", "--dump-dd", "--dump-matrix")
    assert code == 0
    lines = out.splitlines()
    dd = json.loads(lines[1])
    assert len(dd["nodes"]) == 3
    assert "0.5" in out


def test_build_timeout(capsys):
    code, out, err = run(capsys, "build", "qft:16", "-s", "sequential", "--timeout", "0.001")
    assert code == EXIT_LIMIT
    assert json.loads(out)["status"] == "timeout"
    assert "timeout" in err


def test_build_unknown_strategy(capsys):
    with pytest.raises(SystemExit) as info:
        main(["build", "qft:3", "-s", "magic"])
    assert info.value.code == 2


def test_build_repeated_on_qft(capsys):
    code, _, err = run(capsys, "build", "qft:3", "-s", "repeated")
    assert code == EXIT_INPUT and "repeated" in err


@pytest.mark.parametrize("source", ["qft:5", "grover:3", "grover:2:01"])
def test_verify_ok(capsys, source):
    code, out, _ = run(capsys, "verify", source)
    assert code == 0 and out.startswith("ok:")


def test_verify_qasm(capsys, tmp_path):
    f = tmp_path / "c.qasm"
    f.write_text("OPENQASM 2.0;\nqreg q[3];\nh q[0];\nccx q[0],q[1],q[2];\nswap q[0],q[2];\nrx(pi/3) q[1];\n")
    code, _, _ = run(capsys, "verify", str(f))
    assert code == 0


def test_verify_corrupt_file(capsys, tmp_path):
    f = tmp_path / "bad.qasm"
    f.write_text("qreg q[2];\nh q[0];\nfrobnicate q[1];\n")
    code, _, err = run(capsys, "verify", str(f))
    assert code == EXIT_INPUT
    assert "line 3" in err and "frobnicate" in err


def test_verify_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "verify", str(tmp_path / "nope.qasm"))
    assert code == EXIT_INPUT and err


def test_verify_reports_mismatch(capsys, monkeypatch):
    import qfb.cli

    real = qfb.cli.build

    def skewed(pkg, source, strategy, **kw):
        e, st = real(pkg, source, strategy, **kw)
        if strategy == "pairwise":
            e = (e[0], pkg.ctable.lookup(-e[1]))
        return e, st

    monkeypatch.setattr(qfb.cli, "build", skewed)
    code, _, err = run(capsys, "verify", "qft:3")
    assert code == EXIT_MISMATCH
    assert "sequential and pairwise" in err


def test_bench_qft(capsys, tmp_path):
    out_path = tmp_path / "qft.csv"
    code, out, _ = run(capsys, "bench", "qft", "--min", "4", "--max", "12",
                       "--strategies", "sequential,pairwise", "--output", str(out_path))
    assert code == 0
    recs = read_csv(out_path)
    assert len(recs) == 18
    assert all(r.status == "ok" for r in recs)
    assert "qft:12" in out


def test_bench_grover_repeated(capsys, tmp_path):
    out_path = tmp_path / "g.json"
    code, _, _ = run(capsys, "bench", "grover", "--min", "8", "--max", "12",
                     "--strategies", "repeated", "--output", str(out_path))
    assert code == 0
    recs = json.loads(out_path.read_text())
    assert len(recs) == 5
    for rec in recs:
        d = rec["n"] - 1
        reps = grover_iterations(d)
        assert rec["status"] == "ok"
        assert rec["multiplications"] <= 2 * int(math.log2(reps)) + 1


def test_bench_forced_timeout(capsys, tmp_path):
    out_path = tmp_path / "t.csv"
    code, _, _ = run(capsys, "bench", "qft", "--min", "16", "--max", "16", "--timeout", "0.001",
                     "--output", str(out_path))
    assert code == 0
    recs = read_csv(out_path)
    assert [r.status for r in recs] == ["timeout", "timeout"]
    assert all(r.final_nodes is None for r in recs)


def test_bench_unwritable_output(capsys, tmp_path):
    code, _, err = run(capsys, "bench", "qft", "--min", "2", "--max", "2",
                       "--output", str(tmp_path / "missing" / "x.csv"))
    assert code == EXIT_INPUT and "cannot write" in err
