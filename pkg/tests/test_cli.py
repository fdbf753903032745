import io
import subprocess
import sys

import pytest

from rangekit.cli import bench_rows, golden_cases, main, run_golden


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


@pytest.mark.parametrize("name, argv, want, case", list(golden_cases()), ids=lambda v: v if isinstance(v, str) else "")
def test_golden(name, argv, want, case):
    assert run_golden(argv, case) == (0, want)


def test_every_subcommand_has_a_golden_case():
    from rangekit.cli import COMMANDS
    covered = {name.split("/")[0] for name, *_ in golden_cases()}
    assert covered >= set(COMMANDS) - {"selftest"}


def test_cube_query_example(tmp_path):
    cube = write(tmp_path, "c", "2 2 2\n1 2\n3 4\n")
    q = write(tmp_path, "q", "2 2 2 2\n")
    assert run(["cube-query", "--agg", "sum", "--input", cube, "--queries", q])[:2] == (0, "4\n")
    assert run(["cube-query", "--input", cube, "--queries", q, "--format", "csv"])[1] == "answer\n4\n"


def test_rotstack_example(tmp_path):
    s = write(tmp_path, "s", "3 3\nP 1\nP 2\nP 3\nROT\n")
    assert run(["rotstack", "--input", s])[:2] == (0, "3 2 1\n")


def test_exit_codes(tmp_path):
    assert run(["frobnicate"])[0] == 2
    assert run(["cube-query", "--nope"])[0] == 2
    code, _, err = run(["cube-query", "--input", str(tmp_path / "missing"), "--queries", "x"])
    assert code == 1 and "cannot read" in err
    cube = write(tmp_path, "c", "1 2\n1 2\n")
    q = write(tmp_path, "q", "1 2\n3 3\n2 2\n")
    code, out, err = run(["cube-query", "--input", cube, "--queries", q])
    assert code == 1 and out == "3\n2\n" and "query line 2" in err
    code, _, err = run(["cube-query", "--agg", "median", "--input", cube, "--queries", q])
    assert code == 1 and "unknown aggregate" in err


def test_selftest_deterministic():
    a = run(["selftest", "--seed", "3"])
    b = run(["selftest", "--seed", "3"])
    assert a[0] == 0 and a == b


def test_bench(tmp_path):
    assert run(["bench"])[1] == "case,n,d,param,ops,fast_counter,oracle_counter,fast_ms,oracle_ms,ratio,answer_hash\n"
    rows = bench_rows(["seqedit 64 1 1 50", "seqedit 64 1 8 50", "seqedit 64 1 50 50"], 0)
    assert len({r[-1] for r in rows}) == 1
    rows = bench_rows([f"rtree-query {n} 2 0 50" for n in (128, 256, 512, 1024)], 0)
    per_query = [r[5] / r[4] for r in rows]
    assert per_query[-1] <= 4 * 11 ** 2
    cfg = write(tmp_path, "cfg", "rtree-query 100000 2 0 1\n")
    assert run(["bench", "--input", cfg])[0] == 1


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "rangekit.cli", "selftest"], capture_output=True, text=True)
    assert r.returncode == 0 and "FAIL" not in r.stdout
