import io
import json
import subprocess
import sys

import pytest

from efxo import Orientation, parse_instance, parse_orientation, verify_efx
from efxo.cli import (
    EXIT_INDETERMINATE,
    EXIT_INPUT,
    EXIT_NO,
    EXIT_USAGE,
    EXIT_VERIFY,
    EXIT_YES,
    RunConfig,
    UsageError,
    export_dot,
    run,
)

TINY = "p efx 2 1\n0 1 1\n"
TRIANGLE = "p efx 3 3\n0 1 1\n1 2 1\n0 2 1\n"
CROSSED = "p efx 4 6\n0 1 1\n2 3 1\n0 2 0\n0 3 0\n1 2 0\n1 3 0\n"
MIXED_CNF = "p cnf 4 3\n1 2 -3 0\n3 -4 3 0\n-2 -3 4 0\n"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    for name, text in [("tiny.efx", TINY), ("tri.efx", TRIANGLE), ("crossed.efx", CROSSED)]:
        (tmp_path / name).write_text(text)
    return tmp_path


# --- solve -----------------------------------------------------------------------


def test_solve_tiny(files):
    code, out, _ = call("solve", files / "tiny.efx")
    assert code == EXIT_YES and out.startswith("RESULT yes strategy=")


def test_solve_no_and_emit(files):
    code, out, _ = call("solve", files / "crossed.efx", "--no-timing")
    assert code == EXIT_NO and out == "RESULT no strategy=2-SAT time_ms=0\n"
    code, out, _ = call("solve", files / "tri.efx", "--emit-orientation", files / "tri.orient")
    assert code == EXIT_YES
    inst = parse_instance(TRIANGLE)
    assert verify_efx(inst, parse_orientation((files / "tri.orient").read_text(), inst)).ok


def test_solve_indeterminate(tmp_path):
    edges = [(a, b) for a in range(6) for b in range(a + 1, 6)]
    text = f"p efx 6 {len(edges)}\n" + "".join(f"{a} {b} 1/3\n" for a, b in edges)
    (tmp_path / "big.efx").write_text(text)
    code, out, _ = call("solve", tmp_path / "big.efx", "--orientation-cap", 10, "--no-timing")
    assert code == EXIT_INDETERMINATE and out.startswith("RESULT indeterminate")


@pytest.mark.parametrize("strategy", ["auto", "2sat", "param", "bforce"])
def test_solve_strategies(files, strategy):
    code, out, _ = call("solve", files / "crossed.efx", "--strategy", strategy)
    assert code == EXIT_NO


def test_solve_batch_and_jobs(files):
    c1, o1, _ = call("solve", files, "--no-timing", "--jobs", 1)
    c4, o4, _ = call("solve", files, "--no-timing", "--jobs", 4)
    assert o1 == o4 and c1 == c4 == EXIT_NO
    lines = o1.splitlines()
    assert [line.rsplit("file=", 1)[1] for line in lines] == ["crossed.efx", "tiny.efx", "tri.efx"]


def test_solve_batch_emits_directory(files):
    code, _, _ = call("solve", files, "--emit-orientation", files / "out")
    assert sorted(p.name for p in (files / "out").iterdir()) == ["tiny.orient", "tri.orient"]


# --- verify -------------------------------------------------------------------------


def test_verify_ok_and_fail(tmp_path):
    (tmp_path / "p3.efx").write_text("p efx 3 2\n0 1 1\n1 2 1\n")
    (tmp_path / "good.orient").write_text("0 1 -> 1\n1 2 -> 2\n")
    (tmp_path / "bad.orient").write_text("0 1 -> 1\n1 2 -> 1\n")
    code, out, _ = call("verify", tmp_path / "p3.efx", tmp_path / "good.orient")
    assert code == EXIT_YES and out == "OK\n"
    code, out, _ = call("verify", tmp_path / "p3.efx", tmp_path / "bad.orient")
    assert code == EXIT_VERIFY
    assert out == "FAIL 2 witnesses\nenvy 0 1 drop 1 2\nenvy 2 1 drop 0 1\n"


def test_verify_malformed_orientation(tmp_path):
    (tmp_path / "p3.efx").write_text("p efx 3 2\n0 1 1\n1 2 1\n")
    (tmp_path / "x.orient").write_text("0 1 -> 1\n")
    code, _, err = call("verify", tmp_path / "p3.efx", tmp_path / "x.orient")
    assert code == EXIT_INPUT and "unoriented" in err


# --- preprocess --------------------------------------------------------------------------


def test_preprocess_with_trace(tmp_path):
    (tmp_path / "s.efx").write_text("p efx 5 4\n0 1 1\n0 2 1\n0 3 1\n3 4 0\n")
    code, out, _ = call(
        "preprocess", tmp_path / "s.efx", "--out", tmp_path / "r.efx", "--emit-trace", tmp_path / "t"
    )
    assert code == EXIT_YES and out == ""
    assert parse_instance((tmp_path / "r.efx").read_text()).n == 3
    assert (tmp_path / "t").read_text().startswith("trace 5 ")


def test_preprocess_zero_degrees(tmp_path):
    (tmp_path / "z.efx").write_text("p efx 3 2\n0 1 0\n0 2 0\n")
    code, out, _ = call("preprocess", tmp_path / "z.efx", "--zero-degrees")
    assert code == EXIT_YES
    red = parse_instance(out)
    assert all(len(red.zero_neighbors(v)) <= 1 for v in range(red.n))


def test_preprocess_non_binary_is_input_error(tmp_path):
    (tmp_path / "f.efx").write_text("p efx 2 1\n0 1 1/2\n")
    assert call("preprocess", tmp_path / "f.efx")[0] == EXIT_INPUT


# --- generators and extraction -------------------------------------------------------------


def test_gen_random_deterministic():
    a = call("gen", "random", "--kind", "tree_core", "--size", 9, "--seed", 7)
    b = call("gen", "random", "--kind", "tree_core", "--size", 9, "--seed", 7)
    assert a == b and a[0] == EXIT_YES
    assert parse_instance(a[1]).n == 9


def test_gen_sat_and_extract(tmp_path):
    (tmp_path / "f.cnf").write_text(MIXED_CNF)
    assert call("gen", "sat", "--cnf", tmp_path / "f.cnf")[0] == EXIT_INPUT  # mixed polarity
    for extra in ([], ["--low-degree"]):
        code, _, _ = call(
            "gen", "sat", "--cnf", tmp_path / "f.cnf", "--allow-mixed", *extra,
            "--out", tmp_path / "f.efx", "--mapping", tmp_path / "f.map",
        )
        assert code == EXIT_YES
        assert call("solve", tmp_path / "f.efx", "--emit-orientation", tmp_path / "f.o")[0] == 0
        code, out, _ = call("extract", "--mapping", tmp_path / "f.map", "--orientation", tmp_path / "f.o")
        assert code == EXIT_YES and out.startswith("x1=")
        bits = [tok.split("=")[1] == "1" for tok in out.split()]
        clauses = [(1, 2, -3), (3, -4, 3), (-2, -3, 4)]
        assert all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses)


@pytest.mark.parametrize("extra", [["--gadget", "1"], ["--gadget", "2"], ["--cores", "path:5"]])
def test_gen_mis_and_extract(tmp_path, extra):
    (tmp_path / "g").write_text("p mis 3 1\n0 2\n")
    (tmp_path / "c").write_text("0 1\n2\n")
    code, _, _ = call(
        "gen", "mis", "--graph", tmp_path / "g", "--colors", tmp_path / "c", *extra,
        "--out", tmp_path / "m.efx", "--mapping", tmp_path / "m.map",
    )
    assert code == EXIT_YES
    assert call("solve", tmp_path / "m.efx", "--emit-orientation", tmp_path / "m.o")[0] == 0
    code, out, _ = call("extract", "--mapping", tmp_path / "m.map", "--orientation", tmp_path / "m.o")
    assert code == EXIT_YES and out == "MIS 1 2\n"


def test_gen_mis_bad_inputs(tmp_path):
    (tmp_path / "g").write_text("p mis 3 1\n0 2\n")
    (tmp_path / "c").write_text("0 1\n")
    args = ["gen", "mis", "--graph", tmp_path / "g", "--colors", tmp_path / "c"]
    assert call(*args)[0] == EXIT_INPUT
    (tmp_path / "c").write_text("0 1\n2\n")
    assert call(*args, "--gadget", "frac:3/2")[0] == EXIT_INPUT
    assert call(*args, "--cores", "blob:3")[0] == EXIT_USAGE


# --- stats and dot --------------------------------------------------------------------------


def test_stats_fields(files):
    code, out, _ = call("stats", files / "crossed.efx")
    assert code == EXIT_YES
    info = json.loads(out)
    for key in ("n", "m", "ones", "zeros", "components", "core_sizes", "states_per_tree", "uncut_class"):
        assert key in info
    assert (info["n"], info["m"], info["ones"], info["zeros"]) == (4, 6, 2, 4)
    assert info["states_per_tree"] == [2, 2] and info["uncut_class"] == "more-than-one"


def test_stats_structure(tmp_path):
    (tmp_path / "p5.efx").write_text("p efx 5 4\n0 1 1\n1 2 1\n2 3 1\n3 4 1\n")
    info = json.loads(call("stats", tmp_path / "p5.efx", "--structure")[1])
    (core,) = info["cores"]
    assert core["size"] == 5 and core["mim"] == 2 and core["max_leafed_split"] == 4
    assert core["mim_bounds_ok"] is True and core["split_bounds_ok"] is True


def test_export_dot_examples(files):
    inst = parse_instance(TINY)
    text = export_dot(inst)
    assert text.startswith("graph efx {") and text.count("--") == 1 and "penwidth=3" in text
    tri = parse_instance(TRIANGLE)
    o = Orientation.from_map(tri, {(0, 1): 1, (1, 2): 2, (2, 0): 0})
    dot = export_dot(tri, o)
    assert dot.startswith("digraph") and {"0 -> 1", "1 -> 2", "2 -> 0"} <= {
        line.strip().split(" [")[0] for line in dot.splitlines()
    }
    assert export_dot(tri, o) == dot
    zero = export_dot(parse_instance("p efx 2 1\n0 1 0\n"))
    assert "dashed" in zero


def test_export_dot_cli(files):
    call("solve", files / "tri.efx", "--emit-orientation", files / "tri.o")
    code, out, _ = call("export-dot", files / "tri.efx", "--orientation", files / "tri.o")
    assert code == EXIT_YES and out.count("->") == 3


# --- errors ------------------------------------------------------------------------------


def test_usage_errors():
    assert call()[0] == EXIT_USAGE
    assert call("bogus")[0] == EXIT_USAGE
    assert call("solve")[0] == EXIT_USAGE
    assert call("gen")[0] == EXIT_USAGE
    assert call("solve", "x.efx", "--strategy", "magic")[0] == EXIT_USAGE
    assert call("solve", "x.efx", "--tau", 0)[0] == EXIT_USAGE


def test_input_errors(tmp_path):
    assert call("solve", tmp_path / "missing.efx")[0] == EXIT_INPUT
    (tmp_path / "bad.efx").write_text("p efx 2 1\n0 0 1\n")
    code, _, err = call("solve", tmp_path / "bad.efx")
    assert code == EXIT_INPUT and "self-loop" in err


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig("solve", tau=0)
    with pytest.raises(UsageError):
        RunConfig("solve", strategy="x")


def test_console_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "efxo.cli", "solve", str(files / "tiny.efx"), "--no-timing"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "RESULT yes strategy=near-bipartite time_ms=0\n"
