import csv
import io
import json
import re

import pytest

from rectblanket.bench import BenchError, percentage_deviation, run_bench
from rectblanket.cli import main
from rectblanket.geometry import Rect, validate_blanket
from rectblanket.pbm import dump_pbm
from rectblanket.shapes import gen_shape


def _solve(tmp_path, *args):
    out = tmp_path / "out.json"
    rc = main(["solve", *args, "--out", str(out)])
    return rc, (json.loads(out.read_text()) if out.exists() else None)


def test_solve_plus_bp(tmp_path):
    svg, trace = tmp_path / "p.svg", tmp_path / "p.csv"
    rc, doc = _solve(tmp_path, "--gen", "plus:3x3", "--k", "3", "--method", "bp",
                     "--svg", str(svg), "--trace", str(trace))
    assert rc == 0
    assert doc["objective"] == 0 and doc["status"] == "optimal"
    assert list(doc) == ["width", "height", "area", "k", "method", "status", "objective",
                         "lower_bound", "rects", "stats"]
    rects = [Rect(r["left"], r["right"], r["top"], r["bottom"]) for r in doc["rects"]]
    assert validate_blanket(rects, 3).ok
    assert len(re.findall(r"<rect\b", svg.read_text())) == len(rects)
    rows = list(csv.DictReader(io.StringIO(trace.read_text())))
    assert rows and {"iteration", "z_rlpm", "lb", "added", "misprice"} <= set(rows[0])


def test_solve_sf_and_input(tmp_path):
    rc, doc = _solve(tmp_path, "--gen", "solid:2x2", "--k", "1", "--method", "sf")
    assert rc == 0 and doc["objective"] == 0 and doc["lower_bound"] is None
    pbm = tmp_path / "img.pbm"
    pbm.write_bytes(dump_pbm(gen_shape("plus", 5, 5), "P4"))
    for method in ("bp", "sf", "fast", "csa"):
        rc, doc = _solve(tmp_path, "--input", str(pbm), "--k", "2", "--method", method)
        assert rc == 0 and doc["width"] == 5 and doc["area"] == 9
        rects = [Rect(r["left"], r["right"], r["top"], r["bottom"]) for r in doc["rects"]]
        assert validate_blanket(rects, 2).ok


@pytest.mark.parametrize("args", [
    ["--gen", "plus:3x3", "--k", "-1"],
    ["--gen", "plus:3x3", "--input", "x.pbm", "--k", "1"],
    ["--gen", "plus:3x3", "--k", "1", "--method", "lp"],
    ["--gen", "blob:3x3", "--k", "1"],
    ["--input", "/nonexistent/file.pbm", "--k", "1"],
])
def test_usage_errors(tmp_path, args, capsys):
    try:
        rc = main(["solve", *args])
    except SystemExit as exc:  # argparse
        rc = exc.code
    assert rc == 2


def test_bad_pbm_is_usage_error(tmp_path):
    p = tmp_path / "bad.pbm"
    p.write_bytes(b"P5\n1 1\n255\n\x00")
    assert main(["solve", "--input", str(p), "--k", "1"]) == 2


def test_json_deterministic(tmp_path):
    for method in ("bp", "sf", "fast", "csa"):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            assert main(["solve", "--gen", "random:7x6:3:0.5", "--k", "3", "--method", method,
                         "--seed", "5", "--out", str(path)]) == 0
        assert a.read_bytes() == b.read_bytes()


def test_pd_convention():
    assert percentage_deviation(12, 10) == "20.00"
    assert percentage_deviation(10, 10) == "0.00"
    assert percentage_deviation(70, 0) == "(70)"


def test_bench_small(tmp_path):
    suite = [("plus", gen_shape("plus", 5, 5)), ("rand", gen_shape("random", 6, 6, seed=1))]
    rows = run_bench(suite, [1, 2], ["bp", "sf", "fast", "csa"])
    assert len(rows) == 16
    assert [(r.instance, r.k, r.method) for r in rows][:4] == [("plus", 1, m) for m in ("bp", "sf", "fast", "csa")]
    for r in rows:
        if r.method == "bp":
            assert r.pd == "" and r.status == "optimal"
        else:
            assert r.pd.startswith("(") or float(r.pd) >= 0
    with pytest.raises(BenchError):
        run_bench(suite, [1], ["sf"])
    with pytest.raises(BenchError):
        run_bench(suite, [1], [])
    assert len(run_bench(suite, [1], ["sf"], with_pd=False)) == 2


def test_bench_cli(tmp_path):
    d = tmp_path / "suite"
    d.mkdir()
    (d / "a.pbm").write_bytes(dump_pbm(gen_shape("staircase", 4, 4)))
    out = tmp_path / "b.csv"
    assert main(["bench", "--suite", str(d), "--k", "1,2", "--methods", "bp,fast", "--csv", str(out)]) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert len(rows) == 4 and rows[0]["instance"] == "a"
    assert main(["bench", "--suite", str(d), "--k", "1", "--methods", "fast"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["bench", "--methods", ""])
    assert exc.value.code == 2


def test_bench_parallel_order():
    suite = [("plus", gen_shape("plus", 4, 4)), ("stair", gen_shape("staircase", 4, 3))]
    serial = run_bench(suite, [1, 2], ["bp", "sf"])
    para = run_bench(suite, [1, 2], ["bp", "sf"], jobs=2)
    key = lambda rows: [(r.instance, r.k, r.method, r.objective, r.pd) for r in rows]
    assert key(serial) == key(para)
