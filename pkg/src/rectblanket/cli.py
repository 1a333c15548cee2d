"""Command line: ``rectblanket solve`` and ``rectblanket bench``.

Exit codes: 0 success, 1 solver failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import DEFAULT_KS, BenchError, builtin_suite, load_suite, records_csv, run_bench
from .pbm import PbmError, load_pbm
from .report import to_json, to_svg, trace_csv
from .runner import METHODS, run_method
from .shapes import KINDS, gen_shape

EXIT_OK, EXIT_SOLVER, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_gen(text: str):
    """``KIND:WxH[:seed:density]`` -> image."""
    parts = text.split(":")
    if len(parts) not in (2, 4) or parts[0] not in KINDS:
        raise UsageError(f"bad --gen {text!r}; expected KIND:WxH[:seed:density] with KIND in {', '.join(KINDS)}")
    try:
        w, h = (int(v) for v in parts[1].lower().split("x"))
        seed, density = (int(parts[2]), float(parts[3])) if len(parts) == 4 else (0, 0.5)
        return gen_shape(parts[0], w, h, seed=seed, density=density)
    except ValueError as exc:
        raise UsageError(f"bad --gen {text!r}: {exc}") from None


def _nonneg_int(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _k_list(s: str):
    try:
        ks = [int(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad k list {s!r}") from None
    if not ks or min(ks) < 0:
        raise argparse.ArgumentTypeError("k list must be non-empty and >= 0")
    return ks


def _methods(s: str):
    ms = [m.strip() for m in s.split(",") if m.strip()]
    bad = [m for m in ms if m not in METHODS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown method(s) {', '.join(bad)}")
    if not ms:
        raise argparse.ArgumentTypeError("method list is empty")
    return ms


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rectblanket", description="Rectangle blankets for binary images.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one image")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", type=Path, help="PBM file (P1 or P4)")
    src.add_argument("--gen", help="KIND:WxH[:seed:density]")
    s.add_argument("--k", type=_nonneg_int, required=True)
    s.add_argument("--method", choices=METHODS, default="bp")
    s.add_argument("--rule", type=int, choices=(1, 2), default=2)
    s.add_argument("--alpha", type=float, default=0.8)
    s.add_argument("--rho", type=int, default=3)
    s.add_argument("--tau", type=float, default=0.5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--time-limit", type=float, default=3600.0)
    s.add_argument("--out", type=Path, help="JSON output (default: stdout)")
    s.add_argument("--svg", type=Path)
    s.add_argument("--trace", type=Path, help="per-iteration column generation CSV (bp only)")
    s.add_argument("--timings", action="store_true", help="include wall-clock stats in the JSON")

    b = sub.add_parser("bench", help="run a benchmark grid")
    b.add_argument("--suite", default="builtin", help="'builtin' or a directory of .pbm files")
    b.add_argument("--k", type=_k_list, default=list(DEFAULT_KS))
    b.add_argument("--methods", type=_methods, default=list(METHODS))
    b.add_argument("--time-limit", type=float, default=3600.0)
    b.add_argument("--csv", type=Path, help="CSV output (default: stdout)")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--no-pd", action="store_true", help="skip percentage deviation columns")
    return p


def _write(path, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def run_solve(args) -> int:
    if args.input is not None:
        try:
            image = load_pbm(args.input.read_bytes())
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc}") from None
        except PbmError as exc:
            raise UsageError(f"{args.input}: {exc}") from None
    else:
        image = parse_gen(args.gen)
    try:
        sol = run_method(image, args.k, args.method, rule=args.rule, alpha=args.alpha, rho=args.rho,
                         tau=args.tau, seed=args.seed, time_limit=args.time_limit)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(args.out, to_json(sol, image, args.k, timings=args.timings))
    if args.svg:
        args.svg.write_text(to_svg(sol, image), encoding="utf-8")
    if args.trace:
        args.trace.write_text(trace_csv(sol.trace), encoding="utf-8")
    return EXIT_OK


def run_bench_cmd(args) -> int:
    try:
        suite = builtin_suite() if args.suite == "builtin" else load_suite(args.suite)
        rows = run_bench(suite, args.k, args.methods, args.time_limit, jobs=args.jobs,
                         with_pd=not args.no_pd)
    except (BenchError, PbmError, OSError) as exc:
        raise UsageError(str(exc)) from None
    _write(args.csv, records_csv(rows))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on bad flags
    try:
        return run_solve(args) if args.command == "solve" else run_bench_cmd(args)
    except UsageError as exc:
        print(f"rectblanket: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # solver failure
        print(f"rectblanket: solver failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
