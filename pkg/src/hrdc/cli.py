"""Command-line front end: ``hrdc <subcommand> ...``.

Every subcommand prints one JSON document (sorted keys) on stdout, except
``eigen --format csv``.  Exit codes: 0 success, 1 verification failure,
2 usage error, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from hrdc import __version__
from hrdc.bounds import SEARCH_VERTEX_CAP, all_bounds, max_code_search
from hrdc.codeio import read_code, write_code
from hrdc.constructions import FAMILIES, MATRIX_CAP, construct, family_distance, family_generators, span_census
from hrdc.distributions import analyze, rank_census
from hrdc.eigen import eigen_table
from hrdc.errors import CapExceeded
from hrdc.field_tower import prime_power
from hrdc.verify import SUITES, run_suite

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

PIPELINE_FILES = ("config.json", "code.jsonl", "analysis.json", "bounds.json")


class UsageError(Exception):
    pass


def load_schema(name: str) -> dict:
    """JSON schema shipped with the package for the output of ``name``."""
    return json.loads(resources.files("hrdc").joinpath("schemas", f"{name}.json").read_text(encoding="utf-8"))


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _check_q(q: int) -> None:
    try:
        prime_power(q)
    except ValueError as exc:
        raise UsageError(f"q={q} is not a prime power") from exc


def _check_nd(n: int, d: int) -> None:
    if not 1 <= d <= n:
        raise UsageError(f"--d must lie in [1, {n}], got {d}")


def _code_distance(family: str, n: int, d: int | None) -> int:
    if family in ("thm41", "thm42") and d is None:
        raise UsageError(f"family {family} needs --d")
    return family_distance(family, n, d)


# ---------------------------------------------------------------------------
# subcommands


def cmd_eigen(args) -> int:
    _check_q(args.q)
    T = eigen_table(args.n, args.q, args.method)
    if args.format == "csv":
        sys.stdout.write(T.to_csv())
    else:
        print(dumps(T.to_json()))
    return EXIT_OK


def cmd_construct(args) -> int:
    _check_q(args.q)
    d = _code_distance(args.family, args.n, args.d)
    out = {"family": args.family, "n": args.n, "q": args.q, "d": d}
    if args.census_only and args.family != "thm43":
        if args.out:
            raise UsageError("--census-only does not write a code file")
        t, gens = family_generators(args.family, args.n, args.q, args.d)
        size = t.p ** len(gens)
        if size > args.cap:
            raise CapExceeded("matrices", f"code of size {size} exceeds matrix cap {args.cap}")
        census = span_census(gens, t, args.n)
        out.update(size=size, additive=True, rank_census=census)
    else:
        Y = construct(args.family, args.n, args.q, args.d, cap=args.cap)
        out.update(size=len(Y), additive=Y.is_additive, rank_census=rank_census(Y, args.n))
        if args.out:
            write_code(args.out, Y, {"family": args.family, "d": d})
            out["out"] = str(args.out)
    print(dumps(out))
    return EXIT_OK


def analysis_report(path) -> dict:
    Y, _ = read_code(path)
    rep = analyze(Y)
    d = min(rep["min_distance"], Y.n)
    rep["bounds"] = all_bounds(Y.n, d, Y.q).to_json()
    return rep


def cmd_analyze(args) -> int:
    print(dumps(analysis_report(args.inp)))
    return EXIT_OK


def cmd_bounds(args) -> int:
    _check_q(args.q)
    _check_nd(args.n, args.d)
    print(dumps(all_bounds(args.n, args.d, args.q).to_json()))
    return EXIT_OK


def cmd_search(args) -> int:
    _check_q(args.q)
    _check_nd(args.n, args.d)
    res = max_code_search(args.n, args.q, args.d, node_cap=args.node_cap, time_cap=args.time_cap,
                          vertex_cap=args.vertex_cap)
    print(dumps({
        "n": args.n, "d": args.d, "q": args.q,
        "size": res.size,
        "optimal": res.optimal,
        "nodes": res.nodes,
        "elapsed": round(res.elapsed, 3),
        "witness": [A.to_json() for A in res.witness],
    }))
    return EXIT_OK


def cmd_verify(args) -> int:
    failures = run_suite(args.suite)
    print(dumps({"suite": args.suite, "ok": not failures, "failures": failures}))
    return EXIT_OK if not failures else EXIT_VERIFY


def run_pipeline(run_dir: Path, family: str, n: int, q: int, d: int | None, cap: int = MATRIX_CAP,
                 force: bool = False) -> dict:
    """construct -> code.jsonl -> analysis.json -> bounds.json under ``run_dir``."""
    _check_q(q)
    dist = _code_distance(family, n, d)
    run_dir = Path(run_dir)
    if run_dir.exists() and any(run_dir.iterdir()) and not force:
        raise UsageError(f"{run_dir} is not empty; pass --force to overwrite")
    run_dir.mkdir(parents=True, exist_ok=True)
    p, m = prime_power(q)
    config = {"family": family, "n": n, "d": dist, "q": q, "p": p, "m": m, "cap": cap,
              "version": __version__}
    Y = construct(family, n, q, d, cap=cap)
    (run_dir / "config.json").write_text(dumps(config) + "\n", encoding="utf-8")
    write_code(run_dir / "code.jsonl", Y, {"family": family, "d": dist})
    analysis = analysis_report(run_dir / "code.jsonl")
    (run_dir / "analysis.json").write_text(dumps(analysis) + "\n", encoding="utf-8")
    bounds = all_bounds(n, dist, q).to_json()
    (run_dir / "bounds.json").write_text(dumps(bounds) + "\n", encoding="utf-8")
    return {"run_dir": str(run_dir), "files": list(PIPELINE_FILES), "size": len(Y),
            "additive": analysis["additive"], "inner": analysis["inner"]}


def cmd_pipeline(args) -> int:
    print(dumps(run_pipeline(args.run_dir, args.family, args.n, args.q, args.d, args.cap, args.force)))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hrdc", description="d-codes in the scheme of Hermitian matrices over F_{q^2}")
    ap.add_argument("--version", action="version", version=f"hrdc {__version__}")
    ap.add_argument("--threads", type=_positive, default=os.cpu_count() or 1,
                    help="worker cap (accepted for compatibility; all computations currently run in one thread)")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def nq(p, d: bool = False, d_required: bool = False):
        p.add_argument("--n", type=_positive, required=True, help="matrix size")
        p.add_argument("--q", type=_positive, required=True, help="prime power; matrices live over F_{q^2}")
        if d:
            p.add_argument("--d", type=_positive, required=d_required, help="minimum rank distance")

    p = sub.add_parser("eigen", help="eigenvalue table Q_k(i) of the scheme")
    nq(p)
    p.add_argument("--method", choices=("explicit", "recurrence", "direct"), default="explicit",
                   help="closed form, three-term recurrence or exhaustive character sums")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("construct", help="build a code from one of the known families")
    p.add_argument("--family", choices=FAMILIES, required=True)
    nq(p, d=True)
    p.add_argument("--out", type=Path, help="write the code as JSON lines")
    p.add_argument("--census-only", action="store_true", help="stream the rank census without storing the code")
    p.add_argument("--cap", type=_positive, default=MATRIX_CAP, help="refuse codes larger than this")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("analyze", help="distributions, distance, strength and bounds of a code file")
    p.add_argument("--in", dest="inp", type=Path, required=True, help="code file written by construct")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bounds", help="size bounds for d-codes in X(n, q)")
    nq(p, d=True, d_required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("search", help="exact maximum d-code by branch and bound")
    nq(p, d=True, d_required=True)
    p.add_argument("--time-cap", type=_positive_float, help="seconds before giving up optimality")
    p.add_argument("--node-cap", type=_positive, help="search nodes before giving up optimality")
    p.add_argument("--vertex-cap", type=_positive, default=SEARCH_VERTEX_CAP, help="refuse larger X(n, q)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="run a built-in verification suite")
    p.add_argument("suite", choices=SUITES)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pipeline", help="construct, serialize, analyze and bound into a run directory")
    p.add_argument("--family", choices=FAMILIES, required=True)
    nq(p, d=True)
    p.add_argument("--run-dir", type=Path, required=True, help="directory for config, code, analysis and bounds")
    p.add_argument("--cap", type=_positive, default=MATRIX_CAP, help="refuse codes larger than this")
    p.add_argument("--force", action="store_true", help="overwrite a non-empty run directory")
    p.set_defaults(func=cmd_pipeline)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(dumps({"error": str(exc), "cap": exc.cap}), file=sys.stderr)
        return EXIT_CAP
    except (UsageError, ValueError) as exc:
        print(dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
