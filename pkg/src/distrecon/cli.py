"""Command-line interface.

Exit codes: 0 pass/match, 1 fail/mismatch, 2 error or not applicable.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import _backend
from .configio import ConfigFormatError, load_config
from .experiments import count_table, lattice_experiment, random_g_statistics
from .geometry import distance_distribution
from .recon import Verdict, compare_configs, test_reconstructible_2d, test_reconstructible_md

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _load(path, args):
    exact = False if args.float else (True if args.exact else None)
    return load_config(path, exact=exact)


def _emit(args, payload: dict, human: str, rows: list[dict] | None = None) -> None:
    fmt = args.format
    if fmt == "json":
        text = json.dumps(payload, indent=2, default=str)
    elif fmt == "csv":
        buf = io.StringIO()
        table = rows if rows is not None else [payload]
        writer = csv.DictWriter(buf, fieldnames=list(table[0]) if table else [])
        writer.writeheader()
        for r in table:
            writer.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in r.items()})
        text = buf.getvalue()
    else:
        text = human
    if args.out:
        Path(args.out).write_text(text if text.endswith("\n") else text + "\n")
        if fmt != "human":
            print(human)
            return
    print(text)


def cmd_distances(args) -> int:
    P = _load(args.file, args)
    D = distance_distribution(P)
    if args.sqrt:
        shown = [(math.sqrt(float(v)), k) for v, k in D.entries]
        human = ", ".join(f"{v:.6g} ×{k}" for v, k in shown)
    else:
        human = str(D)
    payload = {"total": D.total, "squared": not args.sqrt,
               "entries": [{"value": str(v) if not args.sqrt else math.sqrt(float(v)), "count": k}
                           for v, k in D.entries]}
    _emit(args, payload, human, payload["entries"])
    return EXIT_OK


def cmd_test(args) -> int:
    P = _load(args.file, args)
    dim = args.dim if args.dim is not None else P.m
    if dim != P.m:
        raise ValueError(f"--dim {dim} does not match the input dimension {P.m}")
    kwargs = dict(relative=args.relative, early_exit_repeated=args.early_exit, threads=args.threads)
    if P.m == 2 and args.dim is None:
        report = test_reconstructible_2d(P, args.epsilon, **kwargs)
    else:
        report = test_reconstructible_md(P, args.epsilon, **kwargs)
    lines = [f"verdict: {report.verdict.value}"]
    if report.verdict is Verdict.NOT_APPLICABLE:
        lines.append(report.message)
    else:
        lines.append(f"certified reconstructible: {'yes' if report.certified else 'no'}")
        if report.witness is not None:
            w = report.witness.to_dict()
            lines.append("witness pairs: " + " ".join("{%d,%d}" % tuple(p) for p in w["pairs"])
                         + f"  g = {w['g']}")
        if report.repeated_distances:
            lines.append("repeated distances: yes")
        if report.min_abs_g is not None:
            lines.append(f"min |g|: {report.to_dict()['min_abs_g']}")
        lines.append(f"combinations checked: {report.combos_checked} of {report.total_combinations}")
        if report.message:
            lines.append(report.message)
    lines.append(f"elapsed: {report.wall_time:.3f} s")
    _emit(args, report.to_dict(), "\n".join(lines))
    return {Verdict.PASSES: EXIT_OK, Verdict.FAILS: EXIT_FAIL}.get(report.verdict, EXIT_ERROR)


def cmd_compare(args) -> int:
    P = _load(args.file_a, args)
    Q = _load(args.file_b, args)
    verdict = compare_configs(P, Q, args.mode, tol=args.tol, epsilon=args.epsilon)
    lines = [f"distance distributions match: {'yes' if verdict.distribution_match else 'no'}"]
    if verdict.similarity_match is not None:
        lines.append(f"rescaled distributions match: {'yes' if verdict.similarity_match else 'no'}")
    if args.mode == "orientation":
        lines.append(f"orientation: {verdict.orientation.value}")
    lines.append("match" if verdict.matched else "no match")
    _emit(args, verdict.to_dict(), "\n".join(lines))
    return EXIT_OK if verdict.matched else EXIT_FAIL


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def cmd_experiment(args) -> int:
    if args.kind == "lattice":
        rep = lattice_experiment(args.N)
        _emit(args, rep.to_dict(), rep.summary())
    elif args.kind == "random":
        rep = random_g_statistics(args.trials, args.threshold, args.seed)
        human = (f"{rep.below_threshold_count} of {rep.trials} configurations have min |g| < "
                 f"{rep.threshold:g} (seed {rep.seed})")
        _emit(args, rep.to_dict(), human)
    else:
        rows = count_table(args.n, timed=args.timed)
        keys = ("n", "combinations", "seconds")
        dicts = [dict(zip(keys, r)) for r in rows]
        human = "\n".join(f"{r[0]:>3}  {r[1]:>14,}" + (f"  {r[2]:.3f} s" if len(r) > 2 else "")
                          for r in rows)
        _emit(args, {"rows": dicts}, human, dicts)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="require exact rational coordinates")
    mode.add_argument("--float", action="store_true", help="force floating-point mode")
    common.add_argument("--format", choices=("human", "json", "csv"), default="human")
    common.add_argument("--out", help="write the report to this path")
    common.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")

    parser = argparse.ArgumentParser(prog="distrecon", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distances", parents=[common], help="print the distance distribution")
    p.add_argument("file")
    p.add_argument("--sqrt", action="store_true", help="show distances instead of squares")
    p.set_defaults(func=cmd_distances)

    p = sub.add_parser("test", parents=[common], help="run the reconstructibility test")
    p.add_argument("file")
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--relative", action="store_true", help="scale epsilon by d_max^(m+1)")
    p.add_argument("--dim", type=int, default=None, help="use the general-dimension test")
    p.add_argument("--early-exit", action="store_true", help="fail immediately on repeated distances")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("compare", parents=[common], help="compare two configurations")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--mode", choices=("rigid", "orientation", "similarity"), default="rigid")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("experiment", parents=[common], help="reproduce the numerical experiments")
    p.add_argument("kind", choices=("lattice", "random", "counts"))
    p.add_argument("--N", type=int, default=3, help="lattice box size")
    p.add_argument("--trials", type=int, default=5000)
    p.add_argument("--threshold", type=float, default=1e-7)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--n", type=_int_list, default=[5, 6, 7, 8])
    p.add_argument("--timed", action="store_true", help="also time a full test per n")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    if args.threads is not None:
        _backend.set_threads(args.threads)
    try:
        return args.func(args)
    except (ConfigFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
