"""Command-line entry point: ``cubepaths <subcommand> ...``.

Every subcommand prints one JSON document on stdout, except ``verify``,
which streams JSON lines (one certificate per line).  Exit status is 0 on
success, 1 when a verification fails and 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence, TextIO

from . import boundary as bd
from . import bounds, flownet, verify
from .compression import compress_to_down_set
from .cube import CubeSet, check_dim
from .jsonio import dumps, edges_to_json, parse_set, rational, real, set_to_json

FAILURE_FILE = "cubepaths-failures.jsonl"


class InputError(ValueError):
    pass


def _load_instance(args: argparse.Namespace) -> dict:
    if args.json is not None:
        text = args.json
    elif args.input == "-":
        text = sys.stdin.read()
    elif args.input:
        text = Path(args.input).read_text()
    else:
        raise InputError("give the instance with --input FILE (or '-') or --json TEXT")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"instance is not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise InputError("instance must be a JSON object")
    return obj


def _instance_sets(obj: dict, keys: Sequence[str]) -> tuple[int, list[CubeSet]]:
    n = obj.get("n")
    if n is None:
        for key in keys:
            if isinstance(obj.get(key), dict) and "n" in obj[key]:
                n = obj[key]["n"]
                break
    if n is None:
        raise InputError("instance needs the dimension 'n'")
    check_dim(n)
    sets = []
    for key in keys:
        if key not in obj:
            raise InputError(f"instance is missing {key!r}")
        sets.append(parse_set(obj[key], n))
    return n, sets


def cmd_boundary(args: argparse.Namespace) -> dict:
    try:
        raw = json.loads(args.set)
    except json.JSONDecodeError as exc:
        raise InputError(f"--set is not valid JSON: {exc}") from None
    S = parse_set(raw, args.n)
    out: dict[str, Any] = {"n": S.dim, "kind": args.kind, "directed": args.directed}
    if args.kind == "edge":
        E = bd.directed_edge_boundary(S) if args.directed else bd.edge_boundary(S)
        out["size"] = len(E)
        if args.list:
            out["edges"] = edges_to_json(E)
        return out
    if args.kind == "vertex":
        R = bd.directed_vertex_boundary(S) if args.directed else bd.vertex_boundary(S)
    elif args.kind == "surface":
        R = bd.surface(S)
    elif args.kind == "shadow":
        R = bd.lower_shadow(S)
    else:
        R = bd.up_closure_h(S)
    out["size"] = len(R)
    if args.list:
        out["members"] = set_to_json(R)["members"]
    return out


def cmd_compress(args: argparse.Namespace) -> dict:
    obj = _load_instance(args)
    mode = obj.get("mode", "edge")
    if mode not in ("edge", "vertex"):
        raise InputError(f"mode must be 'edge' or 'vertex', got {mode!r}")
    _, (A, B, S) = _instance_sets(obj, ("A", "B", "S"))
    result, trace = compress_to_down_set(S, A, B, mode)
    return {"S'": set_to_json(result), "trace": [step.to_json() for step in trace]}


def cmd_paths(args: argparse.Namespace) -> dict:
    obj = _load_instance(args)
    mode = obj.get("mode", "edge")
    directed = obj.get("directed", False)
    if mode not in ("edge", "vertex"):
        raise InputError(f"mode must be 'edge' or 'vertex', got {mode!r}")
    if not isinstance(directed, bool):
        raise InputError("'directed' must be true or false")
    n, (A, B) = _instance_sets(obj, ("A", "B"))
    check_dim(n, cap=flownet.MAX_FLOW_DIM)
    solve = flownet.edge_disjoint_paths if mode == "edge" else flownet.vertex_disjoint_paths
    count, family, cut = solve(A, B, directed)
    out: dict[str, Any] = {
        "count": count,
        "paths": family.to_json(),
        "cut": {"S": set_to_json(cut.S), "size": cut.cut_size},
    }
    if cut.separator is not None:
        out["cut"]["separator"] = set_to_json(cut.separator)
    return out


def cmd_bounds(args: argparse.Namespace) -> dict:
    out: dict[str, Any] = {"function": args.function, "n": args.n, "x": args.x}
    if args.function == "e":
        value = bounds.func_e(args.n, args.x)
        out["value"] = f"{real(value):.12g}"
    else:
        fn = bounds.func_b if args.function == "b" else bounds.func_s
        q = fn(args.n, args.x)
        out["value"] = f"{float(q):.12g}"
        out["rational"] = rational(q)
    return out


def _plans(args: argparse.Namespace) -> list[verify.SweepPlan]:
    ids = list(verify.THEOREMS) if args.theorem == "all" else [args.theorem]
    for tid in ids:
        if tid not in verify.THEOREMS:
            raise InputError(f"unknown theorem {tid!r}; known: all, {', '.join(verify.THEOREMS)}")
    if args.n is None:
        if args.random is not None or args.exhaustive:
            raise InputError("--exhaustive/--random need --n")
        return [p for p in verify.default_suite() if p.theorem_id in ids]
    if args.random is not None:
        return [verify.SweepPlan(t, (args.n, args.n), "random", args.random, args.seed) for t in ids]
    return [verify.SweepPlan(t, (args.n, args.n)) for t in ids]


def cmd_verify(args: argparse.Namespace, stdout: TextIO) -> int:
    if args.negative_control:
        stdout.write(dumps(verify.negative_control(args.n or 3)) + "\n")
        return 0
    plans = _plans(args)
    sink = open(args.out, "w") if args.out else stdout
    failures = []
    total = 0
    try:
        for plan in plans:
            for cert in verify.iter_certificates(plan, fail_fast=args.fail_fast):
                total += 1
                line = dumps(cert.to_json())
                sink.write(line + "\n")
                if not cert.passed:
                    failures.append(line)
                    if args.fail_fast:
                        break
            if failures and args.fail_fast:
                break
    finally:
        if sink is not stdout:
            sink.close()
    if failures and not args.out:
        with open(FAILURE_FILE, "a") as fh:
            fh.write("\n".join(failures) + "\n")
    summary = {"certificates": total, "failures": len(failures)}
    print(dumps(summary), file=sys.stderr)
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cubepaths", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("boundary", help="boundary of a vertex family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--set", required=True, help="JSON list of vertices, e.g. '[[],[1]]'")
    p.add_argument("--kind", choices=("edge", "vertex", "surface", "shadow", "h"), default="edge")
    p.add_argument("--directed", action="store_true")
    p.add_argument("--list", action="store_true", help="include the full boundary listing")

    for name, helptext in (("compress", "compress S to a down-set"), ("paths", "disjoint A-B paths")):
        p = sub.add_parser(name, help=helptext)
        src = p.add_mutually_exclusive_group()
        src.add_argument("--input", help="instance JSON file, '-' for stdin")
        src.add_argument("--json", help="instance JSON text")

    p = sub.add_parser("bounds", help="evaluate e, b or s")
    p.add_argument("function", choices=("e", "b", "s"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=int, required=True)

    p = sub.add_parser("verify", help="run theorem sweeps and emit certificates")
    p.add_argument("--theorem", default="all")
    p.add_argument("--n", type=int)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--random", type=int, metavar="COUNT")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fail-fast", action="store_true")
    p.add_argument("--out", help="JSON-lines certificate file (default: stdout)")
    p.add_argument("--negative-control", action="store_true",
                   help="count disjoint non-down/up pairs with fewer directed paths")
    return parser


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args, stdout)
        handler = {
            "boundary": cmd_boundary,
            "compress": cmd_compress,
            "paths": cmd_paths,
            "bounds": cmd_bounds,
        }[args.command]
        stdout.write(dumps(handler(args)) + "\n")
        return 0
    except (ValueError, OSError) as exc:
        print(dumps({"error": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
