"""Command line front end.

Subcommands:

* ``solve FILE``       - run the search described by a problem file,
* ``bench-grid``       - generate and solve grid set-stabilizer instances,
* ``bench-intersect``  - intersect a file group with conjugated wreath
                         products,
* ``selftest``         - quick built-in correctness sweep.

Problem files are line oriented::

    degree 10
    group H1 = (1,2,3,4,5,6,7,8,9,10), (2,10)(3,9)(4,8)(5,7)
    stab-set H1 1,5
    option mode PreOrbital

Directives: ``stab-set NAME p,q,...``, ``stab-partition NAME [..|..]``,
``intersect NAME NAME``.  Options: ``mode``, ``size-limit``, ``seed``,
``trace``, ``node-limit``.  Exit codes: 0 ok, 1 solver limit hit, 2 input
error.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass, field

from .groups import (
    PermGroup,
    conjugate_group,
    grid_group,
    random_perm,
    wreath_product,
)
from .partitions import OrderedPartition, parse_partition
from .perms import CycleParseError, Perm, format_cycles, parse_cycles
from .refiners import MODES
from .search import (
    InGroup,
    NodeLimitExceeded,
    Problem,
    SearchResult,
    StabilizesPartition,
    StabilizesSet,
    solve,
)

STAT_COLUMNS = (
    "mode",
    "degree",
    "order",
    "nodes_visited",
    "solutions_found",
    "graphs_built",
    "prunes_by_shape",
    "prunes_by_witness",
    "prunes_by_orbit",
    "max_depth",
    "wall_ms",
    "seed",
    "status",
)


class ProblemFileError(ValueError):
    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


@dataclass
class ProblemFile:
    degree: int
    groups: dict[str, PermGroup]
    directive: tuple  # ("stab-set", name, points) etc.
    options: dict[str, str] = field(default_factory=dict)


def parse_problem_file(path: str) -> ProblemFile:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    degree = None
    groups: dict[str, PermGroup] = {}
    pending: dict[str, str] = {}
    directive = None
    options: dict[str, str] = {}

    def fail(lineno, message):
        raise ProblemFileError(path, lineno, message)

    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "degree":
            try:
                degree = int(rest)
            except ValueError:
                fail(lineno, f"bad degree {rest!r}")
            if degree < 1:
                fail(lineno, "degree must be positive")
        elif head == "group":
            name, eq, body = rest.partition("=")
            name = name.strip()
            if not name or not eq:
                fail(lineno, "expected 'group NAME = (..)(..), (..)'")
            if degree is None:
                fail(lineno, "degree must come before group definitions")
            pending[name] = body.strip()
        elif head in ("stab-set", "stab-partition", "intersect"):
            if directive is not None:
                fail(lineno, "multiple directives")
            parts = rest.split(None, 1)
            if len(parts) != 2:
                fail(lineno, f"'{head}' needs a group name and an argument")
            directive = (head, parts[0], parts[1].strip(), lineno)
        elif head == "option":
            key, _, value = rest.partition(" ")
            if not key or not value.strip():
                fail(lineno, "expected 'option KEY VALUE'")
            options[key] = value.strip()
        else:
            fail(lineno, f"unknown line {head!r}")

    if degree is None:
        raise ProblemFileError(path, 0, "missing 'degree' line")
    for name, body in pending.items():
        gens = []
        for chunk in _split_generators(body):
            try:
                gens.append(parse_cycles(chunk, degree))
            except CycleParseError as exc:
                raise ProblemFileError(path, 0, f"group {name}: {exc}") from exc
        groups[name] = PermGroup(degree, gens)
    if directive is None:
        raise ProblemFileError(path, 0, "missing directive line")
    return ProblemFile(degree, groups, directive, options)


def _split_generators(body: str) -> list[str]:
    """Split ``(1,2,3)(4,5), (1,6)`` into generator words: a comma only
    separates generators when it sits between a ')' and a '('."""
    out = []
    current = []
    depth = 0
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append("".join(current))
            current = []
            continue
        current.append(ch)
    tail = "".join(current).strip()
    if tail:
        out.append(tail)
    return [w.strip() for w in out if w.strip()]


def _problem_from_file(pf: ProblemFile, mode: str) -> Problem:
    kind, name, arg, lineno = pf.directive

    def group(n):
        if n not in pf.groups:
            raise ProblemFileError("<directive>", lineno, f"undefined group name {n!r}")
        return pf.groups[n]

    if kind == "stab-set":
        points = frozenset(int(tok) - 1 for tok in arg.replace(",", " ").split())
        if any(not 0 <= x < pf.degree for x in points):
            raise ProblemFileError("<directive>", lineno, "set point out of range")
        return Problem(pf.degree, (InGroup(group(name)), StabilizesSet(points)), mode)
    if kind == "stab-partition":
        part = parse_partition(arg, pf.degree)
        return Problem(
            pf.degree, (InGroup(group(name)), StabilizesPartition(part)), mode
        )
    other = arg.split()[0]
    return Problem(pf.degree, (InGroup(group(name)), InGroup(group(other))), mode)


def emit_stats(
    result: SearchResult,
    mode: str,
    degree: int,
    wall_ms: int,
    fmt: str = "text",
    seed: str = "",
    status: str = "ok",
    header: bool = False,
    out=None,
) -> None:
    out = out or sys.stdout
    record = {
        "mode": mode,
        "degree": degree,
        "order": result.order if status == "ok" else "",
        "nodes_visited": result.stats.nodes_visited,
        "solutions_found": result.stats.solutions_found,
        "graphs_built": result.stats.graphs_built,
        "prunes_by_shape": result.stats.prunes_by_shape,
        "prunes_by_witness": result.stats.prunes_by_witness,
        "prunes_by_orbit": result.stats.prunes_by_orbit,
        "max_depth": result.stats.max_depth,
        "wall_ms": wall_ms,
        "seed": seed,
        "status": status,
    }
    if fmt == "csv":
        if header:
            print(",".join(STAT_COLUMNS), file=out)
        print(",".join(str(record[c]) for c in STAT_COLUMNS), file=out)
    elif fmt == "json-lines":
        import json

        print(json.dumps(record), file=out)
    else:
        for key in STAT_COLUMNS:
            print(f"{key}: {record[key]}", file=out)


def _make_trace(enabled: bool):
    if not enabled:
        return None

    def trace(cell, fragments, graph_index):
        cell_txt = ",".join(str(x + 1) for x in cell)
        frag_txt = "|".join(
            "[" + ",".join(str(x + 1) for x in f) + "]" for f in fragments
        )
        print(f"cell [{cell_txt}] -> {frag_txt} by graph #{graph_index}", file=sys.stderr)

    return trace


def _cmd_solve(args) -> int:
    pf = parse_problem_file(args.file)
    mode = args.mode or pf.options.get("mode", "FirstOrbital")
    if mode not in MODES:
        print(f"unknown mode {mode!r}; choose from {', '.join(MODES)}", file=sys.stderr)
        return 2
    node_limit = args.node_limit
    if node_limit is None and "node-limit" in pf.options:
        node_limit = int(pf.options["node-limit"])
    trace = _make_trace(args.trace or pf.options.get("trace") == "on")
    problem = _problem_from_file(pf, mode)
    t0 = time.perf_counter()
    try:
        result = solve(problem, node_limit=node_limit, trace=trace)
    except NodeLimitExceeded as exc:
        print(f"node limit hit after {exc.stats.nodes_visited} nodes", file=sys.stderr)
        return 1
    wall_ms = int((time.perf_counter() - t0) * 1000)
    print(f"order: {result.order}")
    for g in result.generators:
        print(f"generator: {format_cycles(g)}")
    emit_stats(result, mode, problem.degree, wall_ms, fmt=args.format, header=True)
    return 0


def _instance_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"{seed}:{index}")


def _cmd_bench_grid(args) -> int:
    if args.mode not in MODES:
        print(f"unknown mode {args.mode!r}", file=sys.stderr)
        return 2
    G = grid_group(args.m)
    n = args.m * args.m
    limit_hit = False
    for index in range(args.count):
        rng = _instance_rng(args.seed, index)
        if args.variant == "random":
            points = rng.sample(range(n), n // 2)
        else:
            points = []
            per_row = args.m // 2
            for row in range(args.m):
                points.extend(rng.sample(range(row * args.m, (row + 1) * args.m), per_row))
        problem = Problem(
            n, (InGroup(G), StabilizesSet(frozenset(points))), args.mode
        )
        t0 = time.perf_counter()
        status = "ok"
        try:
            result = solve(problem, node_limit=args.node_limit)
        except NodeLimitExceeded as exc:
            status = "limit"
            limit_hit = True
            result = SearchResult([], 0, exc.stats)
        wall_ms = int((time.perf_counter() - t0) * 1000)
        emit_stats(
            result, args.mode, n, wall_ms, fmt=args.format,
            seed=f"{args.seed}:{index}", status=status, header=index == 0,
        )
    return 1 if limit_hit else 0


def _cmd_bench_intersect(args) -> int:
    if args.mode not in MODES:
        print(f"unknown mode {args.mode!r}", file=sys.stderr)
        return 2
    pf = parse_problem_file(args.group_file)
    name = args.group or next(iter(pf.groups), None)
    if name is None or name not in pf.groups:
        print(f"group {name!r} not defined in {args.group_file}", file=sys.stderr)
        return 2
    G = pf.groups[name]
    try:
        a, b = (int(tok) for tok in args.wreath.split(","))
    except ValueError:
        print(f"bad --wreath {args.wreath!r}, expected a,b", file=sys.stderr)
        return 2
    if a * b != pf.degree:
        print(f"wreath degree {a * b} does not match group degree {pf.degree}", file=sys.stderr)
        return 2
    W = wreath_product(a, b)
    limit_hit = False
    for index in range(args.count):
        rng = _instance_rng(args.seed, index)
        conj = conjugate_group(W, random_perm(pf.degree, rng))
        problem = Problem(pf.degree, (InGroup(G), InGroup(conj)), args.mode)
        t0 = time.perf_counter()
        status = "ok"
        try:
            result = solve(problem, node_limit=args.node_limit)
        except NodeLimitExceeded as exc:
            status = "limit"
            limit_hit = True
            result = SearchResult([], 0, exc.stats)
        wall_ms = int((time.perf_counter() - t0) * 1000)
        emit_stats(
            result, args.mode, pf.degree, wall_ms, fmt=args.format,
            seed=f"{args.seed}:{index}", status=status, header=index == 0,
        )
    return 1 if limit_hit else 0


def _cmd_selftest(args) -> int:
    from . import selftest

    return selftest.run(verbose=not args.quiet)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbsearch",
        description="Permutation group search by partition backtrack with orbital graph refiners.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a problem file")
    p.add_argument("file")
    p.add_argument("--mode", choices=MODES, default=None)
    p.add_argument("--format", choices=("text", "csv", "json-lines"), default="text")
    p.add_argument("--node-limit", type=int, default=None)
    p.add_argument("--trace", action="store_true", help="print refinement splits")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("bench-grid", help="grid set-stabilizer benchmark")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--variant", choices=("random", "row-balanced"), default="random")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--mode", choices=MODES, default="PreOrbital")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--node-limit", type=int, default=None)
    p.add_argument("--format", choices=("text", "csv", "json-lines"), default="csv")
    p.set_defaults(func=_cmd_bench_grid)

    p = sub.add_parser("bench-intersect", help="wreath intersection benchmark")
    p.add_argument("--group-file", required=True)
    p.add_argument("--group", default=None, help="group name inside the file")
    p.add_argument("--wreath", required=True, help="a,b for blocks of size a, b blocks")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--mode", choices=MODES, default="PreOrbital")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--node-limit", type=int, default=None)
    p.add_argument("--format", choices=("text", "csv", "json-lines"), default="csv")
    p.set_defaults(func=_cmd_bench_intersect)

    p = sub.add_parser("selftest", help="run built-in correctness checks")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (ProblemFileError, CycleParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
