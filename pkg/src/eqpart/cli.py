"""Command-line front end.

Exit codes: 0 success, 1 bad input, 2 proven infeasible (no partition or
decomposition exists), 3 an exhaustive search hit its size limit, 4 an
internal check failed.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

from . import instance as inst_io
from .bbranchings import (
    FALLBACK_THRESHOLD,
    b_potential,
    equitable_b_partition,
    is_b_branching,
    is_equitable_b_partition,
)
from .branchings import EXHAUSTIVE_CUT_LIMIT, equitable_branching_partition, is_branching, size_spread
from .errors import InvariantError, PreconditionError, SizeLimitError
from .graph import ARC, Elem, MixedGraph, indegree_vector
from .idp import BACKTRACK_LIMIT, NODE_BUDGET, IdpQuery, decompose, partition_into_k_bbranchings
from .instance import Instance, InstanceError
from .matching_forests import (
    MatchingForest,
    boundary_sizes,
    equitable_mf_partition,
    is_matching_forest,
    mf_potential,
)
from .oracle import (
    B_BRANCHING,
    BRANCHING,
    ENUMERATION_LIMIT,
    MATCHING_FOREST,
    GeneratorConfig,
    generate_partitionable,
    initial_mf_partition,
)

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_SIZE_LIMIT, EXIT_INTERNAL = 0, 1, 2, 3, 4

DEFAULTS = {
    "size_limit": ENUMERATION_LIMIT,
    "backtrack_limit": BACKTRACK_LIMIT,
    "node_budget": NODE_BUDGET,
    "fallback_threshold": FALLBACK_THRESHOLD,
    "exhaustive_cut_limit": EXHAUSTIVE_CUT_LIMIT,
}


class Infeasible(Exception):
    pass


@dataclass
class RunReport:
    subcommand: str
    input_digest: str | None = None
    iterations: int = 0
    initial_potential: int | None = None
    final_potential: int | None = None
    gaps: dict[str, int] = field(default_factory=dict)
    wall_time: float = 0.0


def _digest(path: str | None) -> str | None:
    if path is None:
        return None
    with open(path, "rb") as f:
        return hashlib.sha256(f.read()).hexdigest()


def _gap(values: Sequence[int]) -> int:
    return max(values) - min(values) if values else 0


def arc_gaps(D: MixedGraph, parts: Sequence[Sequence[int]]) -> dict[str, int]:
    degs = [indegree_vector(D, p) for p in parts]
    return {
        "size": _gap([len(p) for p in parts]),
        "indegree": max((_gap([d[v] for d in degs]) for v in range(D.n)), default=0),
    }


def mf_gaps(G: MixedGraph, parts: Sequence[MatchingForest]) -> dict[str, int]:
    return {
        "boundary": _gap(boundary_sizes(G, parts)),
        "size": _gap([len(F) for F in parts]),
    }


def _mode(inst: Instance) -> str:
    if inst.graph.edges:
        return MATCHING_FOREST
    if inst.b is not None:
        return B_BRANCHING
    return BRANCHING


def _k(inst: Instance, override: int | None) -> int:
    k = override if override is not None else inst.k
    if k is None and inst.partition is not None:
        k = len(inst.partition)
    if k is None:
        raise InstanceError("k", "missing; give --k or a 'k' field")
    if k < 1:
        raise InstanceError("k", f"must be positive, got {k}")
    if inst.partition is not None and len(inst.partition) != k:
        raise InstanceError("k", f"is {k} but the partition has {len(inst.partition)} parts")
    return k


def check_parts(inst: Instance, mode: str, equitable: bool) -> dict[str, int]:
    """Validate every part for ``mode``; optionally require equitability.

    Raises :class:`InstanceError` naming the first offending part.
    """
    G = inst.graph
    if inst.partition is None:
        raise InstanceError("partition", "missing")
    if mode == MATCHING_FOREST:
        parts = [MatchingForest.from_elems(p) for p in inst.partition]
        for i, F in enumerate(parts):
            if not is_matching_forest(G, F):
                raise InstanceError(f"partition[{i}]", "is not a matching forest")
        gaps = mf_gaps(G, parts)
        if equitable and gaps["boundary"] > 2:
            raise InstanceError("partition", f"boundary sizes differ by {gaps['boundary']} > 2")
        return gaps
    arc_parts = inst.arc_partition()
    for i, p in enumerate(arc_parts):
        ok = is_branching(G, p) if mode == BRANCHING else is_b_branching(G, inst.b, p)
        if not ok:
            raise InstanceError(f"partition[{i}]", f"is not a {mode}")
    gaps = arc_gaps(G, [sorted(p) for p in arc_parts])
    if equitable:
        if mode == BRANCHING and gaps["size"] > 1:
            raise InstanceError("partition", f"part sizes differ by {gaps['size']} > 1")
        if mode == B_BRANCHING and not is_equitable_b_partition(G, arc_parts):
            raise InstanceError("partition", "sizes or indegrees are not all floor/ceil of the fair share")
    return gaps


def _write(inst: Instance, path: str | None) -> None:
    if path is None:
        sys.stdout.write(inst_io.dumps(inst))
    else:
        inst_io.dump(inst, path)


def _initial_arc_partition(inst: Instance, k: int, b: list[int], opts: dict) -> list[frozenset[int]]:
    if inst.partition is not None:
        return inst.arc_partition()
    parts = partition_into_k_bbranchings(inst.graph, b, k, opts["backtrack_limit"], opts["node_budget"])
    if parts is None:
        raise Infeasible(f"the arcs cannot be partitioned into {k} parts")
    return parts


def cmd_partition_arcs(args, opts: dict, report: RunReport, mode: str) -> None:
    inst = inst_io.load(args.input)
    G = inst.graph
    if G.edges:
        raise InstanceError("edges", f"{args.command} expects a digraph (no undirected edges)")
    if mode == B_BRANCHING and inst.b is None:
        raise InstanceError("b", "missing; partition-bb needs a capacity vector")
    k = _k(inst, args.k)
    b = inst.b if mode == B_BRANCHING else [1] * G.n
    initial = _initial_arc_partition(inst, k, b, opts)
    trace: list = []
    if mode == BRANCHING:
        report.initial_potential = size_spread([len(p) for p in initial])
        parts = equitable_branching_partition(G, initial, opts["exhaustive_cut_limit"], trace)
        report.final_potential = size_spread([len(p) for p in parts])
    else:
        report.initial_potential = b_potential(G, initial)
        parts = equitable_b_partition(
            G, b, initial, opts["fallback_threshold"], opts["exhaustive_cut_limit"], trace
        )
        report.final_potential = b_potential(G, parts)
    report.iterations = len(trace)
    out = Instance(G, inst.b, k, inst_io.arc_parts_to_elems(parts), inst.extra)
    report.gaps = check_parts(out, mode, equitable=args.verify) if args.verify else arc_gaps(
        G, [sorted(p) for p in parts]
    )
    _write(out, args.output)


def cmd_partition_mf(args, opts: dict, report: RunReport) -> None:
    inst = inst_io.load(args.input)
    G = inst.graph
    k = _k(inst, args.k)
    if inst.partition is not None:
        initial = [MatchingForest.from_elems(p) for p in inst.partition]
    else:
        initial = initial_mf_partition(G, k, opts["size_limit"])
        if initial is None:
            raise Infeasible(f"E | A cannot be partitioned into {k} matching forests")
    trace: list = []
    report.initial_potential = mf_potential(G, initial)
    parts = equitable_mf_partition(G, initial, opts["exhaustive_cut_limit"], trace)
    report.final_potential = mf_potential(G, parts)
    report.iterations = len(trace)
    out = Instance(G, inst.b, k, [F.elems() for F in parts], inst.extra)
    report.gaps = check_parts(out, MATCHING_FOREST, equitable=True) if args.verify else mf_gaps(G, parts)
    _write(out, args.output)


def _query(data: Any) -> tuple[list[int], IdpQuery]:
    if not isinstance(data, dict):
        raise InstanceError("<query>", "expected a JSON object")

    def ints(key: str, required: bool) -> list[int] | None:
        if data.get(key) is None:
            if required:
                raise InstanceError(key, "missing required field")
            return None
        raw = data[key]
        if not isinstance(raw, list) or any(isinstance(v, bool) or not isinstance(v, int) for v in raw):
            raise InstanceError(key, "expected a list of integers")
        return raw

    kappa = data.get("kappa")
    if isinstance(kappa, bool) or not isinstance(kappa, int) or kappa < 1:
        raise InstanceError("kappa", f"expected a positive integer, got {kappa!r}")
    ell = data.get("ell")
    if ell is not None and (isinstance(ell, bool) or not isinstance(ell, int)):
        raise InstanceError("ell", f"expected an integer or null, got {ell!r}")
    x = ints("x", True)
    vprime = ints("Vprime", False) or []
    bprime = ints("bprime", False) or []
    if len(vprime) != len(bprime):
        raise InstanceError("bprime", "must have one entry per Vprime vertex")
    return x, IdpQuery(kappa, ell, tuple(vprime), tuple(bprime))


def cmd_decompose(args, opts: dict, report: RunReport) -> None:
    inst = inst_io.load(args.input)
    G = inst.graph
    if G.edges:
        raise InstanceError("edges", "decompose expects a digraph")
    b = inst.b if inst.b is not None else [1] * G.n
    source = args.query or args.input
    with open(source, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise InstanceError("<query>", f"malformed JSON: {exc}") from None
    x, q = _query(data)
    if len(x) != len(G.arcs):
        raise InstanceError("x", f"has {len(x)} entries but the digraph has {len(G.arcs)} arcs")
    try:
        parts = decompose(G, b, x, q, opts["backtrack_limit"], opts["node_budget"], opts["exhaustive_cut_limit"])
    except PreconditionError as exc:
        raise InstanceError("x", str(exc)) from None
    if parts is None:
        raise Infeasible(f"x is not a sum of {q.kappa} b-branchings")
    if args.verify:
        total = [0] * len(G.arcs)
        for i, p in enumerate(parts):
            if not is_b_branching(G, b, p):
                raise InvariantError(f"part {i} is not a b-branching")
            for a in p:
                total[a] += 1
        if total != x:
            raise InvariantError("parts do not sum to x")
    report.gaps = arc_gaps(G, parts)
    out = {
        "kappa": q.kappa,
        "ell": q.ell,
        "parts": [[{"kind": ARC, "index": a} for a in p] for p in parts],
    }
    text = json.dumps(out, indent=1) + "\n"
    if args.output is None:
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)


def cmd_gen(args, opts: dict, report: RunReport) -> None:
    kind = {"mf": MATCHING_FOREST, "bb": B_BRANCHING}.get(args.kind, args.kind)
    config = GeneratorConfig(
        args.seed, args.n, args.k, args.edge_density, args.arc_density, args.b_max, args.skew
    )
    G, parts, b = generate_partitionable(config, kind)
    if kind == MATCHING_FOREST:
        elems = [F.elems() for F in parts]
    else:
        elems = inst_io.arc_parts_to_elems(parts)
    _write(Instance(G, b, args.k, elems), args.output)


def cmd_check(args, opts: dict, report: RunReport) -> None:
    inst = inst_io.load(args.input)
    if inst.k is not None and inst.partition is not None and len(inst.partition) != inst.k:
        raise InstanceError("k", f"is {inst.k} but the partition has {len(inst.partition)} parts")
    report.gaps = {"n": inst.graph.n, "edges": len(inst.graph.edges), "arcs": len(inst.graph.arcs)}


def cmd_verify(args, opts: dict, report: RunReport) -> None:
    inst = inst_io.load(args.input)
    mode = args.mode or _mode(inst)
    if mode == B_BRANCHING and inst.b is None:
        raise InstanceError("b", "missing; b-branching mode needs a capacity vector")
    report.gaps = check_parts(inst, mode, args.equitable)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eqpart", description="Equitable partitions of digraphs and mixed graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, output: bool = True) -> None:
        p.add_argument("--input", required=True, help="instance JSON file")
        if output:
            p.add_argument("--output", help="write the result here instead of stdout")
        p.add_argument("--config", help="JSON file with limits (size_limit, node_budget, ...)")
        p.add_argument("--size-limit", type=int, help="max elements for exhaustive enumeration")
        p.add_argument("--report", help="write the run report JSON here (default: stderr)")

    for name in ("partition-branchings", "partition-mf", "partition-bb"):
        p = sub.add_parser(name)
        common(p)
        p.add_argument("--k", type=int)
        p.add_argument("--verify", action="store_true", help="re-check validity and equitability before writing")
        p.add_argument("--fallback-threshold", type=int)

    p = sub.add_parser("decompose")
    common(p)
    p.add_argument("--query", help="query JSON (x, kappa, ell, Vprime, bprime); defaults to the input file")
    p.add_argument("--verify", action="store_true")

    p = sub.add_parser("gen")
    p.add_argument("--kind", required=True, choices=[BRANCHING, MATCHING_FOREST, B_BRANCHING, "mf", "bb"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--b-max", type=int, default=1)
    p.add_argument("--edge-density", type=float, default=0.5)
    p.add_argument("--arc-density", type=float, default=0.6)
    p.add_argument("--skew", type=float, default=0.0, help="thin later parts (0 = equal densities)")
    p.add_argument("--output")
    p.add_argument("--config")
    p.add_argument("--report")

    p = sub.add_parser("check")
    common(p, output=False)

    p = sub.add_parser("verify")
    common(p, output=False)
    p.add_argument("--mode", choices=[BRANCHING, MATCHING_FOREST, B_BRANCHING])
    p.add_argument("--equitable", action="store_true", help="also require the equitability bound")
    return parser


def _options(args) -> dict:
    opts = dict(DEFAULTS)
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as f:
            try:
                loaded = json.load(f)
            except json.JSONDecodeError as exc:
                raise InstanceError("<config>", f"malformed JSON: {exc}") from None
        if not isinstance(loaded, dict):
            raise InstanceError("<config>", "expected a JSON object")
        for key, value in loaded.items():
            if key not in DEFAULTS:
                raise InstanceError(f"<config>.{key}", "unknown setting")
            if isinstance(value, bool) or not isinstance(value, int):
                raise InstanceError(f"<config>.{key}", "expected an integer")
            opts[key] = value
    if getattr(args, "size_limit", None) is not None:
        opts["size_limit"] = opts["backtrack_limit"] = args.size_limit
    if getattr(args, "fallback_threshold", None) is not None:
        opts["fallback_threshold"] = args.fallback_threshold
    return opts


COMMANDS = {
    "partition-branchings": lambda a, o, r: cmd_partition_arcs(a, o, r, BRANCHING),
    "partition-bb": lambda a, o, r: cmd_partition_arcs(a, o, r, B_BRANCHING),
    "partition-mf": cmd_partition_mf,
    "decompose": cmd_decompose,
    "gen": cmd_gen,
    "check": cmd_check,
    "verify": cmd_verify,
}


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    report = RunReport(args.command)
    start = time.perf_counter()
    try:
        opts = _options(args)
        report.input_digest = _digest(getattr(args, "input", None))
        COMMANDS[args.command](args, opts, report)
    except (InstanceError, PreconditionError, IndexError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc.filename}: file not found", file=sys.stderr)
        return EXIT_INPUT
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SizeLimitError as exc:
        print(f"size limit: {exc}", file=sys.stderr)
        return EXIT_SIZE_LIMIT
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    report.wall_time = round(time.perf_counter() - start, 6)
    text = json.dumps(asdict(report), indent=1)
    if getattr(args, "report", None):
        with open(args.report, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        print(text, file=sys.stderr)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
