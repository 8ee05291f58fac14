"""JSON instance files.

An instance file looks like::

    {"n": 4,
     "edges": [[0, 1]],
     "arcs": [[2, 3], [0, 2]],
     "b": [1, 2, 1, 1],
     "k": 2,
     "partition": [[{"kind": "edge", "index": 0}], [{"kind": "arc", "index": 0}, ...]]}

Only ``n`` is required.  Arrays are written back in input order, so a file
that was read and written again is byte-for-byte stable under
:func:`dumps`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .graph import ARC, EDGE, Elem, MixedGraph


class InstanceError(ValueError):
    """Malformed instance data.  ``field`` names the offending entry."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass
class Instance:
    graph: MixedGraph
    b: list[int] | None = None
    k: int | None = None
    partition: list[list[Elem]] | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def arc_partition(self) -> list[frozenset[int]]:
        """The partition as arc-index sets; fails if any part holds an edge."""
        if self.partition is None:
            raise InstanceError("partition", "missing")
        parts = []
        for i, part in enumerate(self.partition):
            for e in part:
                if e.kind != ARC:
                    raise InstanceError(f"partition[{i}]", f"contains {e.kind} {e.index}, expected arcs only")
            parts.append(frozenset(e.index for e in part))
        return parts


def _int(value: Any, where: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceError(where, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise InstanceError(where, f"must be >= {minimum}, got {value}")
    return value


def _pairs(data: dict, key: str, n: int) -> list[tuple[int, int]]:
    raw = data.get(key, [])
    if not isinstance(raw, list):
        raise InstanceError(key, "expected a list of pairs")
    out = []
    for i, pair in enumerate(raw):
        where = f"{key}[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise InstanceError(where, f"expected a pair [u, v], got {pair!r}")
        u = _int(pair[0], where)
        v = _int(pair[1], where)
        if not (0 <= u < n and 0 <= v < n):
            raise InstanceError(where, f"endpoint index out of range [0, {n}): {pair!r}")
        if u == v:
            raise InstanceError(where, f"self-loop at vertex {u}")
        out.append((u, v))
    return out


def parse_partition(raw: Any, graph: MixedGraph, where: str = "partition") -> list[list[Elem]]:
    """Parse and validate a partition: disjoint parts covering every element."""
    if not isinstance(raw, list):
        raise InstanceError(where, "expected a list of parts")
    sizes = {EDGE: len(graph.edges), ARC: len(graph.arcs)}
    seen: dict[Elem, int] = {}
    parts: list[list[Elem]] = []
    for i, part in enumerate(raw):
        if not isinstance(part, list):
            raise InstanceError(f"{where}[{i}]", "expected a list of elements")
        elems = []
        for j, item in enumerate(part):
            at = f"{where}[{i}][{j}]"
            if not isinstance(item, dict) or set(item) != {"kind", "index"}:
                raise InstanceError(at, f'expected {{"kind": ..., "index": ...}}, got {item!r}')
            kind = item["kind"]
            if kind not in sizes:
                raise InstanceError(at, f"kind must be 'edge' or 'arc', got {kind!r}")
            idx = _int(item["index"], at)
            if not 0 <= idx < sizes[kind]:
                raise InstanceError(at, f"{kind} index {idx} out of range [0, {sizes[kind]})")
            e = Elem(kind, idx)
            if e in seen:
                raise InstanceError(at, f"duplicated element {kind} {idx} (also in part {seen[e]})")
            seen[e] = i
            elems.append(e)
        parts.append(elems)
    missing = [e for e in graph.elements() if e not in seen]
    if missing:
        e = missing[0]
        raise InstanceError(where, f"{e.kind} {e.index} is not covered by any part")
    return parts


def from_dict(data: Any) -> Instance:
    if not isinstance(data, dict):
        raise InstanceError("<root>", "expected a JSON object")
    if "n" not in data:
        raise InstanceError("n", "missing required field")
    n = _int(data["n"], "n", minimum=0)
    graph = MixedGraph(n, tuple(_pairs(data, "edges", n)), tuple(_pairs(data, "arcs", n)))
    b = None
    if data.get("b") is not None:
        raw = data["b"]
        if not isinstance(raw, list) or len(raw) != n:
            raise InstanceError("b", f"expected a list of {n} positive integers")
        b = [_int(x, f"b[{i}]", minimum=1) for i, x in enumerate(raw)]
    k = None
    if data.get("k") is not None:
        k = _int(data["k"], "k", minimum=1)
    partition = None
    if data.get("partition") is not None:
        partition = parse_partition(data["partition"], graph)
    known = {"n", "edges", "arcs", "b", "k", "partition"}
    extra = {key: value for key, value in data.items() if key not in known}
    return Instance(graph, b, k, partition, extra)


def to_dict(inst: Instance) -> dict[str, Any]:
    g = inst.graph
    out: dict[str, Any] = {
        "n": g.n,
        "edges": [list(e) for e in g.edges],
        "arcs": [list(a) for a in g.arcs],
    }
    if inst.b is not None:
        out["b"] = list(inst.b)
    if inst.k is not None:
        out["k"] = inst.k
    if inst.partition is not None:
        out["partition"] = [[{"kind": e.kind, "index": e.index} for e in part] for part in inst.partition]
    out.update(inst.extra)
    return out


def loads(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError("<json>", f"malformed JSON: {exc}") from None
    return from_dict(data)


def dumps(inst: Instance) -> str:
    return json.dumps(to_dict(inst), indent=1) + "\n"


def load(path: str) -> Instance:
    with open(path, encoding="utf-8") as f:
        return loads(f.read())


def dump(inst: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(inst))


def arc_parts_to_elems(parts: list[frozenset[int]] | list[list[int]]) -> list[list[Elem]]:
    return [[Elem(ARC, a) for a in sorted(part)] for part in parts]
