"""Matching forests in mixed graphs and partitions balanced by covered vertices.

A matching forest ``F`` is a set of edges ``M`` and arcs ``B`` where ``M`` is a
matching, ``B`` is a branching, and no vertex is covered by both (an edge
covers its two ends, an arc covers its head).  Its boundary is the set of
covered vertices, and ``|boundary| = |F| + |M|``.

Two matching forests whose boundary sizes differ by three or more are
rebalanced along a path of the auxiliary graph ``H`` on ``V`` whose edges are
``M1``, ``M2`` and one vertex pair per multi-vertex source component of
``(V, B1 | B2)``.  Every vertex of ``H`` has degree at most two, so ``H`` is a
union of paths and cycles; exchanging the roles of the two forests on one
suitable path moves one or two covered vertices from the larger side to the
smaller side.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .branchings import EXHAUSTIVE_CUT_LIMIT, is_branching, repartition_two_branchings, roots
from .errors import InvariantError, PreconditionError
from .graph import ARC, EDGE, Elem, MixedGraph, sources_of_pairs


@dataclass(frozen=True)
class MatchingForest:
    edges: frozenset[int] = frozenset()
    arcs: frozenset[int] = frozenset()

    @classmethod
    def of(cls, edges: Iterable[int] = (), arcs: Iterable[int] = ()) -> MatchingForest:
        return cls(frozenset(edges), frozenset(arcs))

    @classmethod
    def from_elems(cls, elems: Iterable[Elem]) -> MatchingForest:
        elems = list(elems)
        return cls(
            frozenset(e.index for e in elems if e.kind == EDGE),
            frozenset(e.index for e in elems if e.kind == ARC),
        )

    def elems(self) -> list[Elem]:
        return [Elem(EDGE, i) for i in sorted(self.edges)] + [Elem(ARC, a) for a in sorted(self.arcs)]

    def __len__(self) -> int:
        return len(self.edges) + len(self.arcs)


def _matched(G: MixedGraph, edges: Iterable[int]) -> list[int]:
    covered = []
    for e in edges:
        covered.extend(G.edges[e])
    return covered


def boundary(G: MixedGraph, F: MatchingForest) -> frozenset[int]:
    """Vertices covered by ``F``: both ends of each edge, the head of each arc."""
    return frozenset(_matched(G, F.edges)) | frozenset(G.arcs[a][1] for a in F.arcs)


def is_matching_forest(G: MixedGraph, F: MatchingForest) -> bool:
    if any(not 0 <= e < len(G.edges) for e in F.edges):
        raise IndexError("edge index out of range")
    G.check_arcs(F.arcs)
    covered = _matched(G, F.edges)
    if len(covered) != len(set(covered)):
        return False
    if not is_branching(G, F.arcs):
        return False
    return not (set(covered) & {G.arcs[a][1] for a in F.arcs})


@dataclass
class ExchangeGraph:
    """Undirected multigraph on ``range(n)`` with labelled edges.

    ``edges[i] = (u, v, label, ref)`` where label is ``"M1"``, ``"M2"`` or
    ``"N"``.  For matching edges ``ref`` is the edge index in the host graph;
    for ``N`` pairs it is the position of the source component in
    ``components``.
    """

    n: int
    edges: list[tuple[int, int, str, int]]
    components: list[frozenset[int]] = field(default_factory=list)

    def incident(self) -> list[list[int]]:
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, (u, v, _, _) in enumerate(self.edges):
            inc[u].append(i)
            inc[v].append(i)
        return inc

    def degree(self) -> list[int]:
        return [len(x) for x in self.incident()]


@dataclass(frozen=True)
class SwapPath:
    vertices: tuple[int, ...]
    edge_ids: tuple[int, ...]  # positions in ExchangeGraph.edges
    matching_edges: frozenset[int]  # host-graph edges of the path taken from M1 or M2


def build_exchange_graph(G: MixedGraph, F1: MatchingForest, F2: MatchingForest) -> ExchangeGraph:
    """Graph with edge set ``M1 + M2 + N`` for two disjoint matching forests.

    ``N`` holds, for each source component ``X`` of ``(V, B1 | B2)`` with two
    or more vertices, the pair (smallest root of ``B1`` in ``X``, smallest
    root of ``B2`` in ``X``).
    """
    for name, F in (("F1", F1), ("F2", F2)):
        if not is_matching_forest(G, F):
            raise PreconditionError(f"{name} is not a matching forest")
    if F1.edges & F2.edges or F1.arcs & F2.arcs:
        raise PreconditionError("F1 and F2 share elements")
    R1, R2 = roots(G, F1.arcs), roots(G, F2.arcs)
    edges = [(*G.edges[e], "M1", e) for e in sorted(F1.edges)]
    edges += [(*G.edges[e], "M2", e) for e in sorted(F2.edges)]
    comps = []
    for X in sources_of_pairs(G.n, (G.arcs[a] for a in sorted(F1.arcs | F2.arcs))):
        if len(X) < 2:
            continue
        edges.append((min(X & R1), min(X & R2), "N", len(comps)))
        comps.append(X)
    H = ExchangeGraph(G.n, edges, comps)

    both = boundary(G, F1) & boundary(G, F2)
    for v, d in enumerate(H.degree()):
        if d > 2:
            raise InvariantError(f"exchange graph has degree {d} at vertex {v}")
        if d == 2 and v not in both:
            raise InvariantError(f"degree-2 vertex {v} is not covered by both forests")
    return H


def _walk(H: ExchangeGraph, inc: list[list[int]], start: int) -> tuple[list[int], list[int]]:
    verts, used = [start], []
    prev = None
    cur = start
    while True:
        nxt = [e for e in inc[cur] if e != prev]
        if not nxt:
            return verts, used
        e = nxt[0]
        u, v, _, _ = H.edges[e]
        cur = v if u == cur else u
        verts.append(cur)
        used.append(e)
        prev = e


def find_swap_path(H: ExchangeGraph, dF1: Iterable[int], dF2: Iterable[int]) -> SwapPath | None:
    """A path component of ``H`` with one end covered by F1 only and the other
    end covered by F1 (or a lone vertex covered by F1 only).

    Endpoints are tried by increasing id and the path is read starting from
    that endpoint.  Returns ``None`` if no component qualifies, which cannot
    happen when ``|dF1| - |dF2| >= 3``.
    """
    dF1, dF2 = frozenset(dF1), frozenset(dF2)
    inc = H.incident()
    for u in sorted(dF1 - dF2):
        if len(inc[u]) > 1:
            continue
        verts, used = _walk(H, inc, u)
        if len(verts) == 1 or verts[-1] in dF1:
            matching = frozenset(H.edges[e][3] for e in used if H.edges[e][2] != "N")
            return SwapPath(tuple(verts), tuple(used), matching)
    return None


def swap_along_path(
    G: MixedGraph,
    F1: MatchingForest,
    F2: MatchingForest,
    P: SwapPath,
    exhaustive_limit: int = EXHAUSTIVE_CUT_LIMIT,
) -> tuple[MatchingForest, MatchingForest]:
    """Exchange the two forests' roles on the vertices of ``P``.

    Matching edges of ``P`` switch sides; the arcs of ``B1 | B2`` are re-split
    into branchings whose root sets trade places on ``V(P)``.
    """
    VP = frozenset(P.vertices)
    M1 = F1.edges ^ P.matching_edges
    M2 = F2.edges ^ P.matching_edges
    R1, R2 = roots(G, F1.arcs), roots(G, F2.arcs)
    new_R1 = (R1 - VP) | (R2 & VP)
    new_R2 = (R2 - VP) | (R1 & VP)
    split = repartition_two_branchings(G, F1.arcs, F2.arcs, new_R1, new_R2, exhaustive_limit)
    if split is None:
        raise InvariantError("swap path produced root sets missing a source component")
    out1, out2 = MatchingForest(M1, split[0]), MatchingForest(M2, split[1])
    for F in (out1, out2):
        if not is_matching_forest(G, F):
            raise InvariantError("swap produced an invalid matching forest")
        if len(boundary(G, F)) != len(F) + len(F.edges):
            raise InvariantError("boundary size identity failed")
    return out1, out2


def boundary_sizes(G: MixedGraph, parts: Sequence[MatchingForest]) -> list[int]:
    return [len(boundary(G, F)) for F in parts]


def mf_potential(G: MixedGraph, parts: Sequence[MatchingForest]) -> int:
    """Sum over pairs of parts of the difference in boundary size."""
    sizes = boundary_sizes(G, parts)
    return sum(abs(x - y) for x, y in itertools.combinations(sizes, 2))


def max_gap(values: Sequence[int]) -> int:
    return max(values) - min(values) if values else 0


def check_mf_partition(G: MixedGraph, parts: Sequence[MatchingForest]) -> None:
    edges: set[int] = set()
    arcs: set[int] = set()
    for i, F in enumerate(parts):
        if edges & F.edges or arcs & F.arcs:
            raise PreconditionError(f"part {i} repeats elements of an earlier part")
        if not is_matching_forest(G, F):
            raise PreconditionError(f"part {i} is not a matching forest")
        edges |= F.edges
        arcs |= F.arcs
    if len(edges) != len(G.edges) or len(arcs) != len(G.arcs):
        raise PreconditionError("the parts do not cover every edge and arc")


def equitable_mf_partition(
    G: MixedGraph,
    initial: Sequence[MatchingForest],
    exhaustive_limit: int = EXHAUSTIVE_CUT_LIMIT,
    trace: list | None = None,
) -> list[MatchingForest]:
    """Rebalance a partition into matching forests until any two boundary
    sizes differ by at most two.

    The pair with the largest gap (ties by smallest indices) is updated by one
    path swap per round.  When ``trace`` is a list, one
    ``(i, j, potential_before, potential_after)`` tuple is appended per swap.
    """
    parts = list(initial)
    check_mf_partition(G, parts)
    k = len(parts)
    while True:
        sizes = boundary_sizes(G, parts)
        gap, i, j = max(
            ((abs(sizes[i] - sizes[j]), i, j) for i, j in itertools.combinations(range(k), 2)),
            key=lambda t: (t[0], -t[1], -t[2]),
            default=(0, 0, 0),
        )
        if gap <= 2:
            return parts
        big, small = (i, j) if sizes[i] > sizes[j] else (j, i)
        F1, F2 = parts[big], parts[small]
        H = build_exchange_graph(G, F1, F2)
        P = find_swap_path(H, boundary(G, F1), boundary(G, F2))
        if P is None:
            raise InvariantError(f"no swap path for parts {big} and {small} with gap {gap}")
        before = mf_potential(G, parts)
        parts[big], parts[small] = swap_along_path(G, F1, F2, P, exhaustive_limit)
        after = mf_potential(G, parts)
        if before - after < 2:
            raise InvariantError(f"potential dropped by less than two ({before} -> {after})")
        if trace is not None:
            trace.append((big, small, before, after))
