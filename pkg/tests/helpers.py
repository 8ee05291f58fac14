"""Independent reference implementations used as test oracles.

These deliberately avoid the package's own algorithms: subsets are scanned
exhaustively, and components and branchings come from networkx.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import networkx as nx

from eqpart.graph import MixedGraph


def nx_multidigraph(D: MixedGraph, arcs: Iterable[int] | None = None) -> nx.MultiDiGraph:
    g = nx.MultiDiGraph()
    g.add_nodes_from(range(D.n))
    for a in range(len(D.arcs)) if arcs is None else arcs:
        g.add_edge(*D.arcs[a])
    return g


def ref_is_branching(D: MixedGraph, B: Iterable[int]) -> bool:
    return nx.is_branching(nx_multidigraph(D, list(B)))


def ref_is_b_branching(D: MixedGraph, b: Sequence[int], B: Iterable[int]) -> bool:
    B = list(B)
    indeg = [0] * D.n
    for a in B:
        indeg[D.arcs[a][1]] += 1
    if any(d > c for d, c in zip(indeg, b)):
        return False
    for mask in range(1, 1 << D.n):
        inside = sum(1 for a in B if mask >> D.arcs[a][0] & 1 and mask >> D.arcs[a][1] & 1)
        cap = sum(b[v] for v in range(D.n) if mask >> v & 1)
        if inside > cap - 1:
            return False
    return True


def ref_tight_core(D: MixedGraph, b: Sequence[int], B: Iterable[int]) -> frozenset[int]:
    """Union of all X with |B[X]| = b(X); the maximal such set is their union."""
    B = list(B)
    core = 0
    for mask in range(1, 1 << D.n):
        inside = sum(1 for a in B if mask >> D.arcs[a][0] & 1 and mask >> D.arcs[a][1] & 1)
        if inside >= sum(b[v] for v in range(D.n) if mask >> v & 1):
            core |= mask
    return frozenset(v for v in range(D.n) if core >> v & 1)


def ref_roots(D: MixedGraph, B: Iterable[int]) -> frozenset[int]:
    heads = {D.arcs[a][1] for a in B}
    return frozenset(set(range(D.n)) - heads)


def ref_indegree(D: MixedGraph, B: Iterable[int]) -> list[int]:
    g = nx_multidigraph(D, list(B))
    return [g.in_degree(v) for v in range(D.n)]


def ref_source_components(D: MixedGraph, arcs: Iterable[int] | None = None) -> list[frozenset[int]]:
    g = nx_multidigraph(D, arcs)
    cond = nx.condensation(g)
    out = [frozenset(cond.nodes[c]["members"]) for c in cond.nodes if cond.in_degree(c) == 0]
    return sorted(out, key=min)


def two_colorings(arcs: Sequence[int]):
    for colors in itertools.product((0, 1), repeat=len(arcs)):
        yield (
            [a for a, c in zip(arcs, colors) if c == 0],
            [a for a, c in zip(arcs, colors) if c == 1],
        )


def ref_matching_forests(G: MixedGraph) -> set[tuple[frozenset[int], frozenset[int]]]:
    """Recursive include/exclude enumeration with incremental validity."""
    ne, na = len(G.edges), len(G.arcs)
    out = set()

    def ok(edges, arcs):
        cov = [v for e in edges for v in G.edges[e]]
        if len(cov) != len(set(cov)):
            return False
        heads = [G.arcs[a][1] for a in arcs]
        if len(heads) != len(set(heads)) or set(cov) & set(heads):
            return False
        ug = nx.MultiGraph()
        ug.add_nodes_from(range(G.n))
        ug.add_edges_from(G.arcs[a] for a in arcs)
        return nx.is_forest(ug) if arcs else True

    def rec(i, edges, arcs):
        if i == ne + na:
            out.add((frozenset(edges), frozenset(arcs)))
            return
        rec(i + 1, edges, arcs)
        if i < ne:
            if ok(edges + [i], arcs):
                rec(i + 1, edges + [i], arcs)
        elif ok(edges, arcs + [i - ne]):
            rec(i + 1, edges, arcs + [i - ne])

    rec(0, [], [])
    return out


def ref_boundary(G: MixedGraph, edges: Iterable[int], arcs: Iterable[int]) -> frozenset[int]:
    return frozenset(v for e in edges for v in G.edges[e]) | frozenset(G.arcs[a][1] for a in arcs)


def ref_b_potential(D: MixedGraph, parts: Sequence[Iterable[int]]) -> int:
    """Direct transcription of the potential with Fractions, no shared helpers."""
    from fractions import Fraction

    parts = [list(p) for p in parts]
    k = len(parts)
    m = len(D.arcs)
    total = ref_indegree(D, range(m))

    def dist(x, share):
        lo, hi = share.numerator // share.denominator, -(-share.numerator // share.denominator)
        return min(abs(x - lo), abs(x - hi))

    value = 0
    for p in parts:
        value += dist(len(p), Fraction(m, k))
        deg = ref_indegree(D, p)
        value += sum(dist(deg[v], Fraction(total[v], k)) for v in range(D.n))
    return value


def random_digraph(rng, n: int, m: int) -> MixedGraph:
    arcs = []
    for _ in range(m):
        t, h = rng.sample(range(n), 2)
        arcs.append((t, h))
    return MixedGraph.digraph(n, arcs)


def random_mixed(rng, n: int, ne: int, na: int) -> MixedGraph:
    edges = [tuple(sorted(rng.sample(range(n), 2))) for _ in range(ne)]
    arcs = [tuple(rng.sample(range(n), 2)) for _ in range(na)]
    return MixedGraph(n, tuple(edges), tuple(arcs))
