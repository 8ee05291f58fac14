"""Branchings with prescribed root sets, and partitions into equal-size branchings.

A branching is an arc set in which every vertex has indegree at most one and
which contains no cycle; its roots are the vertices no arc enters.

Disjoint branchings ``B_1, ..., B_k`` with root sets exactly ``R_1, ..., R_k``
exist iff every nonempty vertex set ``X`` is entered by at least as many arcs
as there are indices ``i`` with ``X`` disjoint from ``R_i``.  The constructive
routine here grows the branchings one arc at a time from their roots and only
takes an arc if that cut condition still holds for what remains.  Some such
arc always exists while the condition holds, so the growth never gets stuck.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .errors import InvariantError, PreconditionError
from .graph import MixedGraph, sources_of_pairs

# Above this many vertices the cut condition is checked with max-flow
# instead of by listing every vertex subset.
EXHAUSTIVE_CUT_LIMIT = 16


class _SubsetCuts:
    """Cut condition over all nonempty vertex subsets, held as numpy vectors."""

    def __init__(self, n: int, pairs: Sequence[tuple[int, int]], arcs: Iterable[int], roots: Sequence[int]):
        self.masks = np.arange(1, 1 << n, dtype=np.int64)
        self.member = [((self.masks >> v) & 1).astype(bool) for v in range(n)]
        self.pairs = pairs
        self.indeg = np.zeros(len(self.masks), dtype=np.int64)
        for a in arcs:
            self.indeg += self._enters(a)
        self.roots = list(roots)
        self.demand = np.zeros(len(self.masks), dtype=np.int64)
        for r in self.roots:
            self.demand += (self.masks & r) == 0

    def _enters(self, a: int) -> np.ndarray:
        t, h = self.pairs[a]
        return self.member[h] & ~self.member[t]

    def feasible(self) -> bool:
        return bool(np.all(self.indeg >= self.demand))

    def try_grow(self, a: int, i: int) -> bool:
        """Commit arc ``a`` to branching ``i`` if what remains stays feasible."""
        h = self.pairs[a][1]
        relieved = ((self.masks & self.roots[i]) == 0) & self.member[h]
        indeg = self.indeg - self._enters(a)
        demand = self.demand - relieved
        if np.all(indeg >= demand):
            self.indeg, self.demand = indeg, demand
            self.roots[i] |= 1 << h
            return True
        return False


class _FlowCuts:
    """Same contract as :class:`_SubsetCuts`, decided by ``n`` max-flow runs."""

    def __init__(self, n: int, pairs: Sequence[tuple[int, int]], arcs: Iterable[int], roots: Sequence[int]):
        self.n = n
        self.pairs = pairs
        self.arcs = set(arcs)
        self.roots = list(roots)

    def _check(self, arcs: set[int], roots: Sequence[int]) -> bool:
        k = len(roots)
        if k == 0:
            return True
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        for a in arcs:
            t, h = self.pairs[a]
            cap = g[t][h]["capacity"] + 1 if g.has_edge(t, h) else 1
            g.add_edge(t, h, capacity=cap)
        for i, r in enumerate(roots):
            g.add_edge("s", ("r", i), capacity=1)
            for v in range(self.n):
                if r >> v & 1:
                    g.add_edge(("r", i), v)
        return all(nx.maximum_flow_value(g, "s", v) >= k for v in range(self.n))

    def feasible(self) -> bool:
        return self._check(self.arcs, self.roots)

    def try_grow(self, a: int, i: int) -> bool:
        h = self.pairs[a][1]
        arcs = self.arcs - {a}
        roots = list(self.roots)
        roots[i] |= 1 << h
        if self._check(arcs, roots):
            self.arcs, self.roots = arcs, roots
            return True
        return False


def pack_branchings(
    n: int,
    pairs: Sequence[tuple[int, int]],
    arcs: Iterable[int],
    roots: Sequence[Iterable[int]],
    exhaustive_limit: int = EXHAUSTIVE_CUT_LIMIT,
) -> list[list[int]] | None:
    """Find disjoint branchings inside ``arcs`` with root sets exactly ``roots``.

    ``pairs[a]`` is the ``(tail, head)`` of arc id ``a``.  Arcs not needed by
    any branching are left unused.  Returns one list of arc ids per root set,
    or ``None`` when no such family exists.
    """
    arcs = sorted(set(arcs))
    masks = [sum(1 << v for v in set(r)) for r in roots]
    cuts_cls = _SubsetCuts if n <= exhaustive_limit else _FlowCuts
    cuts = cuts_cls(n, pairs, arcs, masks)
    if not cuts.feasible():
        return None

    full = (1 << n) - 1
    remaining = list(arcs)
    out: list[list[int]] = []
    for i in range(len(masks)):
        reached = masks[i]
        chosen: list[int] = []
        while reached != full:
            for a in remaining:
                t, h = pairs[a]
                if reached >> t & 1 and not reached >> h & 1 and cuts.try_grow(a, i):
                    reached |= 1 << h
                    chosen.append(a)
                    remaining.remove(a)
                    break
            else:
                raise InvariantError(f"branching growth stalled for root set {i}")
        out.append(chosen)
    return out


def is_branching(D: MixedGraph, B: Iterable[int]) -> bool:
    """True iff every vertex has indegree <= 1 in ``B`` and ``B`` has no cycle."""
    B = list(B)
    D.check_arcs(B)
    if len(set(B)) != len(B):
        return False
    parent = list(range(D.n))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    entered = [False] * D.n
    for a in B:
        t, h = D.arcs[a]
        if entered[h]:
            return False
        entered[h] = True
        rt, rh = find(t), find(h)
        if rt == rh:
            return False
        parent[rt] = rh
    return True


def roots(D: MixedGraph, B: Iterable[int]) -> frozenset[int]:
    """Vertices not entered by any arc of ``B``."""
    heads = {D.arcs[a][1] for a in B}
    return frozenset(v for v in range(D.n) if v not in heads)


def disjoint_branchings_with_roots(
    D: MixedGraph,
    root_sets: Sequence[Iterable[int]],
    arcs: Iterable[int] | None = None,
    exhaustive_limit: int = EXHAUSTIVE_CUT_LIMIT,
) -> list[frozenset[int]] | None:
    """Partition ``arcs`` (default: all arcs of ``D``) into branchings whose
    root sets are exactly ``root_sets``.

    Requires ``sum(n - |R_i|) == |arcs|``, so that any solution uses every
    arc.  Returns ``None`` when the instance is infeasible.
    """
    arcs = list(range(len(D.arcs))) if arcs is None else list(arcs)
    D.check_arcs(arcs)
    root_sets = [frozenset(r) for r in root_sets]
    for i, r in enumerate(root_sets):
        if any(not 0 <= v < D.n for v in r):
            raise PreconditionError(f"root set {i} has a vertex outside [0, {D.n})")
    need = sum(D.n - len(r) for r in root_sets)
    if need != len(arcs):
        raise PreconditionError(f"root sets call for {need} arcs but {len(arcs)} arcs were given")
    packed = pack_branchings(D.n, D.arcs, arcs, root_sets, exhaustive_limit)
    if packed is None:
        return None
    return [frozenset(p) for p in packed]


def _check_pair(D: MixedGraph, B1: frozenset[int], B2: frozenset[int]) -> None:
    if B1 & B2:
        raise PreconditionError(f"branchings share arcs {sorted(B1 & B2)}")
    for name, B in (("B1", B1), ("B2", B2)):
        if not is_branching(D, B):
            raise PreconditionError(f"{name} is not a branching")


def repartition_two_branchings(
    D: MixedGraph,
    B1: Iterable[int],
    B2: Iterable[int],
    R1: Iterable[int],
    R2: Iterable[int],
    exhaustive_limit: int = EXHAUSTIVE_CUT_LIMIT,
) -> tuple[frozenset[int], frozenset[int]] | None:
    """Re-split ``B1 | B2`` into two branchings with root sets ``R1`` and ``R2``.

    The new root sets must have the same union and the same intersection as
    the old ones.  The split exists iff every source component of
    ``(V, B1 | B2)`` meets both ``R1`` and ``R2``; ``None`` is returned
    otherwise.
    """
    B1, B2 = frozenset(B1), frozenset(B2)
    R1, R2 = frozenset(R1), frozenset(R2)
    _check_pair(D, B1, B2)
    old1, old2 = roots(D, B1), roots(D, B2)
    if R1 | R2 != old1 | old2 or R1 & R2 != old1 & old2:
        raise PreconditionError("new root sets must keep the union and intersection of the old ones")
    union = sorted(B1 | B2)
    for X in sources_of_pairs(D.n, (D.arcs[a] for a in union)):
        if not (X & R1) or not (X & R2):
            return None
    packed = pack_branchings(D.n, D.arcs, union, [R1, R2], exhaustive_limit)
    if packed is None:
        raise InvariantError("source-component condition holds but no split was found")
    return frozenset(packed[0]), frozenset(packed[1])


def size_spread(sizes: Sequence[int]) -> int:
    return sum(abs(x - y) for x, y in itertools.combinations(sizes, 2))


def _balanced_roots(D: MixedGraph, B1: frozenset[int], B2: frozenset[int]) -> tuple[set[int], set[int]]:
    R1, R2 = roots(D, B1), roots(D, B2)
    new1, new2 = set(R1 & R2), set(R1 & R2)
    reserved = set()
    for X in sources_of_pairs(D.n, (D.arcs[a] for a in B1 | B2)):
        if len(X) < 2:
            continue
        r1, r2 = min(X & R1), min(X & R2)
        new1.add(r1)
        new2.add(r2)
        reserved |= {r1, r2}
    for v in sorted((R1 ^ R2) - reserved):
        (new1 if len(new1) <= len(new2) else new2).add(v)
    return new1, new2


def equitable_branching_partition(
    D: MixedGraph,
    initial: Sequence[Iterable[int]],
    exhaustive_limit: int = EXHAUSTIVE_CUT_LIMIT,
    trace: list | None = None,
) -> list[frozenset[int]]:
    """Rebalance a partition of all arcs into ``k`` branchings so that every
    part has ``floor(|A|/k)`` or ``ceil(|A|/k)`` arcs.

    The pair with the largest size difference is re-split until no two parts
    differ by more than one.  When ``trace`` is a list, one
    ``(i, j, spread_before, spread_after)`` tuple is appended per re-split.
    """
    parts = [frozenset(p) for p in initial]
    _check_arc_partition(D, parts)
    for i, p in enumerate(parts):
        if not is_branching(D, p):
            raise PreconditionError(f"part {i} is not a branching")
    k = len(parts)
    while True:
        sizes = [len(p) for p in parts]
        gap, i, j = max(
            ((abs(sizes[i] - sizes[j]), i, j) for i, j in itertools.combinations(range(k), 2)),
            key=lambda t: (t[0], -t[1], -t[2]),
            default=(0, 0, 0),
        )
        if gap <= 1:
            return parts
        before = size_spread(sizes)
        new1, new2 = _balanced_roots(D, parts[i], parts[j])
        split = repartition_two_branchings(D, parts[i], parts[j], new1, new2, exhaustive_limit)
        if split is None:
            raise InvariantError("balanced root sets were rejected")
        parts[i], parts[j] = split
        after = size_spread([len(p) for p in parts])
        if after >= before:
            raise InvariantError(f"size spread did not decrease ({before} -> {after})")
        if trace is not None:
            trace.append((i, j, before, after))


def _check_arc_partition(D: MixedGraph, parts: Sequence[frozenset[int]]) -> None:
    seen: set[int] = set()
    for i, p in enumerate(parts):
        D.check_arcs(p)
        if seen & p:
            raise PreconditionError(f"part {i} repeats arcs {sorted(seen & p)}")
        seen |= p
    if len(seen) != len(D.arcs):
        missing = sorted(set(range(len(D.arcs))) - seen)
        raise PreconditionError(f"arcs {missing} are in no part")
