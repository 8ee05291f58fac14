"""Mixed graphs together with component and indegree helpers.

Vertices are the integers ``0 .. n-1``.  Undirected edges and directed arcs
are kept in two separate tuples; an element of the graph is identified by its
kind (``"edge"`` or ``"arc"``) and its index in the corresponding tuple, so
parallel edges and parallel arcs are distinct elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

EDGE = "edge"
ARC = "arc"


class Elem(NamedTuple):
    kind: str
    index: int


@dataclass(frozen=True)
class MixedGraph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()
    arcs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        object.__setattr__(self, "arcs", tuple((int(t), int(h)) for t, h in self.arcs))
        if self.n < 0:
            raise ValueError(f"n must be nonnegative, got {self.n}")
        for kind, pairs in ((EDGE, self.edges), (ARC, self.arcs)):
            for i, (u, v) in enumerate(pairs):
                if not (0 <= u < self.n and 0 <= v < self.n):
                    raise ValueError(f"{kind} {i} = ({u}, {v}) has an endpoint outside [0, {self.n})")
                if u == v:
                    raise ValueError(f"{kind} {i} = ({u}, {v}) is a self-loop")

    @classmethod
    def digraph(cls, n: int, arcs: Iterable[tuple[int, int]]) -> MixedGraph:
        return cls(n, (), tuple(arcs))

    @property
    def is_digraph(self) -> bool:
        return not self.edges

    def elements(self) -> list[Elem]:
        return [Elem(EDGE, i) for i in range(len(self.edges))] + [
            Elem(ARC, i) for i in range(len(self.arcs))
        ]

    def head(self, a: int) -> int:
        return self.arcs[a][1]

    def tail(self, a: int) -> int:
        return self.arcs[a][0]

    def check_arcs(self, arcs: Iterable[int]) -> None:
        for a in arcs:
            if not 0 <= a < len(self.arcs):
                raise IndexError(f"arc index {a} out of range [0, {len(self.arcs)})")


def _tarjan(n: int, succ: Sequence[Sequence[int]]) -> list[list[int]]:
    # Iterative Tarjan; recursion depth would otherwise scale with n.
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            nbrs = succ[v]
            while i < len(nbrs):
                w = nbrs[i]
                i += 1
                if index[w] == -1:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return out


def scc_of_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> list[frozenset[int]]:
    """Strong components of ``(range(n), pairs)``, ordered by smallest member."""
    succ: list[list[int]] = [[] for _ in range(n)]
    for t, h in pairs:
        succ[t].append(h)
    comps = [frozenset(c) for c in _tarjan(n, succ)]
    comps.sort(key=min)
    return comps


def sources_of_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> list[frozenset[int]]:
    pairs = list(pairs)
    comps = scc_of_pairs(n, pairs)
    label = [0] * n
    for c, comp in enumerate(comps):
        for v in comp:
            label[v] = c
    entered = [False] * len(comps)
    for t, h in pairs:
        if label[t] != label[h]:
            entered[label[h]] = True
    return [comp for c, comp in enumerate(comps) if not entered[c]]


def _pairs(D: MixedGraph, arcs: Iterable[int] | None) -> list[tuple[int, int]]:
    if arcs is None:
        return list(D.arcs)
    arcs = list(arcs)
    D.check_arcs(arcs)
    return [D.arcs[a] for a in arcs]


def strong_components(D: MixedGraph, arcs: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Strongly connected components of ``D`` restricted to ``arcs``.

    Undirected edges are ignored.  Components are ordered by their smallest
    vertex.
    """
    return scc_of_pairs(D.n, _pairs(D, arcs))


def source_components(D: MixedGraph, arcs: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Strong components that no arc enters, ordered by smallest vertex."""
    return sources_of_pairs(D.n, _pairs(D, arcs))


def indegree_vector(D: MixedGraph, arcs: Iterable[int]) -> list[int]:
    """Per-vertex count of arcs in ``arcs`` with that vertex as head."""
    deg = [0] * D.n
    for a in arcs:
        if not 0 <= a < len(D.arcs):
            raise IndexError(f"arc index {a} out of range [0, {len(D.arcs)})")
        deg[D.arcs[a][1]] += 1
    return deg
