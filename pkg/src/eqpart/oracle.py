"""Exhaustive enumerators and seeded instance generators for testing.

Everything here is deliberately simple and exponential; it exists to check
the constructive routines on small instances.  Randomness comes from numpy's
``PCG64`` bit generator seeded with the configured integer, so a seed always
reproduces the same instance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bbranchings import is_b_branching
from .branchings import is_branching
from .errors import SizeLimitError
from .graph import MixedGraph, indegree_vector
from .matching_forests import MatchingForest, boundary, is_matching_forest

ENUMERATION_LIMIT = 20

BRANCHING = "branching"
MATCHING_FOREST = "matching-forest"
B_BRANCHING = "b-branching"
KINDS = (BRANCHING, MATCHING_FOREST, B_BRANCHING)


def _guard(m: int, limit: int) -> None:
    if m > limit:
        raise SizeLimitError(f"{m} elements exceed the enumeration limit {limit}")


def enumerate_matching_forests(G: MixedGraph, limit: int = ENUMERATION_LIMIT) -> list[MatchingForest]:
    """All matching forests of ``G``, ordered by size and then lexicographically
    by (edge indices, arc indices)."""
    ne, na = len(G.edges), len(G.arcs)
    _guard(ne + na, limit)
    out = []
    for size in range(ne + na + 1):
        for combo in itertools.combinations(range(ne + na), size):
            F = MatchingForest.of((i for i in combo if i < ne), (i - ne for i in combo if i >= ne))
            if is_matching_forest(G, F):
                out.append(F)
    return out


def enumerate_b_branchings(
    D: MixedGraph, b: Sequence[int] | None = None, limit: int = ENUMERATION_LIMIT
) -> list[frozenset[int]]:
    """All b-branchings of ``D`` (branchings when ``b`` is omitted)."""
    m = len(D.arcs)
    _guard(m, limit)
    out = []
    for size in range(m + 1):
        for combo in itertools.combinations(range(m), size):
            ok = is_branching(D, combo) if b is None else is_b_branching(D, b, combo)
            if ok:
                out.append(frozenset(combo))
    return out


def check_delta_matroid(G: MixedGraph, limit: int = ENUMERATION_LIMIT) -> bool:
    """Check the symmetric exchange axiom on the boundaries of all matching forests.

    For every two boundaries ``U1, U2`` and every ``u`` in their symmetric
    difference there must be ``u'`` in it (possibly ``u`` itself) such that
    ``U1 ^ {u, u'}`` is again a boundary.
    """
    family = {sum(1 << v for v in boundary(G, F)) for F in enumerate_matching_forests(G, limit)}
    for U1 in family:
        for U2 in family:
            diff = U1 ^ U2
            bits = [1 << v for v in range(G.n) if diff >> v & 1]
            for u in bits:
                if not any(U1 ^ (u | w) in family for w in bits):
                    return False
    return True


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int
    n: int
    k: int
    edge_density: float = 0.5
    arc_density: float = 0.6
    b_max: int = 1
    skew: float = 0.0  # part i keeps a (1 - skew * i / (k - 1)) share of the densities


def _random_branching(rng: np.random.Generator, n: int, allowed_heads: Sequence[int], p: float) -> list[tuple[int, int]]:
    order = [int(v) for v in rng.permutation(n)]
    pos = {v: i for i, v in enumerate(order)}
    allowed = set(allowed_heads)
    arcs = []
    for v in order:
        if v in allowed and pos[v] > 0 and rng.random() < p:
            arcs.append((order[int(rng.integers(pos[v]))], v))
    return arcs


def _random_matching(rng: np.random.Generator, n: int, p: float) -> list[tuple[int, int]]:
    verts = [int(v) for v in rng.permutation(n)]
    edges = []
    for u, v in zip(verts[::2], verts[1::2]):
        if rng.random() < p:
            edges.append((min(u, v), max(u, v)))
    return edges


def _random_b_branching(
    rng: np.random.Generator, n: int, b: Sequence[int], p: float
) -> list[tuple[int, int]]:
    arcs: list[tuple[int, int]] = []
    budget = sum(b)
    for _ in range(3 * budget):
        if rng.random() > p:
            continue
        t, h = (int(x) for x in rng.choice(n, size=2, replace=False))
        trial = MixedGraph.digraph(n, arcs + [(t, h)])
        if is_b_branching(trial, b, range(len(trial.arcs))):
            arcs.append((t, h))
    return arcs


def generate_partitionable(config: GeneratorConfig, kind: str) -> tuple[MixedGraph, list, list[int] | None]:
    """Random instance built as the union of ``k`` valid parts.

    Returns ``(graph, partition, b)``.  The partition lists arc-index sets for
    the branching kinds and :class:`MatchingForest` values for matching
    forests; ``b`` is ``None`` except for b-branchings.  Generation retries
    with a derived stream until at least one element is produced.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if config.n < 2 or config.k < 1:
        raise ValueError("need n >= 2 and k >= 1")
    if not 0.0 <= config.skew <= 1.0:
        raise ValueError("skew must lie in [0, 1]")
    rng = np.random.Generator(np.random.PCG64(config.seed))
    n, k = config.n, config.k
    while True:
        b = None
        if kind == B_BRANCHING:
            b = [int(x) for x in rng.integers(1, config.b_max + 1, size=n)]
        edge_parts: list[list[tuple[int, int]]] = []
        arc_parts: list[list[tuple[int, int]]] = []
        for i in range(k):
            scale = 1.0 - config.skew * i / max(1, k - 1)
            pe, pa = config.edge_density * scale, config.arc_density * scale
            if kind == MATCHING_FOREST:
                M = _random_matching(rng, n, pe)
                covered = {v for e in M for v in e}
                free = [v for v in range(n) if v not in covered]
                edge_parts.append(M)
                arc_parts.append(_random_branching(rng, n, free, pa))
            elif kind == BRANCHING:
                edge_parts.append([])
                arc_parts.append(_random_branching(rng, n, range(n), pa))
            else:
                edge_parts.append([])
                arc_parts.append(_random_b_branching(rng, n, b, pa))
        if any(edge_parts) or any(arc_parts):
            break

    edges, arcs = [], []
    edge_ids, arc_ids = [], []
    for M, B in zip(edge_parts, arc_parts):
        edge_ids.append(list(range(len(edges), len(edges) + len(M))))
        arc_ids.append(list(range(len(arcs), len(arcs) + len(B))))
        edges += M
        arcs += B
    G = MixedGraph(n, tuple(edges), tuple(arcs))
    if kind == MATCHING_FOREST:
        return G, [MatchingForest.of(e, a) for e, a in zip(edge_ids, arc_ids)], None
    return G, [frozenset(a) for a in arc_ids], b


def _exact_covers(universe: int, masks: Sequence[int], k: int):
    """Yield every cover of ``universe`` by at most ``k`` pairwise disjoint
    nonempty masks, as lists of masks (unordered: each cover once)."""
    by_low: dict[int, list[int]] = {}
    for m in sorted(set(masks)):
        if m:
            by_low.setdefault(m & -m, []).append(m)

    def rec(left: int, chosen: list[int]):
        if not left:
            yield list(chosen)
            return
        if len(chosen) == k:
            return
        low = left & -left
        for m in by_low.get(low, ()):
            if m & ~left == 0:
                chosen.append(m)
                yield from rec(left & ~m, chosen)
                chosen.pop()

    yield from rec(universe, [])


def _mf_masks(G: MixedGraph, limit: int) -> tuple[list[int], dict[int, MatchingForest]]:
    ne = len(G.edges)
    lookup = {}
    for F in enumerate_matching_forests(G, limit):
        m = sum(1 << e for e in F.edges) | sum(1 << (ne + a) for a in F.arcs)
        lookup[m] = F
    return list(lookup), lookup


def _arc_masks(D: MixedGraph, b: Sequence[int] | None, limit: int) -> list[int]:
    return [sum(1 << a for a in B) for B in enumerate_b_branchings(D, b, limit)]


def _pairwise_gap(values: Sequence[int]) -> int:
    return max(values) - min(values) if values else 0


def brute_force_min_gap(
    G: MixedGraph,
    k: int,
    criterion: str,
    b: Sequence[int] | None = None,
    limit: int = ENUMERATION_LIMIT,
) -> int | None:
    """Smallest achievable maximum pairwise gap over all partitions into ``k``
    valid parts.

    ``criterion`` is ``"boundary"`` (matching forests, boundary sizes),
    ``"size"`` (branchings, or b-branchings when ``b`` is given, part sizes)
    or ``"indegree"`` (largest per-vertex indegree gap).  Returns ``None``
    when no partition into ``k`` parts exists.
    """
    if k < 1:
        raise ValueError("k must be positive")
    best = None
    if criterion == "boundary":
        masks, lookup = _mf_masks(G, limit)
        universe = (1 << (len(G.edges) + len(G.arcs))) - 1
        for cover in _exact_covers(universe, masks, k):
            parts = [lookup[m] for m in cover] + [MatchingForest()] * (k - len(cover))
            gap = _pairwise_gap([len(boundary(G, F)) for F in parts])
            best = gap if best is None else min(best, gap)
            if best == 0:
                break
        return best
    if criterion not in ("size", "indegree"):
        raise ValueError(f"unknown criterion {criterion!r}")
    masks = _arc_masks(G, b, limit)
    universe = (1 << len(G.arcs)) - 1
    for cover in _exact_covers(universe, masks, k):
        parts = [[a for a in range(len(G.arcs)) if m >> a & 1] for m in cover] + [[]] * (k - len(cover))
        if criterion == "size":
            gap = _pairwise_gap([len(p) for p in parts])
        else:
            degs = [indegree_vector(G, p) for p in parts]
            gap = max((_pairwise_gap([d[v] for d in degs]) for v in range(G.n)), default=0)
        best = gap if best is None else min(best, gap)
        if best == 0:
            break
    return best


def initial_mf_partition(G: MixedGraph, k: int, limit: int = ENUMERATION_LIMIT) -> list[MatchingForest] | None:
    """Any partition of ``E | A`` into ``k`` matching forests, found by exhaustive
    exact cover; ``None`` if there is none."""
    masks, lookup = _mf_masks(G, limit)
    universe = (1 << (len(G.edges) + len(G.arcs))) - 1
    for cover in _exact_covers(universe, masks, k):
        return [lookup[m] for m in cover] + [MatchingForest()] * (k - len(cover))
    return None


def generate_idp_instance(config: GeneratorConfig, kappa: int, arcs: int = 8):
    """Random ``(D, b, x, ell, vprime, bprime)`` where ``x`` is a sum of
    ``kappa`` b-branchings that all have size ``ell`` and indegree
    ``bprime`` on ``vprime``.

    The digraph has ``arcs`` random arcs; all its b-branchings are listed,
    one is drawn, and the rest are drawn with replacement among those
    matching it on size and on indegrees over a random vertex subset.
    """
    rng = np.random.Generator(np.random.PCG64(config.seed))
    n = config.n
    pairs = []
    for _ in range(arcs):
        t, h = (int(v) for v in rng.choice(n, size=2, replace=False))
        pairs.append((t, h))
    D = MixedGraph.digraph(n, pairs)
    b = [int(v) for v in rng.integers(1, config.b_max + 1, size=n)]
    pool = enumerate_b_branchings(D, b)
    first = pool[int(rng.integers(len(pool)))]
    vprime = tuple(sorted(int(v) for v in range(n) if rng.random() < 0.5))
    deg0 = indegree_vector(D, first)
    same = [
        B for B in pool
        if len(B) == len(first) and all(indegree_vector(D, B)[v] == deg0[v] for v in vprime)
    ]
    chosen = [first] + [same[int(rng.integers(len(same)))] for _ in range(kappa - 1)]
    x = [0] * len(pairs)
    for B in chosen:
        for a in B:
            x[a] += 1
    bprime = tuple(deg0[v] for v in vprime)
    return D, b, x, len(first), vprime, bprime
