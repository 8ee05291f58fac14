"""b-branchings and partitions balanced in size and in every indegree.

For a capacity vector ``b`` (positive integers), an arc set ``B`` is a
b-branching when every vertex ``v`` has indegree at most ``b(v)`` and every
nonempty vertex set ``X`` spans at most ``b(X) - 1`` arcs of ``B``.  With
``b`` all ones these are exactly the branchings.

Under the indegree caps, the sparsity condition fails iff some vertex set is
saturated from the inside, i.e. every member has all ``b(v)`` of its entering
arcs coming from within the set.  Equivalently, ``B`` is a b-branching iff
every vertex can be reached in ``(V, B)`` from some vertex with spare
capacity ``d_B(v) < b(v)``.  The repartition routine builds on that second
form: with prescribed indegree vectors, each side needs a spanning branching
rooted at its spare-capacity vertices, and the two branchings are found with
the disjoint-branchings routine.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .branchings import EXHAUSTIVE_CUT_LIMIT, pack_branchings
from .errors import InvariantError, PreconditionError
from .graph import MixedGraph, indegree_vector, sources_of_pairs

FALLBACK_THRESHOLD = 24


def _check_b(D: MixedGraph, b: Sequence[int]) -> None:
    if len(b) != D.n:
        raise PreconditionError(f"capacity vector has length {len(b)}, expected {D.n}")
    if any(x < 1 for x in b):
        raise PreconditionError("capacities must be positive integers")


def tight_core(D: MixedGraph, b: Sequence[int], B: Iterable[int]) -> frozenset[int]:
    """Largest vertex set in which every member has internal indegree ``b(v)``.

    Found by repeatedly deleting vertices whose indegree from inside the
    current set is below capacity.  Empty exactly when ``B`` (already within
    the indegree caps) satisfies the sparsity condition.
    """
    B = list(B)
    deg = indegree_vector(D, B)
    if any(d > c for d, c in zip(deg, b)):
        raise PreconditionError("arc set exceeds an indegree cap")
    out_arcs: list[list[int]] = [[] for _ in range(D.n)]
    for a in B:
        t, h = D.arcs[a]
        out_arcs[t].append(h)
    alive = [True] * D.n
    queue = [v for v in range(D.n) if deg[v] < b[v]]
    for v in queue:
        alive[v] = False
    while queue:
        t = queue.pop()
        for h in out_arcs[t]:
            if alive[h]:
                deg[h] -= 1
                if deg[h] < b[h]:
                    alive[h] = False
                    queue.append(h)
    return frozenset(v for v in range(D.n) if alive[v])


def is_b_branching(D: MixedGraph, b: Sequence[int], B: Iterable[int]) -> bool:
    B = list(B)
    if len(set(B)) != len(B):
        return False
    deg = indegree_vector(D, B)
    if any(d > c for d, c in zip(deg, b)):
        return False
    return not tight_core(D, b, B)


def build_indegree_targets(
    D: MixedGraph, b: Sequence[int], B1: Iterable[int], B2: Iterable[int]
) -> tuple[list[int], list[int]]:
    """Split the combined indegrees of two disjoint b-branchings in half.

    Each vertex gets ``floor`` and ``ceil`` of half its combined indegree.
    The odd halves are handed out alternately, one side then the other, in
    the order: source components of ``(V, B1 | B2)`` by smallest vertex
    (members by id), then the remaining vertices by id.  This makes the two
    targets agree on source components with an even total, differ by exactly
    one on those with an odd total (with the surplus alternating between
    sides), and differ by at most one overall.
    """
    B1, B2 = list(B1), list(B2)
    _check_b(D, b)
    if set(B1) & set(B2):
        raise PreconditionError("the two b-branchings share arcs")
    for name, B in (("B1", B1), ("B2", B2)):
        if not is_b_branching(D, b, B):
            raise PreconditionError(f"{name} is not a b-branching")
    d1, d2 = indegree_vector(D, B1), indegree_vector(D, B2)
    total = [x + y for x, y in zip(d1, d2)]
    sources = sources_of_pairs(D.n, (D.arcs[a] for a in B1 + B2))
    inside = set().union(*sources) if sources else set()
    order = [v for X in sources for v in sorted(X)] + [v for v in range(D.n) if v not in inside]

    t1, t2 = [0] * D.n, [0] * D.n
    side = 0
    for v in order:
        half, odd = divmod(total[v], 2)
        t1[v] = t2[v] = half
        if odd:
            (t1, t2)[side][v] += 1
            side ^= 1

    for X in sources:
        cap = sum(b[v] for v in X)
        if sum(t1[v] for v in X) >= cap or sum(t2[v] for v in X) >= cap:
            raise InvariantError(f"targets saturate source component {sorted(X)}")
    if any(x > c for x, c in zip(t1, b)) or any(x > c for x, c in zip(t2, b)):
        raise InvariantError("targets exceed capacities")
    return t1, t2


def _exhaustive_split(
    D: MixedGraph, b: Sequence[int], arcs: list[int], t1: Sequence[int], t2: Sequence[int]
) -> tuple[frozenset[int], frozenset[int]] | None:
    for colors in itertools.product((0, 1), repeat=len(arcs)):
        s1 = [a for a, c in zip(arcs, colors) if c == 0]
        s2 = [a for a, c in zip(arcs, colors) if c == 1]
        if indegree_vector(D, s1) != list(t1) or indegree_vector(D, s2) != list(t2):
            continue
        if is_b_branching(D, b, s1) and is_b_branching(D, b, s2):
            return frozenset(s1), frozenset(s2)
    return None


def repartition_two_bbranchings(
    D: MixedGraph,
    b: Sequence[int],
    B1: Iterable[int],
    B2: Iterable[int],
    targets: tuple[Sequence[int], Sequence[int]],
    fallback_threshold: int = FALLBACK_THRESHOLD,
    exhaustive_limit: int = EXHAUSTIVE_CUT_LIMIT,
) -> tuple[frozenset[int], frozenset[int]] | None:
    """Re-split ``B1 | B2`` into b-branchings with indegree vectors ``targets``.

    Returns ``None`` if no such split exists.  When ``B1 | B2`` is the union
    of two b-branchings, that happens exactly when a source component ``X``
    of ``(V, B1 | B2)`` has ``t1(X) >= b(X)`` or ``t2(X) >= b(X)``.

    ``fallback_threshold`` bounds the number of arcs for which a brute-force
    search over all 2-colorings is attempted should the constructive route
    ever stall; it is a safety net, not part of the normal path.
    """
    B1, B2 = list(B1), list(B2)
    _check_b(D, b)
    t1, t2 = list(targets[0]), list(targets[1])
    if set(B1) & set(B2):
        raise PreconditionError("the two arc sets overlap")
    union = sorted(B1 + B2)
    total = indegree_vector(D, union)
    if len(t1) != D.n or len(t2) != D.n:
        raise PreconditionError("target vectors have the wrong length")
    if any(x < 0 for x in t1 + t2):
        raise PreconditionError("targets must be nonnegative")
    if [x + y for x, y in zip(t1, t2)] != total:
        raise PreconditionError("targets do not add up to the indegrees of B1 | B2")
    if any(x > c for x, c in zip(t1, b)) or any(x > c for x, c in zip(t2, b)):
        raise PreconditionError("targets exceed capacities")

    spare1 = [v for v in range(D.n) if t1[v] < b[v]]
    spare2 = [v for v in range(D.n) if t2[v] < b[v]]
    try:
        trees = pack_branchings(D.n, D.arcs, union, [spare1, spare2], exhaustive_limit)
    except InvariantError:
        if len(union) > fallback_threshold:
            raise
        return _exhaustive_split(D, b, union, t1, t2)
    if trees is None:
        return None

    side1, side2 = set(trees[0]), set(trees[1])
    need1 = [t1[v] - (0 if t1[v] < b[v] else 1) for v in range(D.n)]
    for a in union:
        if a in side1 or a in side2:
            continue
        h = D.arcs[a][1]
        if need1[h] > 0:
            side1.add(a)
            need1[h] -= 1
        else:
            side2.add(a)
    out1, out2 = frozenset(side1), frozenset(side2)
    if indegree_vector(D, out1) != t1 or indegree_vector(D, out2) != t2:
        raise InvariantError("leftover arcs could not meet the indegree targets")
    if not (is_b_branching(D, b, out1) and is_b_branching(D, b, out2)):
        raise InvariantError("repartition produced an invalid b-branching")
    return out1, out2


def _deviation(x: int, total: int, k: int) -> int:
    lo, hi = total // k, -(-total // k)
    return min(abs(x - lo), abs(x - hi))


def part_deviation(D: MixedGraph, part: Iterable[int], total_deg: Sequence[int], k: int) -> int:
    part = list(part)
    deg = indegree_vector(D, part)
    return _deviation(len(part), len(D.arcs), k) + sum(
        _deviation(deg[v], total_deg[v], k) for v in range(D.n)
    )


def b_potential(D: MixedGraph, parts: Sequence[Iterable[int]]) -> int:
    """Total distance of part sizes and part indegrees from their fair shares.

    Each part contributes the distance of its size from
    ``{floor(|A|/k), ceil(|A|/k)}`` plus, for every vertex, the distance of
    its indegree from ``{floor(d_A(v)/k), ceil(d_A(v)/k)}``.
    """
    parts = [list(p) for p in parts]
    k = len(parts)
    if k == 0:
        return 0
    total_deg = indegree_vector(D, range(len(D.arcs)))
    return sum(part_deviation(D, p, total_deg, k) for p in parts)


def _straddles(x: int, y: int, total: int, k: int) -> bool:
    lo, hi = min(x, y), max(x, y)
    return hi - lo >= 2 and lo * k < total < hi * k


def violating_pairs(D: MixedGraph, parts: Sequence[frozenset[int]]) -> list[tuple[int, int]]:
    """Pairs whose sizes, or whose indegrees at some vertex, are at least two
    apart on opposite sides of the fair share."""
    k = len(parts)
    total_deg = indegree_vector(D, range(len(D.arcs)))
    degs = [indegree_vector(D, p) for p in parts]
    out = []
    for i, j in itertools.combinations(range(k), 2):
        if _straddles(len(parts[i]), len(parts[j]), len(D.arcs), k) or any(
            _straddles(degs[i][v], degs[j][v], total_deg[v], k) for v in range(D.n)
        ):
            out.append((i, j))
    return out


def is_equitable_b_partition(D: MixedGraph, parts: Sequence[Iterable[int]]) -> bool:
    """Every part size and every per-vertex indegree is a floor or ceil of its fair share."""
    parts = [list(p) for p in parts]
    k = len(parts)
    if k == 0:
        return not D.arcs
    total_deg = indegree_vector(D, range(len(D.arcs)))
    return all(part_deviation(D, p, total_deg, k) == 0 for p in parts)


def equitable_b_partition(
    D: MixedGraph,
    b: Sequence[int],
    initial: Sequence[Iterable[int]],
    fallback_threshold: int = FALLBACK_THRESHOLD,
    exhaustive_limit: int = EXHAUSTIVE_CUT_LIMIT,
    trace: list | None = None,
) -> list[frozenset[int]]:
    """Rebalance a partition of all arcs into b-branchings until every part
    size and every per-vertex indegree is a floor or ceil of its fair share.

    Each round re-splits the violating pair with the largest combined
    deviation (ties by smallest indices) toward halved indegree targets.
    When ``trace`` is a list, ``(i, j, potential_before, potential_after)``
    is appended per round.
    """
    _check_b(D, b)
    parts = [frozenset(p) for p in initial]
    seen: set[int] = set()
    for i, p in enumerate(parts):
        D.check_arcs(p)
        if seen & p:
            raise PreconditionError(f"part {i} repeats arcs {sorted(seen & p)}")
        seen |= p
        if not is_b_branching(D, b, p):
            raise PreconditionError(f"part {i} is not a b-branching")
    if len(seen) != len(D.arcs):
        raise PreconditionError(f"arcs {sorted(set(range(len(D.arcs))) - seen)} are in no part")

    k = len(parts)
    total_deg = indegree_vector(D, range(len(D.arcs)))
    while True:
        pairs = violating_pairs(D, parts)
        if not pairs:
            break
        dev = [part_deviation(D, p, total_deg, k) for p in parts]
        i, j = max(pairs, key=lambda ij: (dev[ij[0]] + dev[ij[1]], -ij[0], -ij[1]))
        before = sum(dev)
        targets = build_indegree_targets(D, b, parts[i], parts[j])
        split = repartition_two_bbranchings(
            D, b, parts[i], parts[j], targets, fallback_threshold, exhaustive_limit
        )
        if split is None:
            raise InvariantError(f"halved targets rejected for parts {i} and {j}")
        parts[i], parts[j] = split
        after = b_potential(D, parts)
        if after >= before:
            raise InvariantError(f"potential did not decrease ({before} -> {after})")
        if trace is not None:
            trace.append((i, j, before, after))
    if not is_equitable_b_partition(D, parts):
        raise InvariantError("no violating pair left but the partition is not equitable")
    return parts
