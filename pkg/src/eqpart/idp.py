"""Integer decomposition of arc vectors into b-branchings of fixed size and indegrees.

An integer vector ``x`` on the arcs that lies in ``kappa`` times the convex
hull of the b-branchings with size ``ell`` and indegree ``b'(v)`` on ``V'``
splits into ``kappa`` such b-branchings.  The construction replaces each arc
by ``x_a`` parallel copies, partitions the copies into ``kappa``
b-branchings, balances that partition and maps the parts back.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .bbranchings import equitable_b_partition, is_b_branching, tight_core
from .branchings import EXHAUSTIVE_CUT_LIMIT
from .errors import InvariantError, PreconditionError, SizeLimitError
from .graph import MixedGraph, indegree_vector

BACKTRACK_LIMIT = 24
NODE_BUDGET = 200_000


@dataclass(frozen=True)
class Expansion:
    graph: MixedGraph
    origin: tuple[int, ...]  # origin[i] = arc of the original digraph copied by arc i


def expand_multigraph(D: MixedGraph, x: Sequence[int]) -> Expansion:
    """Digraph with ``x[a]`` parallel copies of each arc ``a``."""
    if len(x) != len(D.arcs):
        raise PreconditionError(f"x has {len(x)} entries but the digraph has {len(D.arcs)} arcs")
    if any(v < 0 for v in x):
        raise PreconditionError("x must be nonnegative")
    arcs, origin = [], []
    for a, mult in enumerate(x):
        arcs += [D.arcs[a]] * mult
        origin += [a] * mult
    return Expansion(MixedGraph.digraph(D.n, arcs), tuple(origin))


def partition_into_k_bbranchings(
    D: MixedGraph,
    b: Sequence[int],
    k: int,
    limit: int = BACKTRACK_LIMIT,
    node_budget: int = NODE_BUDGET,
    groups: Sequence[int] | None = None,
    targets: Sequence[Sequence[int]] | None = None,
) -> list[frozenset[int]] | None:
    """Partition all arcs into ``k`` b-branchings by backtracking.

    Arcs are placed in order of (head, tail); parts are interchangeable, so a
    new part is only opened after all earlier ones, and parallel arcs take
    nondecreasing part numbers.  Partial parts are pruned by the indegree
    caps and the tight-core test.

    ``groups`` optionally labels arcs; two arcs with the same label never
    share a part.  ``targets`` optionally fixes the exact indegree vector of
    every part (the parts are then no longer interchangeable).  Returns
    ``None`` once the search space is exhausted.  With more than ``limit``
    arcs the search gives up after ``node_budget`` nodes and raises
    :class:`SizeLimitError`.
    """
    if k < 1:
        raise PreconditionError("k must be positive")
    m = len(D.arcs)
    if len(b) != D.n or any(c < 1 for c in b):
        raise PreconditionError("capacity vector must have n positive entries")
    deg = indegree_vector(D, range(m))
    if any(d > k * c for d, c in zip(deg, b)):
        return None
    if targets is None:
        caps = [list(b) for _ in range(k)]
    else:
        if len(targets) != k:
            raise PreconditionError(f"expected {k} target vectors, got {len(targets)}")
        caps = [[min(t[v], b[v]) for v in range(D.n)] for t in targets]
        if any(sum(c[v] for c in caps) != deg[v] for v in range(D.n)):
            return None
    if groups is not None:
        counts: dict[int, int] = {}
        for g in groups:
            counts[g] = counts.get(g, 0) + 1
        if any(c > k for c in counts.values()):
            return None

    order = sorted(range(m), key=lambda a: (D.arcs[a][1], D.arcs[a][0], -1 if groups is None else groups[a], a))
    parts: list[list[int]] = [[] for _ in range(k)]
    part_deg = [[0] * D.n for _ in range(k)]
    placed = [-1] * m
    budget = [node_budget if m > limit else -1]

    def same_kind(a: int, c: int) -> bool:
        return D.arcs[a] == D.arcs[c] and (groups is None or groups[a] == groups[c])

    def rec(pos: int, used: int) -> bool:
        if pos == m:
            return True
        if budget[0] == 0:
            raise SizeLimitError(f"no partition found within {node_budget} search nodes ({m} arcs)")
        if budget[0] > 0:
            budget[0] -= 1
        a = order[pos]
        h = D.arcs[a][1]
        lo = 0
        if pos > 0 and same_kind(a, order[pos - 1]):
            lo = placed[order[pos - 1]]
            if groups is not None:
                lo += 1
        hi = k if targets is not None else min(used + 1, k)
        for p in range(lo, hi):
            if part_deg[p][h] >= caps[p][h]:
                continue
            if groups is not None and any(groups[c] == groups[a] for c in parts[p]):
                continue
            parts[p].append(a)
            part_deg[p][h] += 1
            if not tight_core(D, b, parts[p]):
                placed[a] = p
                if rec(pos + 1, max(used, p + 1)):
                    return True
            parts[p].pop()
            part_deg[p][h] -= 1
        return False

    if not rec(0, 0):
        return None
    return [frozenset(p) for p in parts]


@dataclass(frozen=True)
class IdpQuery:
    kappa: int
    ell: int | None = None
    vprime: tuple[int, ...] = ()
    bprime: tuple[int, ...] = ()


def check_query(D: MixedGraph, b: Sequence[int], x: Sequence[int], q: IdpQuery) -> None:
    if len(x) != len(D.arcs):
        raise PreconditionError(f"x has {len(x)} entries but the digraph has {len(D.arcs)} arcs")
    if any(v < 0 for v in x):
        raise PreconditionError("x must be nonnegative")
    if q.kappa < 1:
        raise PreconditionError("kappa must be a positive integer")
    if q.ell is not None:
        if q.ell < 0:
            raise PreconditionError("ell must be nonnegative")
        if sum(x) != q.kappa * q.ell:
            raise PreconditionError(f"size condition violated: x(A) = {sum(x)} but kappa * ell = {q.kappa * q.ell}")
    if len(q.vprime) != len(q.bprime):
        raise PreconditionError("Vprime and bprime must have the same length")
    if len(set(q.vprime)) != len(q.vprime):
        raise PreconditionError("Vprime repeats a vertex")
    into = [0] * D.n
    for a, mult in enumerate(x):
        into[D.arcs[a][1]] += mult
    for v, want in zip(q.vprime, q.bprime):
        if not 0 <= v < D.n:
            raise PreconditionError(f"Vprime vertex {v} out of range")
        if not 0 <= want <= b[v]:
            raise PreconditionError(f"bprime({v}) = {want} must lie in [0, b({v}) = {b[v]}]")
        if into[v] != q.kappa * want:
            raise PreconditionError(
                f"indegree condition violated at vertex {v}: x(in({v})) = {into[v]} but kappa * bprime = {q.kappa * want}"
            )


def decompose(
    D: MixedGraph,
    b: Sequence[int],
    x: Sequence[int],
    q: IdpQuery,
    limit: int = BACKTRACK_LIMIT,
    node_budget: int = NODE_BUDGET,
    exhaustive_limit: int = EXHAUSTIVE_CUT_LIMIT,
) -> list[list[int]] | None:
    """Write ``x`` as a sum of ``kappa`` incidence vectors of b-branchings.

    Each returned part is a sorted list of arc indices of ``D`` (no repeats).
    Every part has ``ell`` arcs when ``ell`` is given and indegree ``bprime``
    on ``Vprime``.  Returns ``None`` when the copies of ``x`` cannot be split
    into ``kappa`` b-branchings at all, i.e. ``x`` is not in ``kappa`` times
    the b-branching polytope.
    """
    check_query(D, b, x, q)
    exp = expand_multigraph(D, x)
    Dx, origin = exp.graph, exp.origin
    initial = partition_into_k_bbranchings(Dx, b, q.kappa, limit, node_budget, groups=origin)
    if initial is None:
        return None
    parts = equitable_b_partition(Dx, b, initial, exhaustive_limit=exhaustive_limit)
    parts = separate_copies(Dx, b, origin, parts, limit, node_budget)

    out = [sorted(origin[a] for a in p) for p in parts]
    total = [0] * len(D.arcs)
    for i, part in enumerate(out):
        if len(set(part)) != len(part):
            raise InvariantError(f"part {i} still uses an arc twice")
        if not is_b_branching(D, b, part):
            raise InvariantError(f"part {i} is not a b-branching")
        if q.ell is not None and len(part) != q.ell:
            raise InvariantError(f"part {i} has size {len(part)}, expected {q.ell}")
        deg = indegree_vector(D, part)
        for v, want in zip(q.vprime, q.bprime):
            if deg[v] != want:
                raise InvariantError(f"part {i} has indegree {deg[v]} at {v}, expected {want}")
        for a in part:
            total[a] += 1
    if total != list(x):
        raise InvariantError("parts do not add up to x")
    return out


def _has_repeat(origin: Sequence[int], part: frozenset[int]) -> bool:
    return len({origin[a] for a in part}) != len(part)


def _resplit(
    D: MixedGraph,
    b: Sequence[int],
    origin: Sequence[int],
    chosen: Sequence[frozenset[int]],
    limit: int,
    node_budget: int,
) -> list[frozenset[int]] | None:
    arcs = sorted(set().union(*chosen))
    sub = MixedGraph.digraph(D.n, [D.arcs[a] for a in arcs])
    targets = [indegree_vector(D, p) for p in chosen]
    split = partition_into_k_bbranchings(
        sub, b, len(chosen), limit, node_budget, groups=[origin[a] for a in arcs], targets=targets
    )
    if split is None:
        return None
    return [frozenset(arcs[i] for i in p) for p in split]


def separate_copies(
    D: MixedGraph,
    b: Sequence[int],
    origin: Sequence[int],
    parts: Sequence[frozenset[int]],
    limit: int = BACKTRACK_LIMIT,
    node_budget: int = NODE_BUDGET,
) -> list[frozenset[int]]:
    """Rearrange parts so that no part holds two copies of the same original arc.

    Balancing may put two parallel copies into one b-branching, which would
    not map back to a set of original arcs.  Every part keeps its indegree
    vector (hence its size): a part with a repeat is re-split together with
    one other part, keeping both indegree vectors and forcing copies apart.
    If no single partner works, all parts are re-split at once.
    """
    parts = list(parts)
    while True:
        bad = [i for i, p in enumerate(parts) if _has_repeat(origin, p)]
        if not bad:
            return parts
        i = bad[0]
        for j in range(len(parts)):
            if j == i:
                continue
            split = _resplit(D, b, origin, [parts[i], parts[j]], limit, node_budget)
            if split is not None:
                parts[i], parts[j] = split
                break
        else:
            split = _resplit(D, b, origin, parts, limit, node_budget)
            if split is None:
                raise InvariantError("copies of an arc cannot be separated under the balanced indegrees")
            parts = split
