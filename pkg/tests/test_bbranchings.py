import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eqpart.bbranchings import (
    b_potential,
    build_indegree_targets,
    equitable_b_partition,
    is_b_branching,
    is_equitable_b_partition,
    repartition_two_bbranchings,
    tight_core,
)
from eqpart.branchings import is_branching
from eqpart.errors import PreconditionError
from eqpart.graph import MixedGraph
from eqpart.oracle import B_BRANCHING, GeneratorConfig, generate_partitionable
from helpers import (
    ref_b_potential,
    ref_indegree,
    ref_is_b_branching,
    ref_is_branching,
    ref_source_components,
    ref_tight_core,
    two_colorings,
)


def D(n, arcs):
    return MixedGraph.digraph(n, arcs)


def random_bb_pair(rnd, n, m, bmax):
    """Two disjoint b-branchings drawn by random arc insertion."""
    b = [rnd.randint(1, bmax) for _ in range(n)]
    arcs, parts = [], ([], [])
    for _ in range(m):
        side = rnd.randrange(2)
        trial = D(n, arcs + [tuple(rnd.sample(range(n), 2))])
        if ref_is_b_branching(trial, b, parts[side] + [len(arcs)]):
            parts[side].append(len(arcs))
            arcs = list(trial.arcs)
    return D(n, arcs), b, frozenset(parts[0]), frozenset(parts[1])


def split_with_targets(G, b, arcs, t1, t2):
    for s1, s2 in two_colorings(arcs):
        if (ref_indegree(G, s1) == list(t1) and ref_indegree(G, s2) == list(t2)
                and ref_is_b_branching(G, b, s1) and ref_is_b_branching(G, b, s2)):
            return s1, s2
    return None


class TestTightCore:
    def test_examples(self):
        assert tight_core(D(2, [(0, 1)]), [1, 1], []) == set()
        assert tight_core(D(2, [(0, 1), (1, 0)]), [1, 1], [0, 1]) == {0, 1}

    def test_three_vertex_example_by_subset_scan(self):
        G = D(3, [(0, 1), (2, 1), (1, 2)])
        b = [1, 2, 1]
        # X={1,2}: 2 arcs inside vs b(X)=3; X={0,1,2}: 3 arcs vs 4; nothing is tight
        assert ref_tight_core(G, b, [0, 1, 2]) == set()
        assert tight_core(G, b, [0, 1, 2]) == set()

    def test_cap_violation(self):
        with pytest.raises(PreconditionError):
            tight_core(D(2, [(0, 1), (0, 1)]), [1, 1], [0, 1])

    def test_matches_subset_scan(self):
        rnd = random.Random(3)
        for _ in range(400):
            n = rnd.randint(2, 10 if rnd.random() < 0.2 else 6)
            b = [rnd.randint(1, 3) for _ in range(n)]
            G = D(n, [tuple(rnd.sample(range(n), 2)) for _ in range(rnd.randint(0, 2 * n))])
            B, deg = [], [0] * n
            for a, (_, h) in enumerate(G.arcs):
                if deg[h] < b[h] and rnd.random() < 0.8:
                    B.append(a)
                    deg[h] += 1
            assert tight_core(G, b, B) == ref_tight_core(G, b, B)


class TestIsBBranching:
    def test_examples(self):
        assert is_b_branching(D(2, [(0, 1), (0, 1)]), [2, 2], [0, 1])
        assert not is_b_branching(D(2, [(0, 1), (1, 0)]), [1, 1], [0, 1])
        assert not is_b_branching(D(2, [(0, 1), (0, 1)]), [1, 1], [0, 1])

    def test_unit_capacity_equals_branching(self):
        rnd = random.Random(7)
        for _ in range(1000):
            n = rnd.randint(2, 7)
            G = D(n, [tuple(rnd.sample(range(n), 2)) for _ in range(rnd.randint(0, 10))])
            B = [a for a in range(len(G.arcs)) if rnd.random() < 0.5]
            assert is_b_branching(G, [1] * n, B) == is_branching(G, B) == ref_is_branching(G, B)

    @given(st.randoms(use_true_random=False))
    def test_matches_definition(self, rnd):
        n = rnd.randint(2, 6)
        b = [rnd.randint(1, 3) for _ in range(n)]
        G = D(n, [tuple(rnd.sample(range(n), 2)) for _ in range(rnd.randint(0, 10))])
        B = [a for a in range(len(G.arcs)) if rnd.random() < 0.6]
        assert is_b_branching(G, b, B) == ref_is_b_branching(G, b, B)


class TestTargets:
    def test_equal_sides_unchanged(self):
        G = D(3, [(0, 1), (0, 1), (0, 2), (1, 2)])
        b = [1, 2, 2]
        t1, t2 = build_indegree_targets(G, b, [0, 2], [1, 3])
        assert t1 == t2 == [0, 1, 1]

    def test_odd_vertex_split(self):
        G = D(2, [(0, 1)] * 3)
        t1, t2 = build_indegree_targets(G, [1, 3], [0, 1], [2])
        assert sorted([t1[1], t2[1]]) == [1, 2]
        assert t1[0] == t2[0] == 0

    def test_invariants_on_random_pairs(self):
        rnd = random.Random(17)
        for _ in range(500):
            G, b, B1, B2 = random_bb_pair(rnd, rnd.randint(2, 6), rnd.randint(1, 14), 3)
            t1, t2 = build_indegree_targets(G, b, B1, B2)
            total = ref_indegree(G, B1 | B2)
            assert [x + y for x, y in zip(t1, t2)] == total
            assert all(abs(x - y) <= 1 for x, y in zip(t1, t2))
            assert all(x <= c and y <= c for x, y, c in zip(t1, t2, b))
            odd_surplus = 0
            inside = set()
            for X in ref_source_components(G, B1 | B2):
                inside |= X
                s1, s2 = sum(t1[v] for v in X), sum(t2[v] for v in X)
                cap = sum(b[v] for v in X)
                assert s1 < cap and s2 < cap
                if sum(total[v] for v in X) % 2 == 0:
                    assert s1 == s2
                else:
                    assert abs(s1 - s2) == 1
                    odd_surplus += s1 - s2
            assert abs(odd_surplus) <= 1
            assert abs(sum(t1) - sum(t2)) <= 1


class TestRepartition:
    def test_parallel_split(self):
        G = D(2, [(0, 1), (0, 1)])
        out = repartition_two_bbranchings(G, [1, 2], [0, 1], [], ([0, 1], [0, 1]))
        assert sorted(map(sorted, out)) == [[0], [1]]

    def test_saturated_component(self):
        G = D(2, [(0, 1), (1, 0)])
        assert repartition_two_bbranchings(G, [1, 1], [0], [1], ([1, 1], [0, 0])) is None

    def test_targets_must_sum(self):
        G = D(2, [(0, 1)])
        with pytest.raises(PreconditionError, match="add up"):
            repartition_two_bbranchings(G, [1, 1], [0], [], ([0, 0], [0, 0]))

    def test_decision_matches_two_colorings(self):
        rnd = random.Random(23)
        outcomes = set()
        for _ in range(400):
            G, b, B1, B2 = random_bb_pair(rnd, rnd.randint(2, 4), rnd.randint(1, 10), 2)
            union = sorted(B1 | B2)
            if len(union) > 8:
                continue
            total = ref_indegree(G, union)
            t1 = [rnd.randint(max(0, total[v] - b[v]), min(b[v], total[v])) for v in range(G.n)]
            t2 = [x - y for x, y in zip(total, t1)]
            got = repartition_two_bbranchings(G, b, B1, B2, (t1, t2))
            want = split_with_targets(G, b, union, t1, t2)
            assert (got is None) == (want is None)
            outcomes.add(got is None)
            if got is not None:
                assert got[0] | got[1] == B1 | B2 and not got[0] & got[1]
                assert ref_indegree(G, got[0]) == t1 and ref_indegree(G, got[1]) == t2
                assert ref_is_b_branching(G, b, got[0]) and ref_is_b_branching(G, b, got[1])
        assert outcomes == {True, False}


class TestPotential:
    def test_equitable_is_zero(self):
        G = D(3, [(0, 1), (0, 2), (1, 2), (2, 1)])
        assert b_potential(G, [{0, 1}, {2, 3}]) == 0

    def test_single_head_example(self):
        G = D(2, [(0, 1)] * 3)
        assert b_potential(G, [{0, 1, 2}, set()]) == 4
        assert ref_b_potential(G, [{0, 1, 2}, set()]) == 4

    def test_k_one(self):
        G = D(3, [(0, 1), (1, 2)])
        assert b_potential(G, [{0, 1}]) == 0

    @given(st.randoms(use_true_random=False))
    def test_matches_reference(self, rnd):
        n = rnd.randint(2, 6)
        G = D(n, [tuple(rnd.sample(range(n), 2)) for _ in range(rnd.randint(0, 9))])
        k = rnd.randint(1, 4)
        parts = [set() for _ in range(k)]
        for a in range(len(G.arcs)):
            parts[rnd.randrange(k)].add(a)
        assert b_potential(G, parts) == ref_b_potential(G, parts)
        assert (b_potential(G, parts) == 0) == is_equitable_b_partition(G, parts)


class TestEquitable:
    def test_already_equitable(self):
        G = D(2, [(0, 1)] * 3)
        assert equitable_b_partition(G, [1, 2], [{0, 1}, {2}]) == [{0, 1}, {2}]

    def test_k_one(self):
        G = D(2, [(0, 1)] * 2)
        assert equitable_b_partition(G, [1, 2], [{0, 1}]) == [{0, 1}]

    def test_rejects_invalid_part(self):
        G = D(2, [(0, 1), (1, 0)])
        with pytest.raises(PreconditionError):
            equitable_b_partition(G, [1, 1], [{0, 1}])

    @given(st.integers(0, 10_000), st.integers(2, 6), st.integers(1, 3), st.integers(1, 3))
    def test_floor_ceil_everywhere(self, seed, n, k, bmax):
        G, initial, b = generate_partitionable(GeneratorConfig(seed, n, k, b_max=bmax), B_BRANCHING)
        trace = []
        out = equitable_b_partition(G, b, initial, trace=trace)
        m = len(G.arcs)
        assert sorted(a for p in out for a in p) == list(range(m))
        assert all(ref_is_b_branching(G, b, p) for p in out)
        total = ref_indegree(G, range(m))
        for p in out:
            assert len(p) in (m // k, -(-m // k))
            deg = ref_indegree(G, p)
            assert all(deg[v] in (total[v] // k, -(-total[v] // k)) for v in range(n))
        assert all(after < before for _, _, before, after in trace)
        assert len(trace) <= ref_b_potential(G, initial)

    def test_unit_capacity_matches_branching_bound(self):
        rnd = random.Random(2)
        for seed in range(100):
            n, k = rnd.randint(2, 7), rnd.randint(1, 4)
            G, initial, _ = generate_partitionable(GeneratorConfig(seed, n, k), "branching")
            out = equitable_b_partition(G, [1] * n, initial)
            m = len(G.arcs)
            assert all(ref_is_branching(G, p) for p in out)
            assert {len(p) for p in out} <= {m // k, -(-m // k)}
