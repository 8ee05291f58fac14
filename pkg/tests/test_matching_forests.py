import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eqpart.errors import PreconditionError
from eqpart.graph import MixedGraph
from eqpart.matching_forests import (
    MatchingForest,
    SwapPath,
    boundary,
    build_exchange_graph,
    equitable_mf_partition,
    find_swap_path,
    is_matching_forest,
    mf_potential,
    swap_along_path,
)
from eqpart.oracle import MATCHING_FOREST, GeneratorConfig, brute_force_min_gap, generate_partitionable
from helpers import ref_boundary, ref_matching_forests, random_mixed

MF = MatchingForest.of
PATH3 = MixedGraph(4, ((0, 1), (1, 2), (2, 3)))


def labels(H):
    return sorted((min(u, v), max(u, v), lab) for u, v, lab, _ in H.edges)


class TestValidity:
    def test_examples(self):
        G = MixedGraph(4, ((0, 1),), ((2, 1), (2, 3)))
        assert is_matching_forest(G, MF())
        assert not is_matching_forest(G, MF([0], [0]))
        assert is_matching_forest(G, MF([0], [1]))

    def test_matching_and_branching_parts(self):
        G = MixedGraph(3, ((0, 1), (1, 2)), ((0, 1), (1, 0)))
        assert not is_matching_forest(G, MF([0, 1]))
        assert not is_matching_forest(G, MF((), [0, 1]))

    @given(st.randoms(use_true_random=False))
    def test_matches_reference_enumerator(self, rnd):
        G = random_mixed(rnd, rnd.randint(2, 5), rnd.randint(0, 3), rnd.randint(0, 4))
        ref = ref_matching_forests(G)
        ne, na = len(G.edges), len(G.arcs)
        for mask in range(1 << (ne + na)):
            F = MF((i for i in range(ne) if mask >> i & 1), (a for a in range(na) if mask >> (ne + a) & 1))
            assert is_matching_forest(G, F) == ((F.edges, F.arcs) in ref)


class TestBoundary:
    def test_examples(self):
        G = MixedGraph(4, ((0, 1),), ((0, 1), (2, 3)))
        assert boundary(G, MF([0])) == {0, 1}
        assert boundary(G, MF((), [0])) == {1}
        assert boundary(G, MF([0], [1])) == {0, 1, 3}

    @given(st.randoms(use_true_random=False))
    def test_size_identity(self, rnd):
        G = random_mixed(rnd, rnd.randint(2, 5), rnd.randint(0, 3), rnd.randint(0, 4))
        for edges, arcs in ref_matching_forests(G):
            F = MatchingForest(edges, arcs)
            assert boundary(G, F) == ref_boundary(G, edges, arcs)
            assert len(boundary(G, F)) == len(F) + len(F.edges)


class TestExchangeGraph:
    def test_single_matching_edge(self):
        H = build_exchange_graph(MixedGraph(2, ((0, 1),)), MF([0]), MF())
        assert labels(H) == [(0, 1, "M1")]
        assert H.components == []

    def test_two_cycle(self):
        G = MixedGraph.digraph(2, [(0, 1), (1, 0)])
        H = build_exchange_graph(G, MF((), [0]), MF((), [1]))
        # R(B1) = {0}, R(B2) = {1}
        assert H.edges == [(0, 1, "N", 0)]
        assert H.components == [{0, 1}]

    def test_three_edge_path(self):
        H = build_exchange_graph(PATH3, MF([0, 2]), MF([1]))
        assert labels(H) == [(0, 1, "M1"), (1, 2, "M2"), (2, 3, "M1")]

    def test_rejects_overlap(self):
        with pytest.raises(PreconditionError):
            build_exchange_graph(PATH3, MF([0]), MF([0]))

    def test_degree_bound_on_random_pairs(self):
        rnd = random.Random(1)
        for seed in range(200):
            G, parts, _ = generate_partitionable(GeneratorConfig(seed, rnd.randint(2, 7), 2), MATCHING_FOREST)
            F1, F2 = parts
            H = build_exchange_graph(G, F1, F2)
            both = boundary(G, F1) & boundary(G, F2)
            n_edges = [e for e in H.edges if e[2] == "N"]
            assert len({v for u, w, _, _ in n_edges for v in (u, w)}) == 2 * len(n_edges)
            for v, d in enumerate(H.degree()):
                assert d <= 2
                if d == 2:
                    assert v in both


class TestSwapPath:
    def test_gap_two_path(self):
        H = build_exchange_graph(PATH3, MF([0, 2]), MF([1]))
        P = find_swap_path(H, {0, 1, 2, 3}, {1, 2})
        # a path is still reported; its ends are both covered by F1 only
        assert P is None or (P.vertices[0] in {0, 3} and P.vertices[-1] in {0, 3})

    def test_isolated_vertex(self):
        G = MixedGraph(4, ((0, 1),), ((2, 3),))
        F1 = MF([0], [0])
        H = build_exchange_graph(G, F1, MF())
        # the isolated vertex 3 is a component on its own
        inc = H.incident()
        assert inc[3] == []
        P = find_swap_path(H, {3}, set())
        assert P.vertices == (3,) and P.matching_edges == frozenset()

    def test_smallest_endpoint_first(self):
        G = MixedGraph(4, ((0, 1), (2, 3)))
        H = build_exchange_graph(G, MF([0, 1]), MF())
        P = find_swap_path(H, {0, 1, 2, 3}, set())
        assert P.vertices == (0, 1)
        assert P.matching_edges == {0}

    def test_eligibility_on_random_pairs(self):
        for seed in range(300):
            G, parts, _ = generate_partitionable(GeneratorConfig(seed, 6, 2), MATCHING_FOREST)
            F1, F2 = parts
            d1, d2 = boundary(G, F1), boundary(G, F2)
            if len(d1) < len(d2):
                F1, F2, d1, d2 = F2, F1, d2, d1
            H = build_exchange_graph(G, F1, F2)
            P = find_swap_path(H, d1, d2)
            if len(d1) - len(d2) >= 3:
                assert P is not None
            if P is not None:
                assert P.vertices[0] in d1 - d2
                assert len(P.vertices) == 1 or P.vertices[-1] in d1


class TestSwap:
    def test_edge_moves_across(self):
        G = MixedGraph(2, ((0, 1),))
        P = SwapPath((0, 1), (0,), frozenset({0}))
        assert swap_along_path(G, MF([0]), MF(), P) == (MF(), MF([0]))

    def test_isolated_vertex_moves_arc(self):
        G = MixedGraph(4, ((0, 1),), ((2, 3),))
        F1, F2 = swap_along_path(G, MF([0], [0]), MF(), SwapPath((3,), (), frozenset()))
        assert F1 == MF([0]) and F2 == MF((), [0])
        assert len(boundary(G, F1)) == 2 and len(boundary(G, F2)) == 1

    def test_gap_drops_by_two_or_four(self):
        rnd = random.Random(9)
        seen = set()
        for seed in range(400):
            G, parts, _ = generate_partitionable(
                GeneratorConfig(seed, rnd.randint(3, 7), 2, edge_density=0.8), MATCHING_FOREST
            )
            F1, F2 = parts
            d1, d2 = boundary(G, F1), boundary(G, F2)
            if len(d1) < len(d2):
                F1, F2, d1, d2 = F2, F1, d2, d1
            gap = len(d1) - len(d2)
            if gap < 3:
                continue
            P = find_swap_path(build_exchange_graph(G, F1, F2), d1, d2)
            N1, N2 = swap_along_path(G, F1, F2, P)
            assert is_matching_forest(G, N1) and is_matching_forest(G, N2)
            assert N1.edges | N2.edges == F1.edges | F2.edges and not N1.edges & N2.edges
            assert N1.arcs | N2.arcs == F1.arcs | F2.arcs and not N1.arcs & N2.arcs
            new_gap = abs(len(boundary(G, N1)) - len(boundary(G, N2)))
            assert new_gap in (gap - 2, gap - 4)
            seen.add(gap - new_gap)
        assert 2 in seen


class TestPotential:
    def test_examples(self):
        G = MixedGraph(7, ((0, 1), (2, 3), (4, 5)), ((5, 6),))
        assert mf_potential(G, [MF([0, 1])]) == 0
        assert mf_potential(G, [MF([0, 1]), MF([2])]) == 2
        sizes_522 = [MF([0, 1], [0]), MF([2]), MF([0])]
        assert [len(boundary(G, F)) for F in sizes_522] == [5, 2, 2]
        assert mf_potential(G, sizes_522) == 6


class TestEquitable:
    def test_tight_path(self):
        initial = [MF([0, 2]), MF([1])]
        out = equitable_mf_partition(PATH3, initial)
        assert out == initial
        assert brute_force_min_gap(PATH3, 2, "boundary") == 2

    def test_edge_and_arc(self):
        G = MixedGraph(4, ((0, 1),), ((2, 3),))
        trace = []
        out = equitable_mf_partition(G, [MF([0], [0]), MF()], trace=trace)
        assert sorted(len(boundary(G, F)) for F in out) == [1, 2]
        assert brute_force_min_gap(G, 2, "boundary") == 1
        assert len(trace) == 1

    def test_k_one(self):
        G = MixedGraph(4, ((0, 1),), ((2, 3),))
        assert equitable_mf_partition(G, [MF([0], [0])]) == [MF([0], [0])]

    def test_rejects_bad_partition(self):
        with pytest.raises(PreconditionError):
            equitable_mf_partition(PATH3, [MF([0, 1]), MF([2])])
        with pytest.raises(PreconditionError):
            equitable_mf_partition(PATH3, [MF([0]), MF([2])])

    @given(st.integers(0, 10_000), st.integers(2, 7), st.integers(1, 3))
    def test_gap_at_most_two(self, seed, n, k):
        G, initial, _ = generate_partitionable(GeneratorConfig(seed, n, k), MATCHING_FOREST)
        trace = []
        out = equitable_mf_partition(G, initial, trace=trace)
        assert sorted(e for F in out for e in F.edges) == list(range(len(G.edges)))
        assert sorted(a for F in out for a in F.arcs) == list(range(len(G.arcs)))
        sizes = [len(boundary(G, F)) for F in out]
        assert max(sizes) - min(sizes) <= 2
        assert all(before - after >= 2 for _, _, before, after in trace)
        assert len(trace) <= mf_potential(G, initial) // 2
