from itertools import product

import pytest

from edgetype.enumeration import (
    EnumerationLimitError,
    components_by_enumeration,
    count_class,
    enumerate_class,
    enumerate_conditional,
    enumerate_delta_class,
    interchange_connected,
    interchange_neighbors,
    invariants_by_enumeration,
    partition_by_type,
)
from edgetype.graphs import DiGraph, degrees, respects_restriction
from edgetype.typealg import (
    EdgeType,
    components_from_structure,
    gale_ryser_feasible,
    invariant_positions,
)


class TestEnumerateClass:
    def test_two_member_class(self):
        members = list(enumerate_class(EdgeType((1, 1), (1, 1))))
        assert members == [
            DiGraph([[0, 1], [1, 0]]),
            DiGraph([[1, 0], [0, 1]]),
        ]

    def test_infeasible_empty(self):
        assert list(enumerate_class(EdgeType((2, 0), (2, 0)))) == []

    def test_permutation_class_n3(self):
        assert count_class(EdgeType((1, 1, 1), (1, 1, 1))) == 6

    def test_members_valid_and_unique(self):
        w = DiGraph([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        t = EdgeType((1, 1, 1), (1, 1, 1), w)
        members = list(enumerate_class(t))
        assert len(set(members)) == len(members) == 2
        for g in members:
            assert degrees(g).r == t.r and degrees(g).c == t.c
            assert respects_restriction(g, w)

    def test_limit_enforced(self):
        with pytest.raises(EnumerationLimitError):
            list(enumerate_class(EdgeType((0,) * 7, (0,) * 7)))

    def test_agrees_with_unpruned_bucketing_n3(self):
        buckets = partition_by_type(3)
        for (r, c), bits in sorted(buckets.items()):
            got = [g.to_bits() for g in enumerate_class(EdgeType(r, c))]
            assert sorted(got) == sorted(bits), (r, c)


class TestCountClass:
    def test_examples(self):
        assert count_class(EdgeType((1, 1), (1, 1))) == 2
        assert count_class(EdgeType((2, 2), (2, 2))) == 1
        assert count_class(EdgeType((1, 1, 1), (1, 1, 1))) == 6

    def test_partition_of_graph_space_n3(self):
        total = 0
        for r in product(range(4), repeat=3):
            for c in product(range(4), repeat=3):
                if sum(r) == sum(c):
                    total += count_class(EdgeType(r, c))
        assert total == 2**9

    def test_relabeling_invariance(self):
        t = EdgeType((2, 1, 0), (1, 1, 1))
        perm = (2, 0, 1)
        r2 = tuple(t.r[p] for p in perm)
        c2 = tuple(t.c[p] for p in perm)
        assert count_class(t) == count_class(EdgeType(r2, c2))


class TestInterchange:
    def test_single_neighbor(self):
        g = DiGraph([[1, 0], [0, 1]])
        nb = interchange_neighbors(g, DiGraph.complete(2))
        assert nb == [DiGraph([[0, 1], [1, 0]])]

    def test_empty_and_complete_have_none(self):
        for g in (DiGraph.empty(3), DiGraph.complete(3)):
            assert interchange_neighbors(g, DiGraph.complete(3)) == []

    def test_neighbors_preserve_type_and_restriction(self):
        g = DiGraph([[1, 1, 0], [0, 1, 1], [1, 0, 0]])
        w = DiGraph.complete(3)
        for h in interchange_neighbors(g, w):
            assert degrees(h) == degrees(g)

    def test_restriction_filters_neighbors(self):
        g = DiGraph([[1, 0], [0, 1]])
        w = DiGraph([[1, 0], [1, 1]])  # the swap needs cell (0,1)
        assert interchange_neighbors(g, w) == []

    def test_connected_examples(self):
        assert interchange_connected(EdgeType((1, 1, 1), (1, 1, 1)))
        assert interchange_connected(EdgeType((2, 2), (2, 2)))  # singleton

    def test_empty_class_rejected(self):
        with pytest.raises(ValueError):
            interchange_connected(EdgeType((2, 0), (2, 0)))

    def test_connected_all_types_n3(self):
        buckets = partition_by_type(3)
        for (r, c), bits in sorted(buckets.items()):
            if bits:
                assert interchange_connected(EdgeType(r, c)), (r, c)


class TestDeltaClass:
    def test_delta_zero_is_plain_class(self):
        t = EdgeType((1, 1), (1, 1))
        assert list(enumerate_delta_class(t, 0.0, 1)) == list(enumerate_class(t))

    def test_large_delta_admits_everything(self):
        t = EdgeType((1, 1), (1, 1))
        got = set(enumerate_delta_class(t, 10.0, 1))
        assert len(got) == 16

    def test_monotone_in_delta(self):
        t = EdgeType((1, 1, 1), (1, 1, 1))
        sizes = [
            len(set(enumerate_delta_class(t, d, t.density())))
            for d in (0.0, 0.6, 1.1, 2.1, 10.0)
        ]
        assert sizes == sorted(sizes)
        assert sizes[0] == 6 and sizes[-1] == 512

    def test_disjoint_union_cardinality(self):
        t = EdgeType((1, 1), (1, 1))
        delta, dens = 1.5, 1
        from edgetype.enumeration import delta_degree_choices

        expected = 0
        r_opts = [delta_degree_choices(v, 2, delta, dens) for v in t.r]
        c_opts = [delta_degree_choices(v, 2, delta, dens) for v in t.c]
        for r in product(*r_opts):
            for c in product(*c_opts):
                if sum(r) == sum(c):
                    expected += count_class(EdgeType(r, c))
        got = list(enumerate_delta_class(t, delta, dens))
        assert len(got) == len(set(got)) == expected

    def test_strict_inequality(self):
        # deviation exactly delta*dens is excluded
        t = EdgeType((1, 1), (1, 1))
        members = set(enumerate_delta_class(t, 1.0, 1))
        assert members == set(enumerate_class(t))


class TestConditional:
    def test_remark_pair(self):
        g = DiGraph([[1, 1], [1, 0]])
        t = EdgeType((1, 1), (1, 1))
        got = list(enumerate_conditional(t, g))
        assert set(got) == {
            DiGraph([[0, 1], [1, 1]]),
            DiGraph([[1, 0], [0, 0]]),
        }
        # the two reconstructions have different edge-types
        counts = {h.edge_count() for h in got}
        assert counts == {1, 3}

    def test_zero_type_returns_reference(self):
        g = DiGraph([[1, 1], [1, 0]])
        t = EdgeType((0, 0), (0, 0))
        assert list(enumerate_conditional(t, g)) == [g]

    def test_reference_must_respect_restriction(self):
        w = DiGraph([[0, 1], [1, 1]])
        g = DiGraph([[1, 0], [0, 1]])
        with pytest.raises(ValueError):
            list(enumerate_conditional(EdgeType((1, 1), (1, 1), w), g))


class TestOracles:
    def test_singleton_all_invariant(self):
        masks = invariants_by_enumeration(EdgeType((2, 2), (2, 2)))
        assert masks.free.edge_count() == 0

    def test_regular_pair_no_invariants(self):
        masks = invariants_by_enumeration(EdgeType((1, 1), (1, 1)))
        assert masks.free == DiGraph.complete(2)

    def test_matches_structure_n3(self):
        buckets = partition_by_type(3)
        for (r, c), bits in sorted(buckets.items()):
            if not bits:
                continue
            if tuple(sorted(r, reverse=True)) != r or tuple(sorted(c, reverse=True)) != c:
                continue
            t = EdgeType(r, c)
            a = invariant_positions(t)
            b = invariants_by_enumeration(t)
            assert a.inv1 == b.inv1 and a.inv0 == b.inv0, (r, c)
            ca = components_from_structure(t)
            cb = components_by_enumeration(t)
            assert ca.row_blocks == cb.row_blocks
            assert ca.col_blocks == cb.col_blocks
            assert ca.blocks == cb.blocks

    def test_block_margins_constant_across_members(self):
        t = EdgeType((2, 2, 1, 1), (2, 2, 1, 1))
        comp = components_by_enumeration(t)
        members = list(enumerate_class(t))
        for rows, cols, _ in comp.blocks:
            sums = {
                int(sum(int(m.adj[i, j]) for i in rows for j in cols)) for m in members
            }
            assert len(sums) == 1
