import numpy as np
import pytest

from edgetype.graphs import DiGraph
from edgetype.typealg import (
    EdgeType,
    components_from_structure,
    gale_ryser_feasible,
    invariant_positions,
    normalize,
    reduce_by_invariants,
    restriction_necessary,
    structure_matrix,
    structure_matrix_block_form,
)

# Golden 11-vertex example: normalized degree vectors whose structure
# matrix, zero staircase, and components are known in full.
GOLDEN_R = (10, 10, 9, 7, 6, 6, 5, 5, 2, 2, 1)
GOLDEN_C = (11, 9, 9, 8, 8, 5, 5, 3, 3, 1, 1)
GOLDEN_T = [
    [63, 52, 43, 34, 26, 18, 13, 8, 5, 2, 1, 0],
    [53, 43, 35, 27, 20, 13, 9, 5, 3, 1, 1, 1],
    [43, 34, 27, 20, 14, 8, 5, 2, 1, 0, 1, 2],
    [34, 26, 20, 14, 9, 4, 2, 0, 0, 0, 2, 4],
    [27, 20, 15, 10, 6, 2, 1, 0, 1, 2, 5, 8],
    [21, 15, 11, 7, 4, 1, 1, 1, 3, 5, 9, 13],
    [15, 10, 7, 4, 2, 0, 1, 2, 5, 8, 13, 18],
    [10, 6, 4, 2, 1, 0, 2, 4, 8, 12, 18, 24],
    [5, 2, 1, 0, 0, 0, 3, 6, 11, 16, 23, 30],
    [3, 1, 1, 1, 2, 3, 7, 11, 17, 23, 31, 39],
    [1, 0, 1, 2, 4, 6, 11, 16, 23, 30, 39, 48],
    [0, 0, 2, 4, 7, 10, 16, 22, 30, 38, 48, 58],
]


def all_degree_pairs(n):
    from itertools import product

    vals = range(n + 1)
    for r in product(vals, repeat=n):
        for c in product(vals, repeat=n):
            yield r, c


class TestGaleRyser:
    def test_simple_feasible(self):
        assert gale_ryser_feasible((1, 1), (1, 1))
        assert gale_ryser_feasible((2, 2), (2, 2))
        assert gale_ryser_feasible((2, 0), (1, 1))

    def test_sum_mismatch_false(self):
        assert not gale_ryser_feasible((2, 0), (1, 0))

    def test_majorization_failure(self):
        # a full first row forces column sums (1, 1), so (2, 0) is unrealizable
        assert not gale_ryser_feasible((2, 0), (2, 0))

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            gale_ryser_feasible((3, 0), (1, 1))

    def test_agrees_with_enumeration_n3(self):
        from edgetype.enumeration import count_class

        for r, c in all_degree_pairs(3):
            expected = count_class(EdgeType(r, c)) > 0
            assert gale_ryser_feasible(r, c) == expected, (r, c)


class TestNormalize:
    def test_identity_when_sorted(self):
        t = EdgeType((2, 1), (2, 0))
        tn, rp, cp = normalize(t)
        assert tn.r == t.r and tn.c == t.c
        assert rp == (0, 1) and cp == (0, 1)

    def test_two_element_swap(self):
        t = EdgeType((1, 2), (0, 2))
        tn, rp, cp = normalize(t)
        assert tn.r == (2, 1) and tn.c == (2, 0)
        assert rp == (1, 0) and cp == (1, 0)

    def test_golden_vectors_already_normalized(self):
        t = EdgeType(GOLDEN_R, GOLDEN_C)
        tn, rp, cp = normalize(t)
        assert tn.r == GOLDEN_R and tn.c == GOLDEN_C
        assert rp == tuple(range(11)) and cp == tuple(range(11))

    def test_stable_ties(self):
        t = EdgeType((1, 1, 2), (1, 1, 2))
        _, rp, cp = normalize(t)
        assert rp == (2, 0, 1) and cp == (2, 0, 1)

    def test_restriction_permuted_consistently(self):
        w = DiGraph([[0, 1], [1, 1]])
        t = EdgeType((1, 2), (1, 2), w)
        tn, rp, cp = normalize(t)
        assert tn.w.adj[0, 0] == w.adj[rp[0], cp[0]]


class TestStructureMatrix:
    def test_golden_full_matrix(self):
        sm = structure_matrix(GOLDEN_R, GOLDEN_C)
        assert sm.tolist() == GOLDEN_T

    def test_corners(self):
        sm = structure_matrix((1, 1), (1, 1))
        assert sm.t[0, 0] == 2 and sm.t[2, 2] == 2
        assert sm.t[1, 1] == 1 and sm.t[2, 0] == 0 and sm.t[0, 2] == 0

    def test_all_zero_type(self):
        sm = structure_matrix((0, 0), (0, 0))
        assert sm.tolist() == [[e * f for f in range(3)] for e in range(3)]

    def test_rejects_non_normalized(self):
        with pytest.raises(ValueError):
            structure_matrix((1, 2), (2, 1))

    def test_block_form_agrees_exhaustive_n3(self):
        from edgetype.enumeration import enumerate_class

        for r, c in all_degree_pairs(3):
            if tuple(sorted(r, reverse=True)) != r or tuple(sorted(c, reverse=True)) != c:
                continue
            if not gale_ryser_feasible(r, c):
                continue
            sm = structure_matrix(r, c)
            for g in enumerate_class(EdgeType(r, c)):
                assert structure_matrix_block_form(g).tolist() == sm.tolist()

    def test_nonnegative_iff_feasible_n3(self):
        for r, c in all_degree_pairs(3):
            if tuple(sorted(r, reverse=True)) != r or tuple(sorted(c, reverse=True)) != c:
                continue
            if sum(r) != sum(c):
                continue
            sm = structure_matrix(r, c)
            assert ((sm.t >= 0).all()) == gale_ryser_feasible(r, c), (r, c)


class TestInvariantPositions:
    def test_complete_graph_type_all_inv1(self):
        t = EdgeType((2, 2), (2, 2))
        masks = invariant_positions(t)
        assert masks.inv1 == DiGraph.complete(2)
        assert masks.free.edge_count() == 0

    def test_regular_pair_all_free(self):
        masks = invariant_positions(EdgeType((1, 1), (1, 1)))
        assert masks.free == DiGraph.complete(2)

    def test_golden_free_gaps(self):
        masks = invariant_positions(EdgeType(GOLDEN_R, GOLDEN_C))
        free = {(i, j) for i in range(11) for j in range(11) if masks.free.adj[i, j]}
        expected = {(i, j) for i in (0, 1) for j in (9, 10)}
        expected |= {(i, j) for i in (4, 5) for j in (5, 6)}
        expected |= {(i, j) for i in (8, 9) for j in (1, 2)}
        assert free == expected
        # first two rows carry invariant ones in columns 1-9 (0-indexed 0-8)
        assert masks.inv1.adj[0, :9].all() and masks.inv1.adj[1, :9].all()

    def test_empty_class_rejected(self):
        with pytest.raises(ValueError):
            invariant_positions(EdgeType((2, 0), (2, 0)))

    def test_restricted_rejected(self):
        w = DiGraph([[0, 1], [1, 1]])
        with pytest.raises(ValueError):
            invariant_positions(EdgeType((1, 1), (1, 1), w))

    def test_non_normalized_mapped_back(self):
        t = EdgeType((0, 2), (1, 1))
        masks = invariant_positions(t)
        # row 1 must carry both invariant ones, row 0 none
        assert masks.inv1.adj[1].sum() == 2 and masks.inv1.adj[0].sum() == 0


class TestComponents:
    def test_golden_nontrivial_blocks(self):
        comp = components_from_structure(EdgeType(GOLDEN_R, GOLDEN_C))
        nontrivial = {(rows, cols) for rows, cols in comp.nontrivial()}
        assert nontrivial == {
            ((0, 1), (9, 10)),
            ((4, 5), (5, 6)),
            ((8, 9), (1, 2)),
        }

    def test_complete_graph_type_all_trivial(self):
        comp = components_from_structure(EdgeType((2, 2), (2, 2)))
        assert comp.nontrivial() == []

    def test_regular_pair_single_block(self):
        comp = components_from_structure(EdgeType((1, 1), (1, 1)))
        assert comp.row_blocks == ((0, 1),) and comp.col_blocks == ((0, 1),)
        assert comp.nontrivial() == [((0, 1), (0, 1))]

    def test_blocks_tile_grid(self):
        comp = components_from_structure(EdgeType(GOLDEN_R, GOLDEN_C))
        cells = set()
        for rows, cols, _ in comp.blocks:
            for i in rows:
                for j in cols:
                    assert (i, j) not in cells
                    cells.add((i, j))
        assert len(cells) == 121


class TestRestrictionNecessary:
    def test_complete_is_feasibility(self):
        assert restriction_necessary(EdgeType((1, 1), (1, 1)))
        assert not restriction_necessary(EdgeType((2, 0), (2, 0)))

    def test_golden_missing_inv1_edge(self):
        w = DiGraph(1 - np.eye(11, dtype=np.uint8)[::-1][::-1] * 0)  # complete
        adj = np.ones((11, 11), dtype=np.uint8)
        adj[0, 0] = 0  # cell (1,1) is an invariant 1-position
        assert not restriction_necessary(EdgeType(GOLDEN_R, GOLDEN_C, DiGraph(adj)))

    def test_no_inv1_cells_passes(self):
        w = DiGraph([[0, 1], [1, 0]])
        assert restriction_necessary(EdgeType((1, 1), (1, 1), w))


class TestReduceByInvariants:
    def test_no_invariants_unchanged(self):
        t = EdgeType((1, 1), (1, 1))
        reduced = reduce_by_invariants(t, invariant_positions(t))
        assert reduced.r == t.r and reduced.c == t.c
        assert reduced.w == t.w

    def test_complete_type_reduces_to_zero(self):
        t = EdgeType((2, 2), (2, 2))
        reduced = reduce_by_invariants(t, invariant_positions(t))
        assert reduced.r == (0, 0) and reduced.c == (0, 0)
        assert reduced.w == DiGraph.empty(2)

    def test_golden_row_one_remainder(self):
        t = EdgeType(GOLDEN_R, GOLDEN_C)
        reduced = reduce_by_invariants(t, invariant_positions(t))
        assert reduced.r[0] == 1  # 10 minus 9 invariant ones
        assert reduced.w.adj[0, 9] == 1 and reduced.w.adj[0, 10] == 1

    def test_inconsistent_masks_rejected(self):
        from edgetype.typealg import InvariantMasks

        t = EdgeType((0, 0), (0, 0))
        bad = InvariantMasks(
            inv1=DiGraph.complete(2), inv0=DiGraph.empty(2), free=DiGraph.empty(2)
        )
        with pytest.raises(ValueError):
            reduce_by_invariants(t, bad)
