"""Exact brute-force oracles over edge-type classes at small n.

Everything here is ground truth: class enumeration and counting by
backtracking, interchange walks, δ and conditional classes, and
invariants/components recomputed directly from the member list.  These
oracles validate the closed-form machinery in edgetype.typealg and the
analytic bounds elsewhere.

Graphs are handled internally as row-major integer bitmasks (bit k is
cell (k // n, k % n)) for speed; the public API speaks DiGraph.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterator, Sequence

import numpy as np

from .graphs import DiGraph, respects_restriction, xor
from .typealg import ComponentPartition, EdgeType, InvariantMasks, gale_ryser_feasible

__all__ = [
    "EnumerationLimitError",
    "DEFAULT_LIMIT",
    "estimated_work",
    "enumerate_class",
    "count_class",
    "partition_by_type",
    "interchange_neighbors",
    "interchange_connected",
    "enumerate_delta_class",
    "delta_degree_choices",
    "enumerate_conditional",
    "invariants_by_enumeration",
    "components_by_enumeration",
]

DEFAULT_LIMIT = 6


class EnumerationLimitError(RuntimeError):
    """Raised when a brute-force operation exceeds the configured size limit."""


def _check_limit(n: int, limit: int) -> None:
    if n > limit:
        raise EnumerationLimitError(
            f"n={n} exceeds enumeration limit {limit} (estimated work 2^{n * n})"
        )


def estimated_work(n: int) -> int:
    """Upper bound on the number of adjacency matrices a search may touch."""
    return 1 << (n * n)


def _row_patterns(allowed: tuple[int, ...], k: int, n: int) -> list[int]:
    """All column bitmasks with k ones placed within the allowed columns,
    ordered lexicographically by the row's bit string (cell (i,0) first,
    0 before 1)."""
    masks = []
    for cols in combinations(allowed, k):
        m = 0
        for j in cols:
            m |= 1 << j
        masks.append(m)
    # Lex order on the bit string (b_0, b_1, ..., b_{n-1}) equals numeric
    # order of the mask with bit j reversed; sort by the tuple directly.
    masks.sort(key=lambda m: tuple((m >> j) & 1 for j in range(n)))
    return masks


def _enumerate_bits(
    r: Sequence[int], c: Sequence[int], w_rows: Sequence[int], n: int
) -> Iterator[int]:
    """Backtracking search over row bitmasks in deterministic order.

    Prunes on residual column demand: each remaining column needs at most
    as many ones as there are later rows allowing it, and when W is
    complete the residual (r, c) pair must pass the Gale-Ryser test.
    """
    if sum(r) != sum(c):
        return
    unrestricted = all(w_rows[i] == (1 << n) - 1 for i in range(n))
    # suffix_cap[i][j]: number of rows >= i whose restriction allows column j
    suffix_cap = [[0] * n for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(n):
            suffix_cap[i][j] = suffix_cap[i + 1][j] + ((w_rows[i] >> j) & 1)
    patterns = [
        _row_patterns(tuple(j for j in range(n) if (w_rows[i] >> j) & 1), r[i], n)
        for i in range(n)
    ]

    c_rem = list(c)
    rows: list[int] = []

    def feasible_tail(i: int) -> bool:
        for j in range(n):
            if c_rem[j] < 0 or c_rem[j] > suffix_cap[i][j]:
                return False
        if unrestricted and not gale_ryser_feasible(
            tuple(r[i:]) + (0,) * i, tuple(min(v, n) for v in c_rem)
        ):
            return False
        return True

    def search(i: int) -> Iterator[int]:
        if i == n:
            if all(v == 0 for v in c_rem):
                bits = 0
                for k, row in enumerate(rows):
                    bits |= row << (k * n)
                yield bits
            return
        for row in patterns[i]:
            for j in range(n):
                c_rem[j] -= (row >> j) & 1
            rows.append(row)
            if feasible_tail(i + 1):
                yield from search(i + 1)
            rows.pop()
            for j in range(n):
                c_rem[j] += (row >> j) & 1

    yield from search(0)


def enumerate_class(t: EdgeType, limit: int = DEFAULT_LIMIT) -> Iterator[DiGraph]:
    """All members of T(r, c, W), each exactly once, in deterministic
    row-major lexicographic order."""
    _check_limit(t.n, limit)
    w_rows = _graph_rows(t.w)
    for bits in _enumerate_bits(t.r, t.c, w_rows, t.n):
        yield DiGraph.from_bits(t.n, bits)


def count_class(t: EdgeType, limit: int = DEFAULT_LIMIT) -> int:
    """|T(r, c, W)| by exhaustive search."""
    _check_limit(t.n, limit)
    w_rows = _graph_rows(t.w)
    return sum(1 for _ in _enumerate_bits(t.r, t.c, w_rows, t.n))


def _graph_rows(g: DiGraph) -> list[int]:
    n = g.n
    a = g.adj
    return [int(sum(int(a[i, j]) << j for j in range(n))) for i in range(n)]


def partition_by_type(n: int, limit: int = 4) -> dict[tuple[tuple[int, ...], tuple[int, ...]], list[int]]:
    """Bucket all 2^(n^2) graphs by their (r, c) degree pair.

    Returns bitmask lists keyed by (r, c); the single-pass sweep is the
    cheapest way to cross-check counting, feasibility, and interchange
    connectivity over every type at once.
    """
    _check_limit(n, limit)
    row_mask = (1 << n) - 1
    pop = [bin(m).count("1") for m in range(1 << n)]
    col_counts = [
        tuple((m >> j) & 1 for j in range(n)) for m in range(1 << n)
    ]
    buckets: dict[tuple[tuple[int, ...], tuple[int, ...]], list[int]] = {}
    for bits in range(1 << (n * n)):
        r = []
        c = [0] * n
        for i in range(n):
            row = (bits >> (i * n)) & row_mask
            r.append(pop[row])
            cc = col_counts[row]
            for j in range(n):
                c[j] += cc[j]
        buckets.setdefault((tuple(r), tuple(c)), []).append(bits)
    return buckets


def interchange_neighbors(g: DiGraph, w: DiGraph) -> list[DiGraph]:
    """All graphs one interchange away from g that still respect w.

    An interchange swaps a 2x2 submatrix between the patterns
    [[1,0],[0,1]] and [[0,1],[1,0]]; it preserves both degree vectors.
    """
    n = g.n
    a = g.adj
    out = []
    for i1, i2 in combinations(range(n), 2):
        for j1, j2 in combinations(range(n), 2):
            q = (a[i1, j1], a[i1, j2], a[i2, j1], a[i2, j2])
            if q == (1, 0, 0, 1):
                if w.adj[i1, j2] and w.adj[i2, j1]:
                    out.append(_swapped(g, i1, i2, j1, j2))
            elif q == (0, 1, 1, 0):
                if w.adj[i1, j1] and w.adj[i2, j2]:
                    out.append(_swapped(g, i1, i2, j1, j2))
    return out


def _swapped(g: DiGraph, i1: int, i2: int, j1: int, j2: int) -> DiGraph:
    b = g.adj.copy()
    for i, j in ((i1, j1), (i1, j2), (i2, j1), (i2, j2)):
        b[i, j] ^= 1
    return DiGraph(b)


def interchange_connected(t: EdgeType, limit: int = DEFAULT_LIMIT) -> bool:
    """BFS over single interchanges from the first member; True iff the
    walk reaches the whole class."""
    members = list(enumerate_class(t, limit=limit))
    if not members:
        raise ValueError("empty class has no interchange graph")
    target = set(members)
    seen = {members[0]}
    frontier = [members[0]]
    while frontier:
        nxt = []
        for g in frontier:
            for h in interchange_neighbors(g, t.w):
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen == target


def delta_degree_choices(value: int, n: int, delta: float, dens: int) -> list[int]:
    """Admissible per-vertex degrees: deviation strictly below delta*dens.

    delta=0 admits exactly the nominal degree (the zero deviation), so the
    δ-class degenerates to the plain class.
    """
    return [v for v in range(n + 1) if v == value or abs(v - value) < delta * dens]


def enumerate_delta_class(
    t: EdgeType, delta: float, dens: int, limit: int = DEFAULT_LIMIT
) -> Iterator[DiGraph]:
    """Disjoint union over all admissible (r~, c~) of their classes under W,
    in lexicographic order of (r~, c~) then class order."""
    _check_limit(t.n, limit)
    n = t.n
    r_opts = [delta_degree_choices(t.r[i], n, delta, dens) for i in range(n)]
    c_opts = [delta_degree_choices(t.c[j], n, delta, dens) for j in range(n)]
    for r_tilde in product(*r_opts):
        sr = sum(r_tilde)
        for c_tilde in product(*c_opts):
            if sum(c_tilde) != sr:
                continue
            yield from enumerate_class(EdgeType(r_tilde, c_tilde, t.w), limit=limit)


def enumerate_conditional(
    t: EdgeType,
    g: DiGraph,
    delta: float = 0.0,
    dens: int = 1,
    limit: int = DEFAULT_LIMIT,
) -> Iterator[DiGraph]:
    """Graphs H with H xor g in the (δ-)class of t, restricted by W.

    Here t carries the degree pair of the *distortion* graph; g is the
    reference and must itself respect W.
    """
    if not respects_restriction(g, t.w):
        raise ValueError("reference graph violates the restriction graph")
    source = (
        enumerate_class(t, limit=limit)
        if delta == 0
        else enumerate_delta_class(t, delta, dens, limit=limit)
    )
    for d in source:
        h = xor(g, d)
        if respects_restriction(h, t.w):
            yield h


def invariants_by_enumeration(t: EdgeType, limit: int = DEFAULT_LIMIT) -> InvariantMasks:
    """Invariant 1-/0-positions by intersecting all class members."""
    members = list(enumerate_class(t, limit=limit))
    if not members:
        raise ValueError("empty class has no invariant positions")
    inv1 = members[0].adj.copy()
    inv0 = 1 - members[0].adj
    for m in members[1:]:
        inv1 &= m.adj
        inv0 &= 1 - m.adj
    free = (1 - inv1 - inv0).astype(np.uint8)
    return InvariantMasks(inv1=DiGraph(inv1), inv0=DiGraph(inv0), free=DiGraph(free))


def components_by_enumeration(t: EdgeType, limit: int = DEFAULT_LIMIT) -> ComponentPartition:
    """Component partition recomputed from the member list.

    An invariance corner (e, f) is a cut pair where every member has an
    all-ones top-left e x f block and an all-zeros bottom-right block; the
    distinct interior corner coordinates cut [n] into the row and column
    blocks, and a block is trivial when all its cells are invariant across
    members.  For normalized unrestricted types this matches the zero
    cells of the structure matrix.
    """
    members = list(enumerate_class(t, limit=limit))
    if not members:
        raise ValueError("empty class has no components")
    n = t.n
    inv = invariants_by_enumeration(t, limit=limit)
    # 2D prefix sums per member make each corner check O(1):
    # top-left all ones  <=> prefix[e][f] == e*f
    # bottom-right all zeros <=> total - row strip - col strip + prefix == 0
    prefixes = []
    for m in members:
        p = np.zeros((n + 1, n + 1), dtype=np.int64)
        p[1:, 1:] = m.adj.astype(np.int64).cumsum(axis=0).cumsum(axis=1)
        prefixes.append(p)
    corners = []
    for e in range(n + 1):
        for f in range(n + 1):
            if all(
                p[e, f] == e * f
                and p[n, n] - p[e, n] - p[n, f] + p[e, f] == 0
                for p in prefixes
            ):
                corners.append((e, f))
    row_cuts = sorted({e for e, _ in corners if 0 < e < n})
    col_cuts = sorted({f for _, f in corners if 0 < f < n})
    row_blocks = _blocks(n, row_cuts)
    col_blocks = _blocks(n, col_cuts)
    free = inv.free.adj
    blocks = []
    for rows in row_blocks:
        for cols in col_blocks:
            trivial = not free[np.ix_(rows, cols)].any()
            blocks.append((rows, cols, trivial))
    return ComponentPartition(
        row_blocks=tuple(row_blocks), col_blocks=tuple(col_blocks), blocks=tuple(blocks)
    )


def _blocks(n: int, cuts: list[int]) -> list[tuple[int, ...]]:
    bounds = [0, *cuts, n]
    return [tuple(range(bounds[k], bounds[k + 1])) for k in range(len(bounds) - 1)]
