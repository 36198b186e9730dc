"""Directed-graph values, degree extraction, boolean algebra, and the
per-vertex local-structure distortion measure.

Graphs live on the vertex set {1, ..., n} (stored 0-indexed), self-loops
allowed, represented by an n x n binary adjacency matrix.  All values are
immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DiGraph",
    "DegreePair",
    "DistortionValue",
    "degrees",
    "xor",
    "and_",
    "complement",
    "distortion",
    "respects_restriction",
    "density",
]


class DiGraph:
    """Immutable directed graph over [n] backed by a 0/1 adjacency matrix."""

    __slots__ = ("_adj", "_hash")

    def __init__(self, adj: Sequence[Sequence[int]] | np.ndarray):
        a = np.asarray(adj, dtype=np.uint8)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"adjacency matrix must be square, got shape {a.shape}")
        if a.size and not np.isin(a, (0, 1)).all():
            raise ValueError("adjacency entries must be 0 or 1")
        a.setflags(write=False)
        self._adj = a
        self._hash = hash((a.shape[0], a.tobytes()))

    @property
    def n(self) -> int:
        return self._adj.shape[0]

    @property
    def adj(self) -> np.ndarray:
        return self._adj

    @classmethod
    def empty(cls, n: int) -> "DiGraph":
        return cls(np.zeros((n, n), dtype=np.uint8))

    @classmethod
    def complete(cls, n: int) -> "DiGraph":
        return cls(np.ones((n, n), dtype=np.uint8))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "DiGraph":
        """Build from 0-indexed (i, j) pairs."""
        a = np.zeros((n, n), dtype=np.uint8)
        for i, j in edges:
            a[i, j] = 1
        return cls(a)

    @classmethod
    def from_bits(cls, n: int, bits: int) -> "DiGraph":
        """Decode a row-major bitmask (bit k = cell (k // n, k % n))."""
        a = np.zeros(n * n, dtype=np.uint8)
        for k in range(n * n):
            a[k] = (bits >> k) & 1
        return cls(a.reshape(n, n))

    def to_bits(self) -> int:
        bits = 0
        flat = self._adj.reshape(-1)
        for k in range(flat.size):
            if flat[k]:
                bits |= 1 << k
        return bits

    def edge_count(self) -> int:
        return int(self._adj.sum())

    def tolist(self) -> list[list[int]]:
        return self._adj.astype(int).tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiGraph):
            return NotImplemented
        return self.n == other.n and bool((self._adj == other._adj).all())

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"DiGraph({self.tolist()})"


@dataclass(frozen=True)
class DegreePair:
    """Out-degree vector r and in-degree vector c of a directed graph."""

    r: tuple[int, ...]
    c: tuple[int, ...]

    def __post_init__(self):
        if len(self.r) != len(self.c):
            raise ValueError("r and c must have equal length")

    @property
    def n(self) -> int:
        return len(self.r)


@dataclass(frozen=True, order=True)
class DistortionValue:
    """Exact rational distortion k/n, k in [0, n]."""

    numerator: int
    denominator: int

    def __post_init__(self):
        if not 0 <= self.numerator <= self.denominator:
            raise ValueError("distortion numerator must lie in [0, n]")

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self) -> float:
        return self.numerator / self.denominator


def degrees(g: DiGraph) -> DegreePair:
    """Row sums (out-degrees) and column sums (in-degrees) of the adjacency matrix."""
    return DegreePair(
        r=tuple(int(x) for x in g.adj.sum(axis=1)),
        c=tuple(int(x) for x in g.adj.sum(axis=0)),
    )


def _check_same_n(g: DiGraph, h: DiGraph) -> None:
    if g.n != h.n:
        raise ValueError(f"dimension mismatch: {g.n} vs {h.n}")


def xor(g: DiGraph, h: DiGraph) -> DiGraph:
    _check_same_n(g, h)
    return DiGraph(g.adj ^ h.adj)


def and_(g: DiGraph, h: DiGraph) -> DiGraph:
    _check_same_n(g, h)
    return DiGraph(g.adj & h.adj)


def complement(g: DiGraph) -> DiGraph:
    return DiGraph(1 - g.adj)


def distortion(g: DiGraph, h: DiGraph) -> DistortionValue:
    """Worst per-vertex fraction of edge disagreements between g and h.

    (1/n) * max(||r_{g xor h}||_inf, ||c_{g xor h}||_inf), returned exactly.
    """
    _check_same_n(g, h)
    d = g.adj ^ h.adj
    worst = max(int(d.sum(axis=1).max(initial=0)), int(d.sum(axis=0).max(initial=0)))
    return DistortionValue(worst, g.n)


def respects_restriction(g: DiGraph, w: DiGraph) -> bool:
    """True iff every edge of g is allowed by w (g == g AND w)."""
    _check_same_n(g, w)
    return bool(((g.adj & w.adj) == g.adj).all())


def density(r: Sequence[int], c: Sequence[int]) -> int:
    """Fixed-n degree-density of a type: the maximum degree, floored at 1.

    The floor keeps the slack terms that divide by the density finite for
    the all-zero type.
    """
    m = max(max(r, default=0), max(c, default=0))
    return max(1, int(m))
