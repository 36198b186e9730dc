"""Probability laws over edge-type classes.

Covers the rank-one logistic family of independent-edge random graphs
(under which every member of a class is equiprobable), point and class
probabilities expressed through the maximum-entropy graph and KL
divergences, a Sanov-style bound for unions of classes, the Hoeffding
lower bound on δ-class probability, and mixture decompositions extending
the family to arbitrary product random graphs.

All probability arithmetic is done in log space (nats).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import DiGraph
from .maxent import ProductRandomGraph, solve_maxent
from .typealg import EdgeType

__all__ = [
    "FamilyDParams",
    "MixtureDecomposition",
    "family_d_graph",
    "graph_prob",
    "log_graph_prob",
    "kl_bernoulli",
    "kl_sum",
    "typeclass_point_prob",
    "typeclass_prob_bounds",
    "sanov_bounds",
    "delta_class_prob_lower",
    "verify_mixture",
    "decompose_single_edge",
    "mixture_lower_bound",
]


@dataclass(frozen=True)
class FamilyDParams:
    """Rank-one logistic parameters: p_ij = sigma(-(a_i + b_j)) on W cells.

    Entries may be +/-inf; +inf forces p = 0 and dominates -inf (so a
    single-cell-support graph is expressible), -inf alone forces p = 1.
    """

    a: tuple[float, ...]
    b: tuple[float, ...]
    w: DiGraph

    def __post_init__(self):
        n = self.w.n
        if len(self.a) != n or len(self.b) != n:
            raise ValueError("parameter vectors must have length n")
        object.__setattr__(self, "a", tuple(float(x) for x in self.a))
        object.__setattr__(self, "b", tuple(float(x) for x in self.b))

    @property
    def n(self) -> int:
        return self.w.n


@dataclass(frozen=True)
class MixtureDecomposition:
    """Convex combination of family atoms matching a product random graph."""

    weights: tuple[float, ...]
    atoms: tuple[FamilyDParams, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.atoms) or not self.atoms:
            raise ValueError("need one weight per atom and at least one atom")
        if any(not 0 < lam <= 1 for lam in self.weights):
            raise ValueError("weights must lie in (0, 1]")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")


def _logistic_cell(a: float, b: float) -> float:
    if math.isinf(a) and a > 0 or math.isinf(b) and b > 0:
        return 0.0
    if math.isinf(a) or math.isinf(b):
        return 1.0
    z = -(a + b)
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def family_d_graph(params: FamilyDParams) -> ProductRandomGraph:
    """Materialize the logistic probabilities, forcing zeros off W."""
    n = params.n
    p = np.zeros((n, n), dtype=float)
    for i in range(n):
        for j in range(n):
            if params.w.adj[i, j]:
                p[i, j] = _logistic_cell(params.a[i], params.b[j])
    return ProductRandomGraph(p=p, w=params.w)


def log_graph_prob(f: ProductRandomGraph, g: DiGraph) -> float:
    """ln Pr(F = g) for an independent-edge random graph; -inf when g is
    outside the support."""
    if f.n != g.n:
        raise ValueError("dimension mismatch")
    total = 0.0
    for i in range(f.n):
        for j in range(f.n):
            p = float(f.p[i, j])
            if g.adj[i, j]:
                if p == 0.0:
                    return -math.inf
                total += math.log(p)
            else:
                if p == 1.0:
                    return -math.inf
                total += math.log1p(-p)
    return total


def graph_prob(f: ProductRandomGraph, g: DiGraph) -> float:
    return math.exp(log_graph_prob(f, g))


def kl_bernoulli(p: float, q: float) -> float:
    """D(p || q) in nats; raises on absolute-continuity violation."""
    d = _kl_cell(p, q)
    if math.isinf(d):
        raise ValueError(f"absolute continuity violated: D({p} || {q}) infinite")
    return d


def _kl_cell(p: float, q: float) -> float:
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise ValueError("probabilities must lie in [0, 1]")
    total = 0.0
    if p > 0.0:
        if q == 0.0:
            return math.inf
        total += p * math.log(p / q)
    if p < 1.0:
        if q == 1.0:
            return math.inf
        total += (1.0 - p) * math.log((1.0 - p) / (1.0 - q))
    return total


def kl_sum(pt: ProductRandomGraph, f: ProductRandomGraph) -> float:
    """Sum over W-allowed cells of D((p_T)_ij || p_ij); +inf encodes an
    unrecoverable continuity failure (a forced cell of f that is not the
    matching invariant cell of the class)."""
    if pt.n != f.n:
        raise ValueError("dimension mismatch")
    total = 0.0
    for i in range(pt.n):
        for j in range(pt.n):
            if pt.w.adj[i, j]:
                total += _kl_cell(float(pt.p[i, j]), float(f.p[i, j]))
                if math.isinf(total):
                    return math.inf
    return total


def typeclass_point_prob(
    params: FamilyDParams, t: EdgeType, tol: float | None = None
) -> float:
    """Common probability of every member of T(r,c,W) under the family
    graph: exp(-H(F_T) - sum of cellwise KL terms).

    Forced cells of the family graph that coincide with the class's
    invariant cells contribute zero KL (the fold-into-W reduction);
    anywhere else they make the class probability non-constant and an
    error is raised.
    """
    f = family_d_graph(params)
    ft, _, report = solve_maxent(t, tol=tol)
    kl = kl_sum(ft, f)
    if math.isinf(kl):
        raise ValueError(
            "family graph forces a non-invariant cell; class probability is "
            "not constant and cannot be expressed through F_T"
        )
    return math.exp(-report.entropy_nats - kl)


def typeclass_prob_bounds(
    params: FamilyDParams, t: EdgeType, tol: float | None = None, limit: int = 6
) -> tuple[float | None, float, float | None]:
    """(lower, upper, exact) for Pr(F in T(r,c,W)).

    upper = exp(-sum KL).  When the class is enumerable, exact is the
    summed member probability and lower = upper * (count / alpha), the
    measured stand-in for the quasi-polynomial factor; above the limit
    lower is None (the universal constant is unknown).
    """
    from .enumeration import count_class, enumerate_class

    f = family_d_graph(params)
    ft, _, report = solve_maxent(t, tol=tol)
    kl = kl_sum(ft, f)
    if math.isinf(kl):
        raise ValueError("continuity failure: upper bound formula undefined")
    upper = math.exp(-kl)
    if t.n > limit:
        return None, upper, None
    count = count_class(t, limit=limit)
    exact = 0.0
    for g in enumerate_class(t, limit=limit):
        exact += graph_prob(f, g)
    lower = math.exp(-kl + math.log(count) - report.entropy_nats) if count else 0.0
    return lower, upper, exact


def sanov_bounds(
    params: FamilyDParams,
    types: list[EdgeType],
    tol: float | None = None,
    limit: int = 6,
) -> tuple[float, float, float | None]:
    """(lower, upper, exact) for Pr(F in union of the listed classes).

    upper = exp(2n ln(n+1) - min KL); lower replaces the universal
    constant with the largest measured counting gap among the listed
    types, which keeps the bound valid on enumerable instances.
    """
    if not types:
        raise ValueError("need at least one type")
    from .enumeration import count_class, enumerate_class

    f = family_d_graph(params)
    n = types[0].n
    seen: set[tuple] = set()
    min_kl = math.inf
    max_gap = 0.0
    exact: float | None = 0.0
    for t in types:
        if t.n != n:
            raise ValueError("all types must share n")
        key = (t.r, t.c, t.w.to_bits())
        if key in seen:
            continue
        seen.add(key)
        ft, _, report = solve_maxent(t, tol=tol)
        kl = kl_sum(ft, f)
        min_kl = min(min_kl, kl)
        if n <= limit:
            count = count_class(t, limit=limit)
            if count == 0:
                raise ValueError("empty type in collection")
            gap = max(0.0, report.entropy_nats - math.log(count))
            max_gap = max(max_gap, gap)
            for g in enumerate_class(t, limit=limit):
                exact += graph_prob(f, g)
        else:
            exact = None
    if math.isinf(min_kl):
        raise ValueError("continuity failure on every listed type")
    # max_gap plays the role of gamma * n * ln(n); the theorem's exponent
    # is 4x that, which only loosens a valid lower bound.
    lower = math.exp(-4.0 * max_gap - min_kl)
    upper = math.exp(2.0 * n * math.log(n + 1) - min_kl)
    return lower, upper, exact


def delta_class_prob_lower(t: EdgeType, delta: float, dens: int) -> float:
    """Hoeffding lower bound on Pr(F_T lands in the δ-class of its own
    type): max(0, 1 - 4n exp(-2 dens^2 delta^2 / n))."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    n = t.n
    return max(0.0, 1.0 - 4.0 * n * math.exp(-2.0 * dens * dens * delta * delta / n))


def verify_mixture(
    p: ProductRandomGraph, mix: MixtureDecomposition, tol: float = 1e-9
) -> bool:
    """True iff the weighted atom probabilities reproduce p elementwise."""
    acc = np.zeros((p.n, p.n))
    for lam, atom in zip(mix.weights, mix.atoms):
        if atom.n != p.n:
            return False
        acc += lam * family_d_graph(atom).p
    return bool(np.abs(acc - p.p).max(initial=0.0) <= tol)


def _single_cell_params(n: int, i: int, j: int, value: float, w: DiGraph) -> FamilyDParams:
    a = [math.inf] * n
    b = [math.inf] * n
    if value >= 1.0:
        a[i] = -math.inf
        b[j] = 0.0
    else:
        a[i] = math.log(1.0 / value - 1.0)
        b[j] = 0.0
    return FamilyDParams(a=tuple(a), b=tuple(b), w=w)


def decompose_single_edge(p: ProductRandomGraph) -> MixtureDecomposition:
    """Mixture of single-edge atoms reproducing p when its total edge mass
    S is at most 1: each positive cell (i, j) becomes a deterministic
    single-edge atom with weight p_ij, plus a zero-graph atom of weight
    1 - S when S < 1."""
    n = p.n
    cells = [
        (i, j, float(p.p[i, j]))
        for i in range(n)
        for j in range(n)
        if p.p[i, j] > 0
    ]
    s = sum(v for _, _, v in cells)
    if s > 1.0 + 1e-12:
        raise ValueError(f"total edge mass {s:.6g} exceeds 1; single-edge atoms cannot reproduce p")
    s = min(s, 1.0)
    weights: list[float] = []
    atoms: list[FamilyDParams] = []
    for i, j, v in cells:
        weights.append(v)
        atoms.append(_single_cell_params(n, i, j, 1.0, p.w))
    if s < 1.0:
        zero = FamilyDParams(a=(math.inf,) * n, b=(math.inf,) * n, w=p.w)
        weights.append(1.0 - s)
        atoms.append(zero)
    return MixtureDecomposition(weights=tuple(weights), atoms=tuple(atoms))


def mixture_lower_bound(
    mix: MixtureDecomposition, t: EdgeType, tol: float | None = None
) -> float:
    """exp(-H(F_T) - sum_k lambda_k * KL_k): a lower bound on the point
    probability of any class member under the mixed product graph.  An
    atom violating absolute continuity drives its KL term to +inf and the
    bound collapses to 0 (still valid, just vacuous)."""
    ft, _, report = solve_maxent(t, tol=tol)
    exponent = report.entropy_nats
    for lam, atom in zip(mix.weights, mix.atoms):
        kl = kl_sum(ft, family_d_graph(atom))
        if math.isinf(kl):
            return 0.0
        exponent += lam * kl
    return math.exp(-exponent)
