"""Algorithms on the weighted complete graph K_n.

Vertices are labelled 1..n. The minimum-weight tree with at least tau edges
is attacked from three sides: a greedy spanning path whose tau-edge prefix is
a feasible upper bound, a threshold edge count that certifies a lower bound,
and an exact subset-enumeration oracle for desk-scale n. Kruskal gives the
spanning case exactly, and a Prufer-sequence full enumeration double-checks
Kruskal at tiny n.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import rng
from .errors import CapacityError
from .weights import SeedContext, TreeWeightSpec, weight_matrix, weights_from_vertex

# Instances at or below this vertex count materialize the weight matrix for
# O(1) access; above it weights are recomputed from the keyed sampler.
MATRIX_CACHE_THRESHOLD = 1024


class CompleteInstance:
    """One realization of K_n weights, accessed through the edge oracle.

    Build either from (n, spec, ctx) for keyed sampling, or from an explicit
    symmetric matrix via :meth:`from_matrix` (the frozen-matrix test hook).
    """

    def __init__(self, n: int, spec: TreeWeightSpec, ctx: SeedContext):
        if n < 2:
            raise ValueError(f"need at least 2 vertices, got {n}")
        self.n = n
        self.spec = spec
        self.ctx = ctx
        self._matrix = None

    @classmethod
    def from_matrix(cls, matrix, spec: TreeWeightSpec | None = None) -> "CompleteInstance":
        m = np.array(matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
            raise ValueError("matrix must be square with at least 2 vertices")
        if not np.array_equal(m, m.T):
            raise ValueError("matrix must be symmetric")
        inst = cls.__new__(cls)
        inst.n = m.shape[0]
        inst.spec = spec
        inst.ctx = None
        inst._matrix = m.copy()
        np.fill_diagonal(inst._matrix, np.inf)
        return inst

    def matrix(self) -> np.ndarray | None:
        """Cached weight matrix, or None when n exceeds the cache threshold."""
        if self._matrix is None and self.n <= MATRIX_CACHE_THRESHOLD:
            self._matrix = weight_matrix(self.spec, self.ctx, self.n)
        return self._matrix

    def weight(self, i: int, j: int) -> float:
        if i == j:
            raise ValueError(f"self-loop ({i},{i}) has no weight")
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise ValueError(f"vertex indices must lie in 1..{self.n}, got ({i},{j})")
        m = self.matrix()
        if m is not None:
            return float(m[i - 1, j - 1])
        return float(weights_from_vertex(self.spec, self.ctx, i, np.array([j]))[0])

    def row(self, i: int) -> np.ndarray:
        """Weights from vertex i to every vertex (self entry +inf)."""
        m = self.matrix()
        if m is not None:
            return m[i - 1].copy()
        row = weights_from_vertex(self.spec, self.ctx, i, np.arange(1, self.n + 1))
        row[i - 1] = np.inf
        return row

    def edge_arrays(self):
        """All edges lo < hi as (lo, hi, weight) arrays."""
        m = self.matrix()
        if m is not None:
            lo0, hi0 = np.triu_indices(self.n, 1)
            return lo0 + 1, hi0 + 1, m[lo0, hi0]
        lo0, hi0 = np.triu_indices(self.n, 1)
        lo = (lo0 + 1).astype(np.uint64)
        hi = (hi0 + 1).astype(np.uint64)
        h = rng.hash_words_vec(
            rng.STREAM_TREE_WEIGHT, self.ctx.master_seed, self.ctx.trial_index, lo, hi
        )
        u = rng.unit_vec(h)
        if self.spec.heterogeneous:
            v = rng.unit_vec(rng.hash_words_vec(rng.STREAM_TREE_SCALE, lo, hi))
            scale = self.spec.m_min + (1.0 - self.spec.m_min) * v
        else:
            scale = 1.0
        return lo0 + 1, hi0 + 1, scale * u**self.spec.alpha


@dataclass(frozen=True)
class TreeResult:
    """A tree as an edge list; total_weight sums edges in sorted-key order."""

    edges: tuple
    total_weight: float
    edge_count: int


@dataclass(frozen=True)
class GreedyPathResult:
    order: tuple
    step_weights: tuple
    prefix_sums: tuple


class UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, u):
        p = self.parent
        while p[u] != u:
            p[u] = p[p[u]]
            u = p[u]
        return u

    def union(self, u, v):
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            return False
        self.parent[rv] = ru
        return True


def _canonical_total(edges, weight_of) -> float:
    """Sum edge weights in sorted-key order (tie-break-insensitive value)."""
    total = 0.0
    for lo, hi in sorted(edges):
        total += weight_of(lo, hi)
    return total


def greedy_spanning_path(inst: CompleteInstance) -> GreedyPathResult:
    """Incremental nearest-unvisited-vertex spanning path from vertex 1.

    Ties break toward the smallest vertex index. O(n^2) weight evaluations,
    O(n) extra memory.
    """
    n = inst.n
    visited = np.zeros(n, dtype=bool)
    visited[0] = True
    order = [1]
    steps = []
    prefix = []
    acc = 0.0
    cur = 1
    for _ in range(n - 1):
        row = inst.row(cur)
        row[visited] = np.inf
        nxt0 = int(np.argmin(row))
        w = float(row[nxt0])
        visited[nxt0] = True
        cur = nxt0 + 1
        order.append(cur)
        steps.append(w)
        acc += w
        prefix.append(acc)
    return GreedyPathResult(order=tuple(order), step_weights=tuple(steps), prefix_sums=tuple(prefix))


def min_tree_upper_bound(inst: CompleteInstance, tau: int, path: GreedyPathResult | None = None) -> float:
    """Weight of the first tau greedy steps; a feasible tau-edge tree."""
    if not 1 <= tau <= inst.n - 1:
        raise ValueError(f"tau must lie in 1..{inst.n - 1}, got {tau}")
    if path is None:
        path = greedy_spanning_path(inst)
    return path.prefix_sums[tau - 1]


def kruskal_mst(inst: CompleteInstance) -> TreeResult:
    """Exact minimum spanning tree by sorted edges and union-find.

    Ties break by lexicographic edge key, so the selected edge set is
    deterministic.
    """
    lo, hi, w = inst.edge_arrays()
    order = np.lexsort((hi, lo, w))
    uf = UnionFind(inst.n + 1)
    edges = []
    need = inst.n - 1
    for e in order:
        a, b = int(lo[e]), int(hi[e])
        if uf.union(a, b):
            edges.append((a, b))
            if len(edges) == need:
                break
    total = _canonical_total(edges, inst.weight)
    return TreeResult(edges=tuple(edges), total_weight=total, edge_count=len(edges))


def light_edge_count(inst: CompleteInstance, gamma: float) -> int:
    """Number of edges of weight strictly below (gamma/n)**alpha (full scan)."""
    if gamma <= 0.0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if inst.spec is None:
        raise ValueError("light_edge_count needs a weight spec for alpha")
    threshold = (gamma / inst.n) ** inst.spec.alpha
    _, _, w = inst.edge_arrays()
    return int(np.count_nonzero(w < threshold))


def threshold_lower_bound(inst: CompleteInstance, tau: int, gamma: float) -> float:
    """Certified lower bound from counting light edges.

    Counts R_tot = #{e : w(e) < (gamma/n)**alpha} over all edges and returns
    max(0, tau - R_tot) * (gamma/n)**alpha: a tree with at least tau edges
    carries at least tau - R_tot edges of weight >= threshold. The inequality
    is strict (<) in the count.
    """
    if not 1 <= tau <= inst.n - 1:
        raise ValueError(f"tau must lie in 1..{inst.n - 1}, got {tau}")
    r_tot = light_edge_count(inst, gamma)
    threshold = (gamma / inst.n) ** inst.spec.alpha
    return max(0, tau - r_tot) * threshold


def _dense(inst: CompleteInstance) -> np.ndarray:
    """Weight matrix for desk-scale algorithms, built locally if uncached."""
    m = inst.matrix()
    if m is None:
        m = weight_matrix(inst.spec, inst.ctx, inst.n)
    return m


def _prim_subset(W: np.ndarray, subset) -> tuple:
    """MST of the induced complete subgraph on ``subset`` (0-based indices)."""
    verts = list(subset)
    m = len(verts)
    in_tree = [False] * m
    in_tree[0] = True
    best_w = [float(W[verts[0], verts[b]]) for b in range(m)]
    best_from = [0] * m
    edges = []
    for _ in range(m - 1):
        pick, pick_w = -1, math.inf
        for b in range(m):
            if not in_tree[b] and best_w[b] < pick_w:
                pick, pick_w = b, best_w[b]
        in_tree[pick] = True
        a = best_from[pick]
        u, v = verts[a] + 1, verts[pick] + 1
        edges.append((u, v) if u < v else (v, u))
        for b in range(m):
            if not in_tree[b]:
                w = float(W[verts[pick], verts[b]])
                if w < best_w[b]:
                    best_w[b] = w
                    best_from[b] = pick
    return edges


def exact_min_tree(inst: CompleteInstance, tau: int, budget: int = 10**8) -> TreeResult:
    """Exact minimum over trees with at least tau edges, by subset enumeration.

    With strictly positive weights the optimum has exactly tau edges and
    spans tau + 1 vertices, so the answer is the best MST over all
    (tau+1)-subsets. Ties go to the lexicographically smallest subset.
    Only feasible at desk scale: n <= 12 and C(n, tau+1)*(tau+1)**2 within
    the step budget.
    """
    n = inst.n
    if not 1 <= tau <= n - 1:
        raise ValueError(f"tau must lie in 1..{n - 1}, got {tau}")
    if n > 12:
        raise ValueError(f"exact_min_tree is limited to n <= 12, got {n}")
    steps = math.comb(n, tau + 1) * (tau + 1) ** 2
    if steps > budget:
        raise CapacityError(
            f"enumeration would take {steps} elementary steps, budget is {budget}"
        )
    W = _dense(inst)
    best_total = math.inf
    best_edges = None
    for subset in itertools.combinations(range(n), tau + 1):
        edges = _prim_subset(W, subset)
        total = _canonical_total(edges, inst.weight)
        if total < best_total:
            best_total = total
            best_edges = edges
    assert best_edges is not None and len(best_edges) == tau
    return TreeResult(edges=tuple(best_edges), total_weight=best_total, edge_count=tau)


def sample_yj(inst: CompleteInstance, prefix) -> float:
    """Minimum edge weight from the last prefix vertex to any vertex outside it.

    The whole prefix is excluded from the candidate set, so with j prefix
    vertices there are n - j candidates and j must stay at most n - 1.
    """
    prefix = tuple(prefix)
    j = len(prefix)
    if not 1 <= j <= inst.n - 1:
        raise ValueError(f"prefix length must lie in 1..{inst.n - 1}, got {j}")
    if len(set(prefix)) != j:
        raise ValueError("prefix entries must be distinct")
    for a in prefix:
        if not 1 <= a <= inst.n:
            raise ValueError(f"prefix entry {a} outside 1..{inst.n}")
    excluded = set(prefix)
    targets = np.array([a for a in range(1, inst.n + 1) if a not in excluded])
    # single-row query: use the matrix only if it is already materialized
    m = inst._matrix
    if m is not None:
        return float(m[prefix[-1] - 1, targets - 1].min())
    return float(weights_from_vertex(inst.spec, inst.ctx, prefix[-1], targets).min())


# -- Prufer-sequence enumeration oracle ----------------------------------------


def prufer_to_edges(seq, n: int) -> tuple:
    """Decode a Prufer sequence into the edge list of its labelled tree."""
    degree = [1] * (n + 1)
    for s in seq:
        degree[s] += 1
    edges = []
    for s in seq:
        for leaf in range(1, n + 1):
            if degree[leaf] == 1:
                edges.append((leaf, s) if leaf < s else (s, leaf))
                degree[leaf] -= 1
                degree[s] -= 1
                break
    u, v = [x for x in range(1, n + 1) if degree[x] == 1]
    edges.append((u, v))
    return tuple(edges)


@lru_cache(maxsize=4)
def all_labelled_trees(n: int) -> np.ndarray:
    """Edge lists of all n**(n-2) labelled trees, edges sorted by key.

    Shaped (n**(n-2), n-1, 2) with 1-based vertex labels. Cached: the
    enumeration is reused across seeds.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if n == 2:
        return np.array([[[1, 2]]], dtype=np.int64)
    if n > 8:
        raise CapacityError(f"enumerating {n}**{n - 2} trees is out of budget")
    trees = []
    for seq in itertools.product(range(1, n + 1), repeat=n - 2):
        trees.append(sorted(prufer_to_edges(seq, n)))
    return np.array(trees, dtype=np.int64)


def prufer_mst_weight(inst: CompleteInstance) -> float:
    """Minimum spanning tree weight by full labelled-tree enumeration.

    Edge weights accumulate in sorted-key order per tree, matching the
    canonical total of kruskal_mst bit for bit on the optimal tree.
    """
    trees = all_labelled_trees(inst.n)
    W = _dense(inst)
    w = W[trees[:, :, 0] - 1, trees[:, :, 1] - 1]
    totals = w[:, 0]
    for col in range(1, w.shape[1]):
        totals = totals + w[:, col]
    return float(totals.min())
