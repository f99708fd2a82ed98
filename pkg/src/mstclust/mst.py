"""Euclidean minimum spanning trees and the tree queries used by the algorithms."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from mstclust.core import Dataset, DomainError, Partition, canonical_labels, distances_from


class Edge(NamedTuple):
    u: int
    v: int
    weight: float


@dataclass(frozen=True, eq=False)
class Mst:
    """The n-1 edges of a spanning tree, sorted by the key (weight, u, v).

    Edge identifiers are positions in this sorted order, so edge 0 is the
    shortest and edge n-2 the longest.
    """

    n: int
    u: np.ndarray
    v: np.ndarray
    weight: np.ndarray
    adjacency: list = field(repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "Mst":
        """Assemble a tree from (u, v, weight) triples in any order."""
        edges = [(float(w), min(int(a), int(b)), max(int(a), int(b))) for a, b, w in edges]
        if len(edges) != n - 1:
            raise DomainError(f"a spanning tree on {n} vertices needs {n - 1} edges, got {len(edges)}")
        edges.sort()
        w = np.array([e[0] for e in edges], dtype=np.float64)
        u = np.array([e[1] for e in edges], dtype=np.intp)
        v = np.array([e[2] for e in edges], dtype=np.intp)
        adjacency = [[] for _ in range(n)]
        for i, (a, b) in enumerate(zip(u.tolist(), v.tolist())):
            adjacency[a].append((b, i))
            adjacency[b].append((a, i))
        for arr in (u, v, w):
            arr.setflags(write=False)
        mst = cls(n, u, v, w, adjacency)
        if n > 1 and connected_components(mst._graph(np.ones(n - 1, bool)), directed=False)[0] != 1:
            raise DomainError("edges do not form a spanning tree")
        return mst

    @property
    def m(self) -> int:
        return self.n - 1

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weight))

    @property
    def edges(self) -> list[Edge]:
        return [Edge(a, b, w) for a, b, w in zip(self.u.tolist(), self.v.tolist(), self.weight.tolist())]

    def edge(self, i: int) -> Edge:
        return Edge(int(self.u[i]), int(self.v[i]), float(self.weight[i]))

    def _graph(self, keep: np.ndarray):
        return coo_matrix(
            (np.ones(int(keep.sum())), (self.u[keep], self.v[keep])), shape=(self.n, self.n)
        ).tocsr()

    def labels_from_cut(self, cut: np.ndarray) -> np.ndarray:
        """Canonical labels of the components left after deleting edges where ``cut`` is True."""
        if self.n == 1:
            return np.ones(1, dtype=np.intp)
        _, comp = connected_components(self._graph(~cut), directed=False)
        return canonical_labels(comp)


def build_mst(ds: Dataset, jitter: float = 0.0, seed: int | None = None) -> Mst:
    """Jarník-Prim over the complete Euclidean graph in O(n^2) time, O(n) memory.

    Ties between equal distances are broken by the (weight, u, v) key, which
    makes the tree unique.  A positive ``jitter`` instead perturbs the
    coordinates with seeded uniform noise of that amplitude before building;
    weights then refer to the perturbed points.
    """
    X = ds.points
    if jitter > 0:
        rng = np.random.default_rng(seed)
        X = X + rng.uniform(-jitter, jitter, size=X.shape)
    n = X.shape[0]
    if n == 1:
        return Mst.from_edges(1, [])

    idx = np.arange(n)
    in_tree = np.zeros(n, dtype=bool)
    best_w = np.full(n, np.inf)
    best_lo = np.full(n, n, dtype=np.intp)  # key (best_w, best_lo, best_hi) of the lightest link
    best_hi = np.full(n, n, dtype=np.intp)
    best_src = np.full(n, -1, dtype=np.intp)
    edges = []
    cur = 0
    for _ in range(n - 1):
        in_tree[cur] = True
        d = distances_from(X, cur)
        lo = np.minimum(idx, cur)
        hi = np.maximum(idx, cur)
        better = (d < best_w) | ((d == best_w) & ((lo < best_lo) | ((lo == best_lo) & (hi < best_hi))))
        better &= ~in_tree
        best_w[better] = d[better]
        best_lo[better] = lo[better]
        best_hi[better] = hi[better]
        best_src[better] = cur

        w_out = np.where(in_tree, np.inf, best_w)
        wmin = w_out.min()
        cand = np.flatnonzero(w_out == wmin)
        if cand.size > 1:
            cand = cand[np.lexsort((best_hi[cand], best_lo[cand]))]
        nxt = int(cand[0])
        edges.append((int(best_src[nxt]), nxt, float(best_w[nxt])))
        cur = nxt
    return Mst.from_edges(n, edges)


def components_after_removal(mst: Mst, removed: Iterable[int]) -> Partition:
    """The partition obtained by deleting the given edge identifiers."""
    cut = np.zeros(mst.m, dtype=bool)
    for e in removed:
        e = int(e)
        if not 0 <= e < mst.m:
            raise DomainError(f"edge identifier {e} is not in the tree (0..{mst.m - 1})")
        cut[e] = True
    return Partition(mst.labels_from_cut(cut))


def vertex_degrees(mst: Mst) -> np.ndarray:
    return np.bincount(np.concatenate([mst.u, mst.v]), minlength=mst.n)


def tree_distances(mst: Mst, source: int, allowed: np.ndarray | None = None) -> np.ndarray:
    """Path lengths from ``source`` to every vertex along the tree.

    With ``allowed`` (a boolean mask over edges) only those edges are
    traversed; unreachable vertices get infinity.
    """
    dist = np.full(mst.n, np.inf)
    dist[source] = 0.0
    stack = [source]
    weight = mst.weight
    while stack:
        a = stack.pop()
        for b, e in mst.adjacency[a]:
            if dist[b] == np.inf and (allowed is None or allowed[e]):
                dist[b] = dist[a] + weight[e]
                stack.append(b)
    return dist


def tree_path_length(mst: Mst, a: int, b: int) -> float:
    if a == b:
        return 0.0
    # accumulate from the smaller index so that the result is symmetric bitwise
    a, b = min(a, b), max(a, b)
    return float(tree_distances(mst, a)[b])


@dataclass(frozen=True, eq=False)
class NeighbourTable:
    """The M nearest other points of every point, nearest first."""

    indices: np.ndarray
    distances: np.ndarray

    @property
    def M(self) -> int:
        return self.indices.shape[1]


def knn_table(ds: Dataset, M: int, chunk: int = 256) -> NeighbourTable:
    """Exact M nearest neighbours by brute force; ties go to the lower index."""
    if M < 1:
        raise DomainError("M must be positive")
    X = ds.points
    n = ds.n
    m = min(M, n - 1)
    ind = np.empty((n, m), dtype=np.intp)
    dist = np.empty((n, m))
    for start in range(0, n, chunk):
        rows = np.arange(start, min(start + chunk, n))
        diff = X[rows, None, :] - X[None, :, :]
        D = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        D[np.arange(rows.size), rows] = np.inf
        order = np.argsort(D, axis=1, kind="stable")[:, :m]
        ind[rows] = order
        dist[rows] = np.take_along_axis(D, order, axis=1)
    ind.setflags(write=False)
    dist.setflags(write=False)
    return NeighbourTable(ind, dist)


def write_mst(mst: Mst, path) -> None:
    """Export as lines "u v weight" in stored order, weights to 17 significant digits."""
    lines = [f"{a} {b} {w:.17g}\n" for a, b, w in mst.edges]
    Path(path).write_text("".join(lines), encoding="utf-8")


def read_mst(path, n: int) -> Mst:
    edges = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            a, b, w = line.split()
            edges.append((int(a), int(b), float(w)))
    return Mst.from_edges(n, edges)


class RootedTree:
    """The tree rooted at vertex 0 in depth-first preorder.

    Deleting the edge above vertex c cuts off exactly the preorder range
    [tin[c], tout[c]), which makes edge-removal partitions cheap to label.
    """

    def __init__(self, mst: Mst):
        n = mst.n
        self.mst = mst
        parent = np.full(n, -1, dtype=np.intp)
        parent_edge = np.full(n, -1, dtype=np.intp)
        order = []
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        stack = [0]
        while stack:
            a = stack.pop()
            order.append(a)
            # push in reverse so lower-index neighbours are visited first
            for b, e in sorted(mst.adjacency[a], reverse=True):
                if not seen[b]:
                    seen[b] = True
                    parent[b] = a
                    parent_edge[b] = e
                    stack.append(b)
        self.order = np.array(order, dtype=np.intp)
        self.tin = np.empty(n, dtype=np.intp)
        self.tin[self.order] = np.arange(n)
        sub = np.ones(n, dtype=np.intp)
        for a in order[::-1]:
            if parent[a] >= 0:
                sub[parent[a]] += sub[a]
        self.tout = self.tin + sub
        self.parent = parent
        # child vertex below each edge
        self.child = np.empty(max(n - 1, 0), dtype=np.intp)
        has_parent = np.flatnonzero(parent_edge >= 0)
        self.child[parent_edge[has_parent]] = has_parent

    def labels_from_removed(self, removed) -> np.ndarray:
        """Labels (not canonical, in vertex order) after deleting ``removed`` edges."""
        lab_pre = np.zeros(self.mst.n, dtype=np.intp)
        children = self.child[np.asarray(removed, dtype=np.intp)]
        starts = self.tin[children]
        for j, c in enumerate(children[np.argsort(starts, kind="stable")], start=1):
            lab_pre[self.tin[c]:self.tout[c]] = j
        return lab_pre[self.tin]
