"""Greedy divisive partitioning over a minimum spanning tree."""

from __future__ import annotations

import numpy as np

from mstclust.core import Dataset, DomainError, Partition, canonical_labels
from mstclust.mst import Mst, NeighbourTable
from mstclust.validity import (
    ObjectiveContext,
    ObjectiveSpec,
    evaluate_objective,
    info_criterion_terms,
)

_FAST = ("NegWCSS", "InfoCriterion", "MstCutWeight")


def _check_k(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise DomainError(f"k must lie in 1..{n}, got {k}")


def single_linkage_cut(mst: Mst, k: int) -> Partition:
    """Delete the k-1 heaviest edges.

    Among equal weights the edges with the larger (u, v) key are deleted, so
    the result coincides with Kruskal-order merging.
    """
    _check_k(mst.n, k)
    cut = np.zeros(mst.m, dtype=bool)
    if k > 1:
        cut[mst.m - (k - 1):] = True
    return Partition(mst.labels_from_cut(cut))


class _Forest:
    """Preorder layout of the forest left after cutting some MST edges."""

    def __init__(self, mst: Mst, cut: np.ndarray):
        n = mst.n
        parent_edge = np.full(n, -1, dtype=np.intp)
        root = np.empty(n, dtype=np.intp)
        order = []
        seen = np.zeros(n, dtype=bool)
        for r in range(n):
            if seen[r]:
                continue
            seen[r] = True
            stack = [r]
            while stack:
                a = stack.pop()
                order.append(a)
                root[a] = r
                for b, e in mst.adjacency[a]:
                    if not seen[b] and not cut[e]:
                        seen[b] = True
                        parent_edge[b] = e
                        stack.append(b)
        self.order = np.array(order, dtype=np.intp)
        tin = np.empty(n, dtype=np.intp)
        tin[self.order] = np.arange(n)
        size = np.ones(n, dtype=np.intp)
        for a in order[::-1]:
            e = parent_edge[a]
            if e >= 0:
                p = mst.u[e] if mst.v[e] == a else mst.v[e]
                size[p] += size[a]
        self.tin = tin
        self.tout = tin + size
        self.root = root
        self.parent_edge = parent_edge

    def child_of(self) -> np.ndarray:
        """Vertex below each uncut edge (entries for cut edges are meaningless)."""
        has_parent = self.parent_edge >= 0
        child = np.zeros(self.parent_edge.size - 1, dtype=np.intp)
        child[self.parent_edge[has_parent]] = np.flatnonzero(has_parent)
        return child

    def split_labels(self, labels: np.ndarray, child: int) -> np.ndarray:
        """Canonical labels after detaching the subtree below ``child`` as a new cluster."""
        out = labels.copy()
        out[self.order[self.tin[child]:self.tout[child]]] = labels.max() + 1
        return canonical_labels(out)

    def subtree_sums(self, values: np.ndarray) -> np.ndarray:
        """Sum of ``values`` (indexed by vertex, any trailing shape) over each subtree."""
        pre = values[self.order]
        csum = np.concatenate([np.zeros((1,) + pre.shape[1:]), np.cumsum(pre, axis=0)])
        return csum[self.tout] - csum[self.tin]


def split_objective_values(mst: Mst, ds: Dataset, cut: np.ndarray, measure: str) -> tuple[np.ndarray, np.ndarray]:
    """Objective after each single further cut, via subtree statistics.

    Returns the candidate edge identifiers (the uncut ones, ascending) and
    the objective of the partition obtained by also cutting each of them.
    Supports NegWCSS, InfoCriterion and MstCutWeight.
    """
    if measure not in _FAST:
        raise DomainError(f"no incremental evaluation for {measure}")
    cand = np.flatnonzero(~cut)
    if measure == "MstCutWeight":
        return cand, float(np.sum(mst.weight[cut])) + mst.weight[cand]

    forest = _Forest(mst, cut)
    n, d = ds.n, ds.d
    has_parent = forest.parent_edge >= 0
    child = forest.child_of()[cand]
    root = forest.root[child]

    cnt = forest.subtree_sums(np.ones(n)).astype(np.float64)
    if measure == "NegWCSS":
        X = ds.points - ds.points.mean(axis=0)
        S = forest.subtree_sums(X)
        Q = forest.subtree_sums(np.einsum("ij,ij->i", X, X))

        def term(c, s, q):
            return -(q - np.einsum("ij,ij->i", s, s) / c)

        cur = term(cnt[root], S[root], Q[root])
        a = term(cnt[child], S[child], Q[child])
        b = term(cnt[root] - cnt[child], S[root] - S[child], Q[root] - Q[child])
        roots = np.flatnonzero(forest.root == np.arange(n))
        total = float(np.sum(term(cnt[roots], S[roots], Q[roots])))
    else:
        pw = np.zeros(n)
        pw[has_parent] = mst.weight[forest.parent_edge[has_parent]]
        L = forest.subtree_sums(pw) - pw  # weight inside each subtree
        w = mst.weight[cand]

        def term(c, lw):
            return info_criterion_terms(c, lw, n, d)

        cur = term(cnt[root], L[root])
        a = term(cnt[child], L[child])
        b = term(cnt[root] - cnt[child], L[root] - L[child] - w)
        roots = np.flatnonzero(forest.root == np.arange(n))
        total = float(np.sum(term(cnt[roots], L[roots])))
    return cand, total - cur + a + b


def _pick(values: np.ndarray, fallback: int) -> int:
    values = np.where(np.isnan(values), -np.inf, values)
    if np.all(values == -np.inf):
        return fallback
    return int(np.argmax(values))


def divisive_maximize(
    mst: Mst,
    ds: Dataset,
    spec: ObjectiveSpec,
    k: int,
    nt: NeighbourTable | None = None,
    fast: bool = True,
    trace: list | None = None,
) -> Partition:
    """Greedily delete k-1 MST edges, each time maximising the objective.

    Every step evaluates the objective on the partition left after deleting
    each remaining edge and keeps the best one; ties go to the smallest
    edge key.  If every candidate is disqualified (-inf) the heaviest
    remaining edge is deleted.

    With ``fast=True`` the objectives NegWCSS, InfoCriterion and MstCutWeight
    are updated from subtree statistics instead of being recomputed.  When
    ``trace`` is a list, one ``(candidates, values, chosen_edge)`` tuple per
    step is appended to it.
    """
    _check_k(mst.n, k)
    ctx = ObjectiveContext(ds, mst, nt)
    cut = np.zeros(mst.m, dtype=bool)
    for _ in range(k - 1):
        if fast and spec.measure in _FAST:
            cand, values = split_objective_values(mst, ds, cut, spec.measure)
        else:
            cand = np.flatnonzero(~cut)
            forest = _Forest(mst, cut)
            child = forest.child_of()
            labels = mst.labels_from_cut(cut)
            values = np.empty(cand.size)
            for i, e in enumerate(cand):
                values[i] = evaluate_objective(spec, ctx, forest.split_labels(labels, child[e]))
        chosen = int(cand[_pick(values, cand.size - 1)])
        if trace is not None:
            trace.append((cand, values, chosen))
        cut[chosen] = True
    return Partition(mst.labels_from_cut(cut))


def itm(mst: Mst, ds: Dataset, k: int) -> Partition:
    """Divisive maximisation of the information criterion."""
    return divisive_maximize(mst, ds, ObjectiveSpec("InfoCriterion"), k)
