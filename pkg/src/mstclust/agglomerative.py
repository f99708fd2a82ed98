"""Agglomerative schemes over an MST: generic greedy merging, Genie and Genie+Ic."""

from __future__ import annotations

from collections import Counter
from typing import Sequence

import numpy as np

from mstclust.core import Dataset, DisjointSets, DomainError, Partition
from mstclust.mst import Mst, NeighbourTable
from mstclust.validity import (
    ObjectiveContext,
    ObjectiveSpec,
    evaluate_objective,
    info_criterion_terms,
)


def _check_k(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise DomainError(f"k must lie in 1..{n}, got {k}")


class _Merger:
    """Disjoint sets plus a vertex-to-cluster array kept in sync for vector queries."""

    def __init__(self, mst: Mst):
        n = mst.n
        self.mst = mst
        self.sets = DisjointSets(n)
        self.owner = np.arange(n)
        self.members = {i: [i] for i in range(n)}
        self.size = np.ones(n, dtype=np.intp)
        self.inner = np.zeros(n)  # weight of consumed edges inside each cluster

    def merge(self, e: int) -> int:
        a, b = int(self.mst.u[e]), int(self.mst.v[e])
        ra, rb = self.sets.find(a), self.sets.find(b)
        root = self.sets.union(ra, rb)
        gone = rb if root == ra else ra
        moved = self.members.pop(gone)
        self.owner[moved] = root
        self.members[root].extend(moved)
        self.size[root] += self.size[gone]
        self.inner[root] += self.inner[gone] + self.mst.weight[e]
        return root

    def labels(self) -> np.ndarray:
        return self.sets.labels()


def _ic_merge_values(merger: _Merger, cand: np.ndarray, n: int, d: int) -> np.ndarray:
    mst = merger.mst
    ra = merger.owner[mst.u[cand]]
    rb = merger.owner[mst.v[cand]]
    roots = np.array(list(merger.members), dtype=np.intp)
    terms = info_criterion_terms(merger.size[roots], merger.inner[roots], n, d)
    total = float(np.sum(terms))
    t = lambda r: info_criterion_terms(merger.size[r], merger.inner[r], n, d)
    merged = info_criterion_terms(
        merger.size[ra] + merger.size[rb], merger.inner[ra] + merger.inner[rb] + mst.weight[cand], n, d
    )
    return total - t(ra) - t(rb) + merged


def _merged_labels(labels: np.ndarray, a: int, b: int) -> np.ndarray:
    """Canonical labels after joining the clusters of points a and b.

    Clusters are numbered by their smallest member, so folding the higher
    label into the lower one and closing the gap keeps the order canonical.
    """
    lo, hi = sorted((labels[a], labels[b]))
    out = labels.copy()
    out[out == hi] = lo
    out[out > hi] -= 1
    return out


def _pick(values: np.ndarray) -> int:
    values = np.where(np.isnan(values), -np.inf, values)
    if np.all(values == -np.inf):
        return 0  # lightest remaining edge
    return int(np.argmax(values))


def agglomerative_maximize(
    mst: Mst,
    ds: Dataset,
    spec: ObjectiveSpec,
    k: int,
    nt: NeighbourTable | None = None,
    start: np.ndarray | None = None,
    fast: bool = True,
    trace: list | None = None,
) -> Partition:
    """Merge clusters along MST edges until k remain, greedily maximising the objective.

    Starts from singletons, or from the edges marked in the boolean mask
    ``start`` if given.  At each step every unconsumed edge is tried and the
    one giving the best objective is consumed; ties go to the smallest edge
    key.  InfoCriterion and MstCutWeight are updated incrementally when
    ``fast`` is set.
    """
    _check_k(mst.n, k)
    n = mst.n
    consumed = np.zeros(mst.m, dtype=bool) if start is None else np.array(start, dtype=bool)
    merger = _Merger(mst)
    for e in np.flatnonzero(consumed):
        merger.merge(int(e))
    ctx = ObjectiveContext(ds, mst, nt)
    while consumed.sum() < n - k:
        cand = np.flatnonzero(~consumed)
        if fast and spec.measure == "InfoCriterion":
            values = _ic_merge_values(merger, cand, n, ds.d)
        elif fast and spec.measure == "MstCutWeight":
            values = float(np.sum(mst.weight[~consumed])) - mst.weight[cand]
        else:
            labels = mst.labels_from_cut(~consumed)
            values = np.empty(cand.size)
            for i, e in enumerate(cand):
                values[i] = evaluate_objective(spec, ctx, _merged_labels(labels, mst.u[e], mst.v[e]))
        chosen = int(cand[_pick(values)])
        if trace is not None:
            trace.append((cand, values, chosen))
        consumed[chosen] = True
        merger.merge(chosen)
    return Partition(mst.labels_from_cut(~consumed))


def ica(mst: Mst, ds: Dataset, k: int) -> Partition:
    """Agglomerative maximisation of the information criterion from singletons."""
    return agglomerative_maximize(mst, ds, ObjectiveSpec("InfoCriterion"), k)


class _GiniTracker:
    """Gini index of a multiset of cluster sizes under merges.

    Keeps S = sum_{i<j} |c_i - c_j| exactly; each update walks the distinct
    sizes only, of which there are O(sqrt(n)).
    """

    def __init__(self, n: int):
        self.counts = Counter({1: n}) if n else Counter()
        self.l = n
        self.total = n
        self.S = 0

    def _spread(self, c: int) -> int:
        return sum(abs(c - s) * m for s, m in self.counts.items())

    def _remove(self, c: int) -> None:
        self.counts[c] -= 1
        if not self.counts[c]:
            del self.counts[c]
        self.S -= self._spread(c)

    def _add(self, c: int) -> None:
        self.S += self._spread(c)
        self.counts[c] += 1

    def merge(self, a: int, b: int) -> None:
        self._remove(a)
        self._remove(b)
        self._add(a + b)
        self.l -= 1

    @property
    def gini(self) -> float:
        if self.l <= 1:
            return 0.0
        return self.S / ((self.l - 1) * self.total)

    @property
    def min_size(self) -> int:
        return min(self.counts)


def genie_consumed(mst: Mst, g: float, k: int, trace: list | None = None) -> np.ndarray:
    """Boolean mask of the MST edges merged by Genie when seeking k clusters."""
    _check_k(mst.n, k)
    if not 0 < g <= 1:
        raise DomainError(f"the Gini threshold must lie in (0, 1], got {g}")
    merger = _Merger(mst)
    gini = _GiniTracker(mst.n)
    consumed = np.zeros(mst.m, dtype=bool)
    first_free = 0  # every edge before this one is consumed
    for _ in range(mst.n - k):
        while consumed[first_free]:
            first_free += 1
        g_now = gini.gini
        constrained = g_now >= g
        if not constrained:
            e = first_free
        else:
            m = gini.min_size
            tail = slice(first_free, mst.m)
            su = merger.size[merger.owner[mst.u[tail]]]
            sv = merger.size[merger.owner[mst.v[tail]]]
            ok = ~consumed[tail] & ((su == m) | (sv == m))
            e = first_free + int(np.argmax(ok))
        if trace is not None:
            trace.append((g_now, constrained, e))
        a = int(merger.size[merger.owner[mst.u[e]]])
        b = int(merger.size[merger.owner[mst.v[e]]])
        gini.merge(a, b)
        merger.merge(e)
        consumed[e] = True
    return consumed


def genie(mst: Mst, g: float, k: int, trace: list | None = None) -> Partition:
    """Single linkage under a Gini-index constraint on cluster sizes.

    While the Gini index of the current cluster sizes is below ``g`` the
    lightest unconsumed edge is merged; otherwise the lightest edge touching
    a smallest cluster.  ``trace`` collects ``(gini, constrained, edge)``
    per merge.
    """
    return Partition(mst.labels_from_cut(~genie_consumed(mst, g, k, trace)))


def genie_plus_ic(
    mst: Mst,
    ds: Dataset,
    k: int,
    thresholds: Sequence[float] = (0.1, 0.3, 0.5, 0.7),
    extra: int = 0,
) -> Partition:
    """Information-criterion agglomeration warm-started from several Genie runs.

    Each threshold yields a Genie clustering into k + extra groups; merging
    starts from their common refinement, i.e. from the edges consumed by
    every run.
    """
    if not thresholds:
        raise DomainError("at least one threshold is required")
    if extra < 0:
        raise DomainError("extra must be nonnegative")
    if k + extra > mst.n:
        raise DomainError(f"k + extra = {k + extra} exceeds n = {mst.n}")
    _check_k(mst.n, k)
    start = np.ones(mst.m, dtype=bool)
    for g in thresholds:
        start &= genie_consumed(mst, g, k + extra)
    return agglomerative_maximize(mst, ds, ObjectiveSpec("InfoCriterion"), k, start=start)
