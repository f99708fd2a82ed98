"""HEMST and CTCEHC, two further MST-based partitioning heuristics.

Both are re-implementations from short characterisations:

HEMST deletes, k - 1 times, the remaining edge whose deletion leaves the
smallest population standard deviation of the remaining edge weights.

CTCEHC seeds one region at every vertex of tree degree >= 3 and assigns the
other vertices to the seed nearest along the tree.  Regions are split at
their heaviest edges while fewer than k exist; afterwards tree-adjacent
regions are merged, closest medoids first, until k remain.  A region's
medoid is its vertex with the smallest summed tree distance to the other
members.  Without any seed the result is single linkage.
"""

from __future__ import annotations

import heapq

import numpy as np

from mstclust.core import Dataset, DomainError, Partition
from mstclust.divisive import single_linkage_cut
from mstclust.mst import Mst, vertex_degrees


def _check_k(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise DomainError(f"k must lie in 1..{n}, got {k}")


def hemst_removal_std(mst: Mst, cut: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Candidate edges and the std of the remaining weights after deleting each."""
    cand = np.flatnonzero(~cut)
    w = mst.weight[cand]
    m = cand.size - 1
    if m <= 0:
        return cand, np.zeros(cand.size)
    s1 = w.sum() - w
    s2 = np.sum(w * w) - w * w
    var = np.maximum(s2 / m - (s1 / m) ** 2, 0.0)
    return cand, np.sqrt(var)


def hemst(mst: Mst, k: int, trace: list | None = None) -> Partition:
    """Delete k-1 edges, each minimising the std of the remaining weights.

    Ties prefer the heavier edge and then the larger (u, v) key.
    """
    _check_k(mst.n, k)
    cut = np.zeros(mst.m, dtype=bool)
    for _ in range(k - 1):
        cand, std = hemst_removal_std(mst, cut)
        # last position among the minima = heaviest, then largest key
        best = np.flatnonzero(std == std.min())[-1]
        chosen = int(cand[best])
        if trace is not None:
            trace.append((cand, std, chosen))
        cut[chosen] = True
    return Partition(mst.labels_from_cut(cut))


def _nearest_seed(mst: Mst, seeds: np.ndarray) -> np.ndarray:
    """Seed owning each vertex: smallest tree distance, then smallest seed index."""
    owner = np.full(mst.n, -1, dtype=np.intp)
    heap = [(0.0, int(s), int(s)) for s in seeds]
    heapq.heapify(heap)
    while heap:
        dist, s, a = heapq.heappop(heap)
        if owner[a] >= 0:
            continue
        owner[a] = s
        for b, e in mst.adjacency[a]:
            if owner[b] < 0:
                heapq.heappush(heap, (dist + mst.weight[e], s, b))
    return owner


def _walk(mst: Mst, source: int, keep: np.ndarray):
    """Vertices reachable from ``source`` over kept edges, in BFS order, with parents."""
    order = [source]
    parent = {source: (-1, 0.0)}
    for a in order:
        for b, e in mst.adjacency[a]:
            if keep[e] and b not in parent:
                parent[b] = (a, float(mst.weight[e]))
                order.append(b)
    return order, parent


def _medoid_distances(mst: Mst, member: int, keep: np.ndarray, out: np.ndarray) -> int:
    """Find the medoid of ``member``'s region; store distances from it in ``out``.

    Summed distances come from one down-pass and one re-rooting pass over the
    subtree.  Ties go to the smallest vertex index.
    """
    order, parent = _walk(mst, member, keep)
    size = len(order)
    cnt = dict.fromkeys(order, 1)
    down = dict.fromkeys(order, 0.0)
    for a in reversed(order[1:]):
        p, w = parent[a]
        cnt[p] += cnt[a]
        down[p] += down[a] + cnt[a] * w
    total = {order[0]: down[order[0]]}
    for a in order[1:]:
        p, w = parent[a]
        total[a] = total[p] + w * (size - 2 * cnt[a])
    medoid = min(order, key=lambda a: (total[a], a))
    out[medoid] = 0.0
    walk, par = _walk(mst, medoid, keep)
    for a in walk[1:]:
        p, w = par[a]
        out[a] = out[p] + w
    return medoid


def ctcehc(mst: Mst, ds: Dataset, k: int, trace: list | None = None) -> Partition:
    """Degree-seeded regions merged by medoid tree distance; see the module docstring."""
    _check_k(mst.n, k)
    degrees = vertex_degrees(mst)
    seeds = np.flatnonzero(degrees >= 3)
    if seeds.size == 0:
        return single_linkage_cut(mst, k)

    owner = _nearest_seed(mst, seeds)
    cut = owner[mst.u] != owner[mst.v]
    # too few regions: split at the heaviest remaining edges
    for e in range(mst.m - 1, -1, -1):
        if cut.sum() >= k - 1:
            break
        cut[e] = True

    labels = mst.labels_from_cut(cut)
    regions = {}
    for v, lab in enumerate(labels.tolist()):
        regions.setdefault(lab, []).append(v)
    keep = ~cut
    from_medoid = np.zeros(mst.n)
    for mem in regions.values():
        _medoid_distances(mst, mem[0], keep, from_medoid)
    region_of = labels.copy()

    def medoid_gap(e: int) -> float:
        # the tree path between two adjacent regions' medoids crosses e
        return float(from_medoid[mst.u[e]] + mst.weight[e] + from_medoid[mst.v[e]])

    gaps = {int(e): medoid_gap(int(e)) for e in np.flatnonzero(cut)}
    while len(regions) > k:
        e = min(gaps, key=lambda x: (gaps[x], x))
        gap = gaps.pop(e)
        a, b = int(region_of[mst.u[e]]), int(region_of[mst.v[e]])
        if trace is not None:
            trace.append((e, gap, a, b))
        keep[e] = True
        cut[e] = False
        regions[a].extend(regions.pop(b))
        region_of[regions[a]] = a
        _medoid_distances(mst, regions[a][0], keep, from_medoid)
        for f in gaps:
            if region_of[mst.u[f]] == a or region_of[mst.v[f]] == a:
                gaps[f] = medoid_gap(f)
    return Partition(mst.labels_from_cut(cut))
