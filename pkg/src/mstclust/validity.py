"""Internal cluster validity measures, all usable as objectives to maximise.

Measures that are naturally minimised (WCSS, Ball-Hall, Davies-Bouldin) are
negated by :func:`evaluate_objective`; the standalone functions return the
raw index.

Generalised Dunn indices are min_{i != j} delta(X_i, X_j) / max_m Delta(X_m)
with the between-cluster separations

    d1  min   {||x - y|| : x in X_i, y in X_j}
    d2  max   {||x - y|| : x in X_i, y in X_j}
    d3  mean  {||x - y|| : x in X_i, y in X_j}
    d4  ||mu_i - mu_j||
    d5  (sum_{x in X_i} ||x - mu_j|| + sum_{y in X_j} ||y - mu_i||) / (n_i + n_j)

and the within-cluster spreads

    D1  max  {||x - y|| : x, y in X_m}
    D2  mean {||x - y|| : x, y in X_m, x != y}   (0 for singletons)
    D3  2 * mean {||x - mu_m|| : x in X_m}

The near-neighbour Dunn index DuNN_M_A_B aggregates, over all ordered pairs
(x, y) with y among the M nearest neighbours of x, the distances of pairs
in different clusters with A and of pairs in the same cluster with B, and
returns A / B.  WCNN_M is the fraction of such pairs lying in one cluster.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial.distance import pdist, squareform

from mstclust.core import ConfigurationError, Dataset, DomainError, Partition
from mstclust.mst import Mst, NeighbourTable, knn_table

AGGREGATES = {"Min": np.min, "Mean": np.mean, "Max": np.max}

_PLAIN = {
    "NegWCSS": "NegWCSS",
    "WCSS": "NegWCSS",
    "InfoCriterion": "InfoCriterion",
    "IC": "InfoCriterion",
    "BallHall": "BallHall",
    "CalinskiHarabasz": "CalinskiHarabasz",
    "DaviesBouldin": "DaviesBouldin",
    "Silhouette": "Silhouette",
    "SilhouetteW": "SilhouetteW",
    "MstCutWeight": "MstCutWeight",
}


@dataclass(frozen=True)
class ObjectiveSpec:
    """Selects one validity measure and its parameters."""

    measure: str
    delta: int | None = None
    Delta: int | None = None
    M: int | None = None
    num_agg: str | None = None
    den_agg: str | None = None

    def __post_init__(self):
        m = self.measure
        if m == "GDunn":
            if self.delta not in range(1, 6) or self.Delta not in range(1, 4):
                raise ConfigurationError(f"GDunn needs delta in 1..5 and Delta in 1..3, got {self.delta}, {self.Delta}")
        elif m in ("DuNN", "WCNN"):
            if self.M is None or self.M < 1:
                raise ConfigurationError(f"{m} needs a positive M")
            if m == "DuNN" and (self.num_agg not in AGGREGATES or self.den_agg not in AGGREGATES):
                raise ConfigurationError(f"DuNN aggregations must be among {sorted(AGGREGATES)}")
        elif m not in _PLAIN.values():
            raise ConfigurationError(f"unknown measure {m!r}")

    @property
    def name(self) -> str:
        if self.measure == "GDunn":
            return f"GDunn_d{self.delta}_D{self.Delta}"
        if self.measure == "DuNN":
            return f"DuNN_{self.M}_{self.num_agg}_{self.den_agg}"
        if self.measure == "WCNN":
            return f"WCNN_{self.M}"
        return self.measure

    @property
    def needs_mst(self) -> bool:
        return self.measure in ("InfoCriterion", "MstCutWeight")

    @property
    def needs_neighbours(self) -> bool:
        return self.measure in ("DuNN", "WCNN")


def parse_objective(name: str) -> ObjectiveSpec:
    """Parse identifiers such as ``GDunn_d2_D3``, ``DuNN_25_Min_Max`` or ``WCNN_25``.

    A leading ``MST/D_`` is accepted and ignored.
    """
    if name.startswith("MST/D_"):
        name = name[len("MST/D_"):]
    if name in _PLAIN:
        return ObjectiveSpec(_PLAIN[name])
    if m := re.fullmatch(r"GDunn_d(\d)_D(\d)", name):
        return ObjectiveSpec("GDunn", delta=int(m[1]), Delta=int(m[2]))
    if m := re.fullmatch(r"DuNN_(\d+)_(Min|Mean|Max)_(Min|Mean|Max)", name):
        return ObjectiveSpec("DuNN", M=int(m[1]), num_agg=m[2], den_agg=m[3])
    if m := re.fullmatch(r"WCNN_(\d+)", name):
        return ObjectiveSpec("WCNN", M=int(m[1]))
    raise ConfigurationError(f"unknown measure {name!r}")


def _labels(p) -> np.ndarray:
    return p.labels if isinstance(p, Partition) else np.asarray(p, dtype=np.intp)


@dataclass(frozen=True)
class ClusterStats:
    sizes: np.ndarray
    mst_weight: np.ndarray  # L_i, total weight of MST edges inside cluster i
    centroids: np.ndarray
    scatter: np.ndarray  # sum of squared distances to the centroid


def cluster_stats(ds: Dataset, p, mst: Mst | None = None) -> ClusterStats:
    labels = _labels(p)
    l = int(labels.max())
    idx = labels - 1
    sizes = np.bincount(idx, minlength=l)
    sums = np.zeros((l, ds.d))
    np.add.at(sums, idx, ds.points)
    centroids = sums / sizes[:, None]
    resid = ds.points - centroids[idx]
    scatter = np.bincount(idx, weights=np.einsum("ij,ij->i", resid, resid), minlength=l)
    if mst is not None:
        inside = labels[mst.u] == labels[mst.v]
        L = np.bincount(idx[mst.u[inside]], weights=mst.weight[inside], minlength=l)
    else:
        L = np.full(l, np.nan)
    return ClusterStats(sizes, L, centroids, scatter)


def gini_index(sizes) -> float:
    """Normalised Gini index of cluster sizes: 0 if all equal, 1 in the one-takes-all limit."""
    c = np.sort(np.asarray(sizes, dtype=np.float64))[::-1]
    if c.size == 0 or np.any(c < 1):
        raise DomainError("cluster sizes must be positive")
    l = c.size
    if l == 1:
        return 0.0
    coef = l - 2 * np.arange(1, l + 1) + 1
    return float(np.dot(coef, c) / ((l - 1) * c.sum()))


def wcss(ds: Dataset, p) -> float:
    return float(cluster_stats(ds, p).scatter.sum())


def info_criterion_terms(sizes, L, n: int, d: int) -> np.ndarray:
    """Per-cluster contributions to the information criterion.

    Clusters with fewer than two points or zero internal edge weight add
    nothing to the edge-length part, whose logarithm would otherwise diverge.
    """
    sizes = np.asarray(sizes, dtype=np.float64)
    L = np.asarray(L, dtype=np.float64)
    frac = sizes / n
    ok = (sizes >= 2) & (L > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        edge_part = np.where(ok, -d * frac * np.log(np.where(ok, L / sizes, 1.0)), 0.0)
    return edge_part - frac * np.log(frac)


def info_criterion(stats: ClusterStats, n: int, d: int) -> float:
    return float(np.sum(info_criterion_terms(stats.sizes, stats.mst_weight, n, d)))


def ball_hall(ds: Dataset, p) -> float:
    st = cluster_stats(ds, p)
    return float(np.mean(st.scatter / st.sizes))


def calinski_harabasz(ds: Dataset, p) -> float:
    st = cluster_stats(ds, p)
    l, n = st.sizes.size, ds.n
    if l < 2:
        return -math.inf
    mu = ds.points.mean(axis=0)
    between = float(np.sum(st.sizes * np.sum((st.centroids - mu) ** 2, axis=1)))
    within = float(st.scatter.sum())
    if within == 0:
        return math.inf
    return (between / (l - 1)) / (within / (n - l))


def _centroid_distance_sums(ds: Dataset, labels: np.ndarray, st: ClusterStats) -> np.ndarray:
    resid = ds.points - st.centroids[labels - 1]
    return np.bincount(labels - 1, weights=np.sqrt(np.einsum("ij,ij->i", resid, resid)), minlength=st.sizes.size)


def davies_bouldin(ds: Dataset, p) -> float:
    """Raw Davies-Bouldin index; infinite when two centroids coincide."""
    labels = _labels(p)
    st = cluster_stats(ds, labels)
    l = st.sizes.size
    if l < 2:
        raise DomainError("Davies-Bouldin needs at least two clusters")
    S = _centroid_distance_sums(ds, labels, st) / st.sizes
    gap = squareform(pdist(st.centroids))
    np.fill_diagonal(gap, np.inf)
    if np.any(gap == 0):
        return math.inf
    R = (S[:, None] + S[None, :]) / gap
    return float(np.mean(R.max(axis=1)))


def _distance_matrix(ds: Dataset) -> np.ndarray:
    return squareform(pdist(ds.points))


def _blocks(D: np.ndarray, labels: np.ndarray):
    """Per-cluster-pair minimum, maximum and sum of the distance matrix."""
    order = np.argsort(labels, kind="stable")
    sizes = np.bincount(labels)[1:]
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    Ds = D[np.ix_(order, order)]
    bmin = np.minimum.reduceat(np.minimum.reduceat(Ds, starts, axis=0), starts, axis=1)
    bmax = np.maximum.reduceat(np.maximum.reduceat(Ds, starts, axis=0), starts, axis=1)
    bsum = np.add.reduceat(np.add.reduceat(Ds, starts, axis=0), starts, axis=1)
    return bmin, bmax, bsum, sizes


def silhouette_values(ds: Dataset, p, D: np.ndarray | None = None) -> np.ndarray:
    labels = _labels(p)
    l = int(labels.max())
    if l < 2:
        raise DomainError("the silhouette needs at least two clusters")
    if D is None:
        D = _distance_matrix(ds)
    sizes = np.bincount(labels, minlength=l + 1)[1:]
    onehot = np.zeros((labels.size, l))
    onehot[np.arange(labels.size), labels - 1] = 1.0
    sums = D @ onehot
    own = labels - 1
    own_size = sizes[own]
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(own_size > 1, sums[np.arange(labels.size), own] / (own_size - 1), 0.0)
        mean_other = sums / sizes
    mean_other[np.arange(labels.size), own] = np.inf
    b = mean_other.min(axis=1)
    denom = np.maximum(a, b)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 0, (b - a) / denom, 0.0)
    s[own_size == 1] = 0.0
    return s


def silhouette_mean(ds: Dataset, p, D: np.ndarray | None = None) -> float:
    return float(np.mean(silhouette_values(ds, p, D)))


def silhouette_clusterwise(ds: Dataset, p, D: np.ndarray | None = None) -> float:
    """Unweighted mean of the per-cluster average silhouette widths."""
    labels = _labels(p)
    s = silhouette_values(ds, labels, D)
    per_cluster = np.bincount(labels - 1, weights=s) / np.bincount(labels - 1)
    return float(np.mean(per_cluster))


def generalized_dunn(ds: Dataset, p, delta: int, Delta: int, D: np.ndarray | None = None) -> float:
    labels = _labels(p)
    l = int(labels.max())
    if l < 2:
        raise DomainError("Dunn indices need at least two clusters")
    if delta not in range(1, 6) or Delta not in range(1, 4):
        raise DomainError(f"unknown generalised Dunn variant d{delta}_D{Delta}")
    st = cluster_stats(ds, labels)
    sizes = st.sizes.astype(np.float64)
    need_blocks = delta in (1, 2, 3) or Delta in (1, 2)
    if need_blocks:
        if D is None:
            D = _distance_matrix(ds)
        bmin, bmax, bsum, _ = _blocks(D, labels)
    if Delta == 3:
        T = _centroid_distance_sums(ds, labels, st)
    if delta == 5:
        # C[i, j]: summed distance from the points of cluster i to centroid j
        diff = ds.points[:, None, :] - st.centroids[None, :, :]
        to_centroids = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        C = np.zeros((l, l))
        np.add.at(C, labels - 1, to_centroids)

    if delta == 1:
        sep = bmin
    elif delta == 2:
        sep = bmax
    elif delta == 3:
        sep = bsum / np.outer(sizes, sizes)
    elif delta == 4:
        sep = squareform(pdist(st.centroids))
    else:
        sep = (C + C.T) / (sizes[:, None] + sizes[None, :])
    sep = sep.copy()
    np.fill_diagonal(sep, np.inf)
    numerator = float(sep.min())

    if Delta == 1:
        spread = np.diag(bmax)
    elif Delta == 2:
        pairs = sizes * (sizes - 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            spread = np.where(pairs > 0, np.diag(bsum) / pairs, 0.0)
    else:
        spread = 2.0 * T / sizes
    denominator = float(spread.max())
    if denominator == 0:
        return math.inf
    return numerator / denominator


def dunn_nn(ds: Dataset, p, nt: NeighbourTable, num_agg: str = "Min", den_agg: str = "Max") -> float:
    """Near-neighbour Dunn index.

    No cross-cluster neighbour pairs means perfect separation (+inf); no
    same-cluster pairs disqualifies the partition (-inf).
    """
    labels = _labels(p)
    same = labels[nt.indices] == labels[:, None]
    cross_d = nt.distances[~same]
    same_d = nt.distances[same]
    if same_d.size == 0:
        return -math.inf
    if cross_d.size == 0:
        return math.inf
    num = float(AGGREGATES[num_agg](cross_d))
    den = float(AGGREGATES[den_agg](same_d))
    if den == 0:
        return math.inf if num > 0 else -math.inf
    return num / den


def wcnn(p, nt: NeighbourTable) -> float:
    labels = _labels(p)
    if nt.indices.size == 0:
        return 1.0
    same = labels[nt.indices] == labels[:, None]
    return float(same.sum() / same.size)


def mst_cut_weight(mst: Mst, p) -> float:
    """Total weight of the MST edges joining different clusters."""
    labels = _labels(p)
    return float(np.sum(mst.weight[labels[mst.u] != labels[mst.v]]))


@dataclass(eq=False)
class ObjectiveContext:
    """The ingredients objectives may need, with lazily built caches."""

    ds: Dataset
    mst: Mst | None = None
    nt: NeighbourTable | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @cached_property
    def distances(self) -> np.ndarray:
        return _distance_matrix(self.ds)

    def neighbours(self, M: int) -> NeighbourTable:
        if self.nt is not None and self.nt.M >= min(M, self.ds.n - 1):
            if self.nt.M == min(M, self.ds.n - 1):
                return self.nt
            return NeighbourTable(self.nt.indices[:, :M], self.nt.distances[:, :M])
        if M not in self._cache:
            self._cache[M] = knn_table(self.ds, M)
        return self._cache[M]


def evaluate_objective(spec: ObjectiveSpec, ctx: ObjectiveContext, p) -> float:
    """Value of the selected measure, oriented so that larger is better."""
    labels = _labels(p)
    ds = ctx.ds
    m = spec.measure
    if spec.needs_mst and ctx.mst is None:
        raise ConfigurationError(f"{spec.name} needs the minimum spanning tree")
    if m == "NegWCSS":
        return -wcss(ds, labels)
    if m == "InfoCriterion":
        return info_criterion(cluster_stats(ds, labels, ctx.mst), ds.n, ds.d)
    if m == "MstCutWeight":
        return mst_cut_weight(ctx.mst, labels)
    if m == "BallHall":
        return -ball_hall(ds, labels)
    if m == "CalinskiHarabasz":
        return calinski_harabasz(ds, labels)
    if m == "DaviesBouldin":
        return -davies_bouldin(ds, labels)
    if m == "Silhouette":
        return silhouette_mean(ds, labels, ctx.distances)
    if m == "SilhouetteW":
        return silhouette_clusterwise(ds, labels, ctx.distances)
    if m == "GDunn":
        D = ctx.distances if spec.delta in (1, 2, 3) or spec.Delta in (1, 2) else None
        return generalized_dunn(ds, labels, spec.delta, spec.Delta, D)
    if m == "DuNN":
        return dunn_nn(ds, labels, ctx.neighbours(spec.M), spec.num_agg, spec.den_agg)
    if m == "WCNN":
        return wcnn(labels, ctx.neighbours(spec.M))
    raise ConfigurationError(f"unknown measure {m!r}")  # pragma: no cover


def all_measure_names() -> list[str]:
    names = ["BallHall", "CalinskiHarabasz", "DaviesBouldin", "Silhouette", "SilhouetteW"]
    names += [f"GDunn_d{a}_D{b}" for a in range(1, 6) for b in range(1, 4)]
    names += ["DuNN_25_Min_Max", "DuNN_25_Mean_Mean", "DuNN_25_Max_Min", "WCNN_25"]
    return names
