"""Domain types, file ingestion, distances and the disjoint-sets structure."""

from __future__ import annotations

import gzip
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class MstClustError(Exception):
    """Base class for errors raised by this package."""


class DataFormatError(MstClustError, ValueError):
    """A data or label file does not follow the expected layout."""


class EmptyInputError(DataFormatError):
    pass


class LabelValidationError(MstClustError, ValueError):
    pass


class DomainError(MstClustError, ValueError):
    """An argument lies outside the domain of an operation."""


class ConfigurationError(MstClustError, ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Dataset:
    """An n-by-d matrix of finite coordinates; row i is point i."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, order="C", copy=True)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DomainError(f"expected a non-empty n x d matrix, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise DomainError("coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.n


@dataclass(frozen=True, eq=False)
class Partition:
    """Cluster labels for n points.

    Labels take values 1..l.  Reference labelings may additionally use 0
    to mark noise points; algorithm outputs never do.
    """

    labels: np.ndarray

    def __post_init__(self):
        lab = np.array(self.labels, dtype=np.intp, copy=True).ravel()
        if lab.size == 0:
            raise EmptyInputError("a partition needs at least one point")
        if lab.min() < 0:
            raise LabelValidationError("labels must be nonnegative")
        present = np.unique(lab[lab > 0])
        l = int(lab.max())
        if present.size != l:
            missing = sorted(set(range(1, l + 1)) - set(present.tolist()))
            raise LabelValidationError(f"label values {missing} are absent (labels must be 1..{l})")
        lab.setflags(write=False)
        object.__setattr__(self, "labels", lab)

    @property
    def n(self) -> int:
        return self.labels.size

    @property
    def l(self) -> int:
        return int(self.labels.max())

    @property
    def has_noise(self) -> bool:
        return bool(np.any(self.labels == 0))

    def sizes(self) -> np.ndarray:
        """Cluster sizes c_1..c_l (noise points excluded)."""
        return np.bincount(self.labels, minlength=self.l + 1)[1:]

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash(self.labels.tobytes())

    def __repr__(self):
        return f"Partition(l={self.l}, labels={self.labels.tolist()})"


def canonical_labels(labels) -> np.ndarray:
    """Relabel to 1..l in order of each cluster's smallest point index."""
    labels = np.asarray(labels)
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(first.size, dtype=np.intp)
    rank[np.argsort(first, kind="stable")] = np.arange(first.size)
    return rank[inv.ravel()] + 1


class DisjointSets:
    """Union-find over 0..n-1 with union by size and path compression."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.n_sets = n

    def find(self, x: int) -> int:
        root = x
        parent = self.parent
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> int:
        """Merge the sets containing x and y; return the new root."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return rx
        if self.size[rx] < self.size[ry] or (self.size[rx] == self.size[ry] and ry < rx):
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]
        self.n_sets -= 1
        return rx

    def set_size(self, x: int) -> int:
        return self.size[self.find(x)]

    def labels(self) -> np.ndarray:
        """Canonical 1-based labels of the current sets."""
        return canonical_labels([self.find(i) for i in range(len(self.parent))])


def _open_text(path: Path) -> str:
    path = Path(path)
    if path.suffix == ".gz":
        with gzip.open(path, "rt", encoding="utf-8") as f:
            return f.read()
    return path.read_text(encoding="utf-8")


def _lines(text: str) -> list[str]:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    return lines


def load_dataset(path) -> Dataset:
    """Read a whitespace-separated matrix, one point per line.

    Files ending in ``.gz`` are decompressed transparently.
    """
    lines = _lines(_open_text(path))
    if not lines:
        raise EmptyInputError(f"{path}: empty data file")
    rows = []
    ncol = None
    for lineno, line in enumerate(lines, start=1):
        tokens = line.split()
        if ncol is None:
            ncol = len(tokens)
        if len(tokens) != ncol or ncol == 0:
            raise DataFormatError(f"{path}: line {lineno} has {len(tokens)} columns, expected {ncol}")
        try:
            row = [float(t) for t in tokens]
        except ValueError as e:
            raise DataFormatError(f"{path}: line {lineno}: cannot parse number ({e})") from None
        if not all(math.isfinite(v) for v in row):
            raise DataFormatError(f"{path}: line {lineno}: non-finite coordinate")
        rows.append(row)
    return Dataset(np.array(rows, dtype=np.float64))


def write_dataset(ds: Dataset, path) -> None:
    # repr() gives the shortest string that round-trips exactly
    text = "".join(" ".join(repr(float(v)) for v in row) + "\n" for row in ds.points)
    _write_text(path, text)


def load_labels(path, n: int | None = None) -> Partition:
    """Read one integer label per line; 0 marks a noise point."""
    lines = _lines(_open_text(path))
    if not lines:
        raise EmptyInputError(f"{path}: empty label file")
    labels = []
    for lineno, line in enumerate(lines, start=1):
        try:
            value = int(line.strip())
        except ValueError:
            raise DataFormatError(f"{path}: line {lineno}: not an integer: {line!r}") from None
        if value < 0:
            raise DomainError(f"{path}: line {lineno}: negative label {value}")
        labels.append(value)
    if n is not None and len(labels) != n:
        raise LabelValidationError(f"{path}: {len(labels)} labels for {n} points")
    return Partition(np.array(labels))


def write_labels(p: Partition, path) -> None:
    _write_text(path, "".join(f"{v}\n" for v in p.labels.tolist()))


def _write_text(path, text: str) -> None:
    path = Path(path)
    if path.suffix == ".gz":
        # mtime=0 keeps the compressed bytes reproducible
        with open(path, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0, filename="") as f:
            f.write(text.encode("utf-8"))
    else:
        path.write_text(text, encoding="utf-8")


_SQ_TINY = 2.0 ** -960


def distances_from(points: np.ndarray, i: int) -> np.ndarray:
    """Euclidean distances from point i to every point."""
    diff = points - points[i]
    sq = np.einsum("ij,ij->i", diff, diff)
    # squares of tiny or huge differences under/overflow; rescale those rows like hypot does
    bad = (sq < _SQ_TINY) | (sq == np.inf)
    if np.any(bad & np.any(diff != 0, axis=1)):
        scale = np.abs(diff[bad]).max(axis=1)
        scale[scale == 0] = 1.0
        t = diff[bad] / scale[:, None]
        out = np.sqrt(sq)
        out[bad] = np.sqrt(np.einsum("ij,ij->i", t, t)) * scale
        return out
    return np.sqrt(sq)


def euclidean_distance(a: int, b: int, ds: Dataset) -> float:
    # same kernel as distances_from so MST weights compare exactly
    return float(distances_from(ds.points[[a, b]], 0)[1])
