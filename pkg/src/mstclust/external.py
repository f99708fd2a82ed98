"""Agreement with reference labels: confusion matrices and the adjusted Rand index."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from mstclust.core import ConfigurationError, DomainError, Partition


class DegenerateScoreWarning(UserWarning):
    """The adjusted Rand index was defined by convention rather than computed."""


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: np.ndarray  # reference cluster x predicted cluster

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)


def _as_labels(p) -> np.ndarray:
    return p.labels if isinstance(p, Partition) else np.asarray(p, dtype=np.intp)


def confusion_matrix(ref, pred) -> ConfusionMatrix:
    """Counts over the points whose reference label is not 0 (noise)."""
    r, q = _as_labels(ref), _as_labels(pred)
    if r.shape != q.shape:
        raise DomainError(f"label vectors differ in length: {r.size} vs {q.size}")
    if np.any(q <= 0):
        raise DomainError("predicted labels must be positive (no noise points)")
    keep = r > 0
    r, q = r[keep], q[keep]
    if r.size == 0:
        return ConfusionMatrix(np.zeros((0, 0), dtype=np.int64))
    kr, kq = int(r.max()), int(q.max())
    counts = np.bincount((r - 1) * kq + (q - 1), minlength=kr * kq).reshape(kr, kq)
    return ConfusionMatrix(counts.astype(np.int64))


def _pairs(x) -> int:
    # exact C(x, 2) summed, in Python integers
    x = np.asarray(x, dtype=np.int64)
    return int(np.sum(x * (x - 1))) // 2


def ar_from_counts(counts: np.ndarray) -> tuple[float, bool]:
    """Adjusted Rand index of a confusion matrix and whether it was degenerate."""
    n = int(counts.sum())
    if n < 2:
        return 0.0, True
    total = n * (n - 1) // 2
    both = _pairs(counts)
    rows = _pairs(counts.sum(axis=1))
    cols = _pairs(counts.sum(axis=0))
    num = total * both - rows * cols
    den = total * (rows + cols) - 2 * rows * cols  # twice the printed denominator
    if den == 0:
        # both partitions trivial (all in one or all singletons): identical or not
        same = rows == cols == both
        return (1.0 if same else 0.0), True
    return 2 * num / den, False


def adjusted_rand(ref, pred) -> float:
    """Adjusted Rand index between a reference labeling and a prediction.

    Reference points labelled 0 are ignored.  Pair counts are exact integers
    with a single final division.
    """
    cm = confusion_matrix(ref, pred)
    value, degenerate = ar_from_counts(cm.counts)
    if degenerate:
        warnings.warn(
            f"adjusted Rand index undefined for this input (effective n = {cm.n}); using {value}",
            DegenerateScoreWarning,
            stacklevel=2,
        )
    return value


def best_ar_over_references(refs: Sequence, pred) -> float:
    """Largest adjusted Rand index over several reference labelings."""
    if len(refs) == 0:
        raise ConfigurationError("at least one reference labeling is required")
    return max(adjusted_rand(r, pred) for r in refs)


class ReferenceScorer:
    """Repeated scoring of many predictions against fixed references.

    Noise filtering and label bookkeeping are done once; degenerate cases
    are scored silently by the same conventions as :func:`adjusted_rand`.
    """

    def __init__(self, refs: Sequence):
        if len(refs) == 0:
            raise ConfigurationError("at least one reference labeling is required")
        self._refs = []
        for r in refs:
            r = _as_labels(r)
            keep = r > 0
            self._refs.append((keep, r[keep] - 1, max(int(r.max()), 1)))

    def score(self, pred: np.ndarray) -> float:
        """``pred`` holds labels 0..l-1 or 1..l; only their equality pattern matters."""
        best = -np.inf
        for keep, r, kr in self._refs:
            q = pred[keep]
            if q.size == 0:
                value = 0.0
            else:
                kq = int(q.max()) + 1
                counts = np.bincount(r * kq + q, minlength=kr * kq).reshape(kr, kq)
                value = ar_from_counts(counts)[0]
            best = max(best, value)
        return best
