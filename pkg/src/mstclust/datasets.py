"""Small bundled datasets in the benchmark-battery file layout.

The files under ``data/toy`` are produced by :func:`generate_toy_battery`
with fixed seeds; regenerating them gives identical bytes.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from mstclust.core import Dataset, Partition, load_dataset, load_labels, write_dataset, write_labels


def toy_root() -> Path:
    return Path(str(resources.files("mstclust") / "data"))


def toy_names() -> list[str]:
    return sorted(p.name[: -len(".data.gz")] for p in (toy_root() / "toy").glob("*.data.gz"))


def load_toy(name: str) -> tuple[Dataset, list[Partition]]:
    """A bundled dataset and its reference labelings."""
    folder = toy_root() / "toy"
    ds = load_dataset(folder / f"{name}.data.gz")
    refs = [load_labels(p, ds.n) for p in sorted(folder.glob(f"{name}.labels*.gz"))]
    return ds, refs


def _blobs(rng, centers, sizes, sigma):
    pts = [rng.normal(c, sigma, size=(m, len(c))) for c, m in zip(centers, sizes)]
    labels = np.repeat(np.arange(1, len(sizes) + 1), sizes)
    return np.vstack(pts), labels


def toy_battery() -> dict[str, tuple[np.ndarray, list[np.ndarray]]]:
    """Points and reference labelings of every bundled toy dataset."""
    out = {}

    out["chain"] = (np.array([[0.0], [1.0], [2.0], [10.0]]), [np.array([1, 1, 1, 2])])

    # two 4-point stars joined by one long edge
    star = np.array([[0.0, 0.0], [1.0, 0.0], [-0.9, 0.3], [0.1, -1.1]])
    out["stars"] = (np.vstack([star, star[[0, 2, 3, 1]] + [10.0, 0.5]]), [np.repeat([1, 2], 4)])

    # three blobs with centres 12 standard deviations apart
    rng = np.random.default_rng(20240619)
    X, y = _blobs(rng, [(0.0, 0.0), (12.0, 0.0), (6.0, 12.0)], [50, 50, 50], 1.0)
    out["blobs3"] = (X, [y])

    # overlapping blobs; second labeling merges two of them and marks noise
    rng = np.random.default_rng(7)
    X, y = _blobs(rng, [(0.0, 0.0), (3.0, 0.0), (1.5, 3.5)], [20, 20, 20], 1.0)
    alt = np.where(y == 3, 2, 1)
    alt[rng.choice(60, size=5, replace=False)] = 0
    out["overlap"] = (X, [y, alt])

    # two parallel segments plus background noise labelled 0
    rng = np.random.default_rng(11)
    t = np.linspace(0.0, 10.0, 30)
    seg1 = np.c_[t, rng.normal(0.0, 0.05, t.size)]
    seg2 = np.c_[t, 3.0 + rng.normal(0.0, 0.05, t.size)]
    noise = np.c_[rng.uniform(0, 10, 8), rng.uniform(-2, 5, 8)]
    y = np.r_[np.ones(30, int), np.full(30, 2), np.zeros(8, int)]
    out["lines"] = (np.vstack([seg1, seg2, noise]), [y])

    return {k: (np.round(X, 6), refs) for k, (X, refs) in out.items()}


def generate_toy_battery(dest) -> None:
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    for name, (X, refs) in toy_battery().items():
        write_dataset(Dataset(X), dest / f"{name}.data.gz")
        for i, y in enumerate(refs):
            write_labels(Partition(y), dest / f"{name}.labels{i}.gz")


if __name__ == "__main__":
    generate_toy_battery(toy_root() / "toy")
