import warnings

import numpy as np
import pytest

from mstclust.algorithms import available_algorithms, cluster
from mstclust.core import ConfigurationError, DomainError
from mstclust.datasets import load_toy, toy_battery, toy_names, generate_toy_battery
from mstclust.external import DegenerateScoreWarning, best_ar_over_references
from mstclust.mst import build_mst


def test_every_algorithm_returns_k_clusters():
    ds, refs = load_toy("overlap")
    mst = build_mst(ds)
    for algo in available_algorithms():
        for k in (1, 2, 3):
            p = cluster(ds, k, algo, mst)
            assert p.l == k, algo
            assert not p.has_noise


def test_unknown_names():
    ds, _ = load_toy("chain")
    for bad in ("Genie_G0.1.2", "Genie+Ic(k-1)", "MST/D_Nope", "kmeans"):
        with pytest.raises(ConfigurationError):
            cluster(ds, 2, bad)


def test_genie_plus_ic_needs_room():
    ds, _ = load_toy("chain")
    with pytest.raises(DomainError):
        cluster(ds, 2, "Genie+Ic(k+5)")


def test_toy_files_match_generator(tmp_path):
    generate_toy_battery(tmp_path)
    from mstclust.datasets import toy_root

    for path in sorted((toy_root() / "toy").iterdir()):
        assert (tmp_path / path.name).read_bytes() == path.read_bytes(), path.name


def test_toy_contents():
    assert toy_names() == sorted(toy_battery())
    ds, refs = load_toy("overlap")
    assert ds.n == 60 and len(refs) == 2 and refs[1].has_noise
    ds, refs = load_toy("blobs3")
    assert ds.n == 150 and refs[0].sizes().tolist() == [50, 50, 50]


def test_blob_centres_are_well_separated():
    X, (y,) = toy_battery()["blobs3"]
    centres = np.array([X[y == c].mean(axis=0) for c in (1, 2, 3)])
    gaps = np.sqrt(((centres[:, None] - centres[None]) ** 2).sum(-1))[np.triu_indices(3, 1)]
    assert gaps.min() >= 10.0


def test_scores_are_in_range_on_toys():
    for name in toy_names():
        ds, refs = load_toy(name)
        mst = build_mst(ds)
        for algo in ("single", "Genie_G0.3", "ITM"):
            for ref in refs:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", DegenerateScoreWarning)
                    v = best_ar_over_references([ref], cluster(ds, ref.l, algo, mst))
                assert -1.0 <= v <= 1.0
