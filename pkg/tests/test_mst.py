import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mstclust.core import Dataset, DomainError
from mstclust.mst import (
    Mst,
    RootedTree,
    build_mst,
    components_after_removal,
    knn_table,
    read_mst,
    tree_path_length,
    vertex_degrees,
    write_mst,
)
from oracles import brute_force_mst_weight

small_sets = arrays(
    np.float64,
    st.tuples(st.integers(1, 7), st.integers(1, 3)),
    elements=st.floats(-100, 100, allow_nan=False).map(lambda x: round(x, 2)),
)


def chain(*xs):
    return build_mst(Dataset(np.array(xs, dtype=float)))


class TestBuildMst:
    def test_collinear_chain(self):
        mst = chain(0, 1, 3)
        assert [(e.u, e.v, e.weight) for e in mst.edges] == [(0, 1, 1.0), (1, 2, 2.0)]
        assert mst.total_weight == 3.0

    def test_unit_square(self):
        X = np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float)
        assert build_mst(Dataset(X)).total_weight == 3.0
        assert brute_force_mst_weight(X) == 3.0

    def test_single_point(self):
        mst = chain(5)
        assert mst.m == 0
        assert mst.total_weight == 0.0

    @given(small_sets)
    def test_optimal_against_enumeration(self, X):
        mst = build_mst(Dataset(X))
        assert math.fsum(mst.weight.tolist()) == brute_force_mst_weight(X)

    @given(small_sets)
    def test_structure(self, X):
        mst = build_mst(Dataset(X))
        n = X.shape[0]
        assert mst.m == n - 1
        keys = list(zip(mst.weight.tolist(), mst.u.tolist(), mst.v.tolist()))
        assert keys == sorted(keys)
        assert len(set(keys)) == len(keys)
        assert np.all(mst.u < mst.v)
        assert components_after_removal(mst, []).l == 1

    def test_ties_resolved_by_key(self):
        # a regular grid has many equal distances; the tree must still be unique
        X = np.array([[i, j] for i in range(3) for j in range(3)], dtype=float)
        a = build_mst(Dataset(X))
        b = build_mst(Dataset(X))
        assert a.edges == b.edges
        assert a.total_weight == 8.0

    def test_jitter_is_seeded(self):
        X = np.array([[i, j] for i in range(3) for j in range(3)], dtype=float)
        a = build_mst(Dataset(X), jitter=1e-6, seed=3)
        b = build_mst(Dataset(X), jitter=1e-6, seed=3)
        assert a.edges == b.edges
        assert a.total_weight == pytest.approx(8.0, abs=1e-4)

    def test_from_edges_rejects_non_tree(self):
        with pytest.raises(DomainError):
            Mst.from_edges(4, [(0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0)])


class TestComponents:
    def setup_method(self):
        self.mst = chain(0, 1, 2.5, 4.5)  # edges sorted: (0,1) w1, (1,2) w1.5, (2,3) w2

    def edge_id(self, a, b):
        return next(i for i, e in enumerate(self.mst.edges) if (e.u, e.v) == (a, b))

    def test_single_cut(self):
        p = components_after_removal(self.mst, [self.edge_id(1, 2)])
        assert p.labels.tolist() == [1, 1, 2, 2]

    def test_no_cut(self):
        assert components_after_removal(self.mst, []).labels.tolist() == [1, 1, 1, 1]

    def test_two_cuts(self):
        p = components_after_removal(self.mst, [self.edge_id(0, 1), self.edge_id(2, 3)])
        assert p.labels.tolist() == [1, 2, 2, 3]

    def test_order_does_not_matter(self):
        a = components_after_removal(self.mst, [0, 2])
        b = components_after_removal(self.mst, [2, 0])
        assert a == b

    def test_full_removal(self):
        assert components_after_removal(self.mst, [0, 1, 2]).labels.tolist() == [1, 2, 3, 4]

    def test_unknown_edge(self):
        with pytest.raises(DomainError):
            components_after_removal(self.mst, [3])

    @given(small_sets.filter(lambda X: X.shape[0] >= 2), st.data())
    def test_removing_j_edges_gives_j_plus_one_clusters(self, X, data):
        mst = build_mst(Dataset(X))
        removed = data.draw(st.sets(st.integers(0, mst.m - 1)))
        p = components_after_removal(mst, removed)
        assert p.l == len(removed) + 1
        # preorder-range relabelling agrees after canonicalisation
        from mstclust.core import canonical_labels

        np.testing.assert_array_equal(canonical_labels(RootedTree(mst).labels_from_removed(sorted(removed))), p.labels)


class TestDegreesAndPaths:
    def test_degrees(self):
        assert vertex_degrees(chain(0, 1, 2, 3)).tolist() == [1, 2, 2, 1]
        star = build_mst(Dataset(np.array([[0, 0], [1, 0], [0, 1], [-1, 0]], dtype=float)))
        assert vertex_degrees(star).tolist() == [3, 1, 1, 1]
        assert vertex_degrees(chain(0)).tolist() == [0]

    def test_path_lengths(self):
        mst = chain(0, 1, 3)
        assert tree_path_length(mst, 0, 2) == 3.0
        assert tree_path_length(mst, 1, 1) == 0.0
        star = build_mst(Dataset(np.array([[0, 0], [2, 0], [0, 5]], dtype=float)))
        assert tree_path_length(star, 1, 2) == 7.0

    @given(small_sets.filter(lambda X: X.shape[0] >= 3))
    def test_path_metric(self, X):
        mst = build_mst(Dataset(X))
        d = lambda a, b: tree_path_length(mst, a, b)
        assert d(0, 1) == d(1, 0)
        assert d(0, 2) <= d(0, 1) + d(1, 2) + 1e-9
        for e in mst.edges:
            assert d(e.u, e.v) == e.weight


class TestKnn:
    def test_example(self):
        nt = knn_table(Dataset(np.array([0.0, 1.0, 10.0])), 1)
        assert nt.indices[:, 0].tolist() == [1, 0, 1]

    def test_saturation(self):
        nt = knn_table(Dataset(np.array([0.0, 1.0, 10.0, 4.0])), 25)
        assert nt.M == 3
        for i, row in enumerate(nt.indices):
            assert sorted(row.tolist()) == sorted(set(range(4)) - {i})

    def test_duplicates(self):
        nt = knn_table(Dataset(np.array([[0.0, 0.0], [5.0, 5.0], [0.0, 0.0]])), 1)
        assert nt.indices[0, 0] == 2 and nt.indices[2, 0] == 0
        assert nt.distances[0, 0] == 0.0

    def test_chunking_does_not_change_result(self):
        X = np.random.default_rng(0).normal(size=(50, 2))
        a = knn_table(Dataset(X), 5, chunk=7)
        b = knn_table(Dataset(X), 5)
        np.testing.assert_array_equal(a.indices, b.indices)

    def test_matches_full_sort(self):
        X = np.random.default_rng(1).normal(size=(30, 3))
        nt = knn_table(Dataset(X), 4)
        D = np.sqrt(((X[:, None] - X[None]) ** 2).sum(-1))
        np.fill_diagonal(D, np.inf)
        np.testing.assert_array_equal(nt.indices, np.argsort(D, axis=1)[:, :4])


def test_export_round_trip(tmp_path):
    X = np.random.default_rng(2).normal(size=(12, 2))
    mst = build_mst(Dataset(X))
    write_mst(mst, tmp_path / "t.mst")
    back = read_mst(tmp_path / "t.mst", 12)
    assert back.edges == mst.edges
