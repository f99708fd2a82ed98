import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mstclust.agglomerative import agglomerative_maximize, genie, genie_consumed, genie_plus_ic, ica
from mstclust.core import Dataset, DomainError
from mstclust.divisive import single_linkage_cut
from mstclust.mst import build_mst
from mstclust.validity import ObjectiveContext, evaluate_objective, gini_index, parse_objective
from oracles import labels_keeping, unique_distance_points

GAP = Dataset(np.array([0.0, 1.0, 2.0, 10.0]))
LINE = Dataset(np.array([0.0, 1.0, 2.0, 3.0, 4.0, 100.0]))


class TestGreedyMerging:
    def test_ica_example(self):
        assert ica(build_mst(GAP), GAP, 2).labels.tolist() == [1, 1, 1, 2]

    def test_k_equals_n(self):
        assert ica(build_mst(GAP), GAP, 4).labels.tolist() == [1, 2, 3, 4]

    def test_k_too_large(self):
        with pytest.raises(DomainError):
            ica(build_mst(GAP), GAP, 5)

    @given(st.integers(0, 2**32 - 1), st.integers(2, 25))
    def test_cut_weight_is_single_linkage(self, seed, n):
        X = unique_distance_points(np.random.default_rng(seed), n)
        ds = Dataset(X)
        mst = build_mst(ds)
        k = 1 + seed % n
        for fast in (True, False):
            p = agglomerative_maximize(mst, ds, parse_objective("MstCutWeight"), k, fast=fast)
            assert p == single_linkage_cut(mst, k)

    @given(seed=st.integers(0, 2**32 - 1))
    def test_fast_information_criterion_equals_naive(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 25))
        ds = Dataset(rng.normal(size=(n, int(rng.integers(1, 4)))))
        mst = build_mst(ds)
        k = int(rng.integers(1, n + 1))
        spec = parse_objective("InfoCriterion")
        t1, t2 = [], []
        a = agglomerative_maximize(mst, ds, spec, k, fast=True, trace=t1)
        b = agglomerative_maximize(mst, ds, spec, k, fast=False, trace=t2)
        assert a == b
        for (_, v1, _), (_, v2, _) in zip(t1, t2):
            np.testing.assert_allclose(v1, v2, rtol=1e-9, atol=1e-9)

    def test_steps_are_greedy_optimal(self):
        rng = np.random.default_rng(4)
        ds = Dataset(rng.normal(size=(14, 2)))
        mst = build_mst(ds)
        edges = list(zip(mst.u.tolist(), mst.v.tolist()))
        for name in ["InfoCriterion", "Silhouette", "DaviesBouldin", "GDunn_d5_D3"]:
            spec = parse_objective(name)
            ctx = ObjectiveContext(ds, mst)
            trace = []
            agglomerative_maximize(mst, ds, spec, 3, trace=trace)
            consumed = np.zeros(mst.m, bool)
            for cand, _, chosen in trace:
                values = {}
                for e in cand:
                    keep = consumed.copy()
                    keep[e] = True
                    values[int(e)] = evaluate_objective(spec, ctx, labels_keeping(ds.n, edges, keep))
                assert values[chosen] >= max(values.values()) - 1e-9, name
                consumed[chosen] = True


class TestGenie:
    def test_trace_example(self):
        mst = build_mst(LINE)
        trace = []
        p = genie(mst, 0.3, 2, trace)
        assert p.labels.tolist() == [1, 1, 1, 1, 1, 2]
        np.testing.assert_allclose([t[0] for t in trace], [0, 1 / 6, 1 / 3, 1 / 2], atol=1e-15)
        assert [t[1] for t in trace] == [False, False, True, True]

    def test_k_equals_n(self):
        assert genie(build_mst(LINE), 0.3, 6).labels.tolist() == [1, 2, 3, 4, 5, 6]

    def test_threshold_domain(self):
        with pytest.raises(DomainError):
            genie(build_mst(LINE), 0.0, 2)

    @given(st.integers(0, 2**32 - 1), st.integers(2, 30))
    def test_threshold_one_is_single_linkage(self, seed, n):
        mst = build_mst(Dataset(unique_distance_points(np.random.default_rng(seed), n)))
        k = 1 + seed % n
        assert genie(mst, 1.0, k) == single_linkage_cut(mst, k)

    @given(st.integers(0, 2**32 - 1), st.sampled_from([0.1, 0.3, 0.5, 0.7]))
    def test_trace_is_consistent(self, seed, g):
        rng = np.random.default_rng(seed)
        ds = Dataset(rng.normal(size=(int(rng.integers(2, 40)), 2)))
        mst = build_mst(ds)
        k = int(rng.integers(1, ds.n + 1))
        trace = []
        consumed = genie_consumed(mst, g, k, trace)
        assert consumed.sum() == ds.n - k
        edges = list(zip(mst.u.tolist(), mst.v.tolist()))
        merged = np.zeros(mst.m, bool)
        for gini, constrained, e in trace:
            labels = labels_keeping(ds.n, edges, merged)
            sizes = np.bincount(labels)[1:]
            assert gini == pytest.approx(gini_index(sizes), abs=1e-12)
            assert constrained == (gini >= g)
            free = np.flatnonzero(~merged)
            if constrained:
                smallest = sizes.min()
                touches = [f for f in free if min(sizes[labels[mst.u[f]] - 1], sizes[labels[mst.v[f]] - 1]) == smallest]
                assert e == touches[0]
            else:
                assert e == free[0]
            merged[e] = True


class TestGeniePlusIc:
    def test_one_threshold_no_extra_is_genie(self):
        rng = np.random.default_rng(1)
        ds = Dataset(rng.normal(size=(30, 2)))
        mst = build_mst(ds)
        assert genie_plus_ic(mst, ds, 3, thresholds=[0.3]) == genie(mst, 0.3, 3)

    def test_example(self):
        assert genie_plus_ic(build_mst(GAP), GAP, 2).labels.tolist() == [1, 1, 1, 2]

    def test_full_extra_is_ica(self):
        rng = np.random.default_rng(2)
        ds = Dataset(rng.normal(size=(8, 2)))
        mst = build_mst(ds)
        assert genie_plus_ic(mst, ds, 3, extra=5) == ica(mst, ds, 3)

    def test_extra_too_large(self):
        with pytest.raises(DomainError):
            genie_plus_ic(build_mst(GAP), GAP, 2, extra=3)

    @given(st.integers(0, 2**32 - 1), st.integers(0, 5))
    def test_result_coarsens_common_refinement(self, seed, extra):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(8, 40))
        ds = Dataset(rng.normal(size=(n, 2)))
        mst = build_mst(ds)
        k = int(rng.integers(1, n - extra + 1))
        p = genie_plus_ic(mst, ds, k, extra=extra)
        assert p.l == k
        runs = np.stack([genie(mst, g, k + extra).labels for g in (0.1, 0.3, 0.5, 0.7)], axis=1)
        # points together in every Genie run stay together
        for key in np.unique(runs, axis=0):
            together = np.all(runs == key, axis=1)
            assert np.unique(p.labels[together]).size == 1
