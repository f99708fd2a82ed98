import gzip
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mstclust.core import (
    DataFormatError,
    Dataset,
    DisjointSets,
    DomainError,
    EmptyInputError,
    LabelValidationError,
    Partition,
    canonical_labels,
    euclidean_distance,
    load_dataset,
    load_labels,
    write_dataset,
    write_labels,
)


def write(tmp_path, name, text):
    path = tmp_path / name
    if name.endswith(".gz"):
        with gzip.open(path, "wt") as f:
            f.write(text)
    else:
        path.write_text(text)
    return path


class TestLoadDataset:
    def test_three_points(self, tmp_path):
        ds = load_dataset(write(tmp_path, "a.data", "0 0\n1 0\n0 1\n"))
        assert (ds.n, ds.d) == (3, 2)
        np.testing.assert_array_equal(ds.points, [[0, 0], [1, 0], [0, 1]])

    def test_gzip_matches_plain(self, tmp_path):
        plain = load_dataset(write(tmp_path, "a.data", "0 0\n1 0\n0 1\n"))
        zipped = load_dataset(write(tmp_path, "a.data.gz", "0 0\n1 0\n0 1\n"))
        assert (zipped.n, zipped.d) == (3, 2)
        np.testing.assert_array_equal(plain.points, zipped.points)

    def test_ragged_row_names_line(self, tmp_path):
        with pytest.raises(DataFormatError, match="line 2"):
            load_dataset(write(tmp_path, "a.data", "1 2 3\n4 5\n"))

    def test_non_numeric(self, tmp_path):
        with pytest.raises(DataFormatError, match="line 1"):
            load_dataset(write(tmp_path, "a.data", "1 x\n"))

    def test_empty(self, tmp_path):
        with pytest.raises(EmptyInputError):
            load_dataset(write(tmp_path, "a.data", ""))

    def test_crlf_and_trailing_blank_lines(self, tmp_path):
        ds = load_dataset(write(tmp_path, "a.data", "1\t2\r\n3 4\r\n\n\n"))
        np.testing.assert_array_equal(ds.points, [[1, 2], [3, 4]])

    def test_non_finite_rejected(self, tmp_path):
        with pytest.raises(DataFormatError):
            load_dataset(write(tmp_path, "a.data", "1 nan\n"))

    def test_dataset_is_read_only(self):
        ds = Dataset([[0.0, 1.0]])
        with pytest.raises(ValueError):
            ds.points[0, 0] = 5.0

    def test_vector_becomes_column(self):
        assert Dataset([0.0, 1.0, 3.0]).points.shape == (3, 1)


class TestLoadLabels:
    def test_noise_and_two_clusters(self, tmp_path):
        p = load_labels(write(tmp_path, "a.labels0", "1\n1\n2\n0\n"))
        assert p.labels.tolist() == [1, 1, 2, 0]
        assert p.l == 2
        assert p.has_noise

    def test_gap(self, tmp_path):
        with pytest.raises(LabelValidationError, match=r"\[2\]"):
            load_labels(write(tmp_path, "a.labels0", "1\n3\n"))

    def test_single_cluster(self, tmp_path):
        assert load_labels(write(tmp_path, "a.labels0", "1\n1\n1\n")).l == 1

    def test_negative(self, tmp_path):
        with pytest.raises(DomainError):
            load_labels(write(tmp_path, "a.labels0", "1\n-1\n"))

    def test_count_mismatch(self, tmp_path):
        with pytest.raises(LabelValidationError):
            load_labels(write(tmp_path, "a.labels0", "1\n1\n"), n=3)


class TestDistance:
    def test_examples(self):
        ds = Dataset([[0.0, 0.0], [3.0, 4.0]])
        assert euclidean_distance(0, 1, ds) == 5.0
        assert euclidean_distance(1, 1, ds) == 0.0
        ds3 = Dataset([[1.0, 1.0, 1.0], [2.0, 2.0, 2.0]])
        assert euclidean_distance(0, 1, ds3) == pytest.approx(math.sqrt(3), rel=1e-15)

    @given(arrays(np.float64, (3, 3), elements=st.floats(-1e3, 1e3)))
    def test_metric_axioms(self, X):
        ds = Dataset(X)
        d = lambda a, b: euclidean_distance(a, b, ds)
        assert d(0, 1) == d(1, 0)
        assert d(0, 0) == 0.0
        assert d(0, 2) <= d(0, 1) + d(1, 2) + 1e-9
        assert d(0, 1) == pytest.approx(math.dist(X[0], X[1]), rel=1e-14, abs=1e-300)


class TestDisjointSets:
    @given(st.integers(1, 30).flatmap(
        lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=40))
    ))
    def test_matches_naive_set_merging(self, case):
        n, ops = case
        dsu = DisjointSets(n)
        naive = [{i} for i in range(n)]
        for a, b in ops:
            dsu.union(a, b)
            sa = next(s for s in naive if a in s)
            sb = next(s for s in naive if b in s)
            if sa is not sb:
                naive.remove(sb)
                sa |= sb
        assert dsu.n_sets == len(naive)
        for s in naive:
            roots = {dsu.find(x) for x in s}
            assert len(roots) == 1
            assert dsu.set_size(next(iter(s))) == len(s)
        assert sum(dsu.set_size(dsu.find(i)) for i in {dsu.find(i) for i in range(n)}) == n

    def test_labels_are_canonical(self):
        dsu = DisjointSets(5)
        dsu.union(3, 4)
        dsu.union(1, 3)
        assert dsu.labels().tolist() == [1, 2, 3, 2, 2]


class TestPartition:
    def test_canonical_labels(self):
        assert canonical_labels([7, 7, 3, 9, 3]).tolist() == [1, 1, 2, 3, 2]

    def test_sizes(self):
        assert Partition([1, 2, 2, 0, 3]).sizes().tolist() == [1, 2, 1]

    def test_equality_and_hash(self):
        assert Partition([1, 2]) == Partition(np.array([1, 2]))
        assert hash(Partition([1, 2])) == hash(Partition([1, 2]))
        assert Partition([1, 2]) != Partition([1, 1])


class TestRoundTrip:
    @given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 3)),
                  elements=st.floats(allow_nan=False, allow_infinity=False)))
    def test_dataset(self, X):
        import tempfile
        from pathlib import Path

        with tempfile.TemporaryDirectory() as tmp:
            for name in ("x.data", "x.data.gz"):
                path = Path(tmp) / name
                write_dataset(Dataset(X), path)
                np.testing.assert_array_equal(load_dataset(path).points, X)

    def test_labels(self, tmp_path):
        p = Partition([1, 0, 2, 2])
        for name in ("x.labels0", "x.labels0.gz"):
            write_labels(p, tmp_path / name)
            assert load_labels(tmp_path / name) == p

    def test_gzip_output_is_reproducible(self, tmp_path):
        write_labels(Partition([1, 2]), tmp_path / "a.gz")
        write_labels(Partition([1, 2]), tmp_path / "b.gz")
        assert (tmp_path / "a.gz").read_bytes() == (tmp_path / "b.gz").read_bytes()
