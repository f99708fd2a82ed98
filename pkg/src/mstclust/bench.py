"""Benchmark runner: every algorithm on every dataset, scored against reference labels.

Datasets follow the layout of the public clustering benchmark battery:
``<battery>/<name>.data.gz`` holds the points and ``<name>.labels0.gz``,
``<name>.labels1.gz``, ... the reference labelings (``.gz`` optional).
"""

from __future__ import annotations

import csv
import fnmatch
import json
import math
import re
import signal
import threading
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from mstclust.algorithms import available_algorithms, cluster
from mstclust.core import ConfigurationError, load_dataset, load_labels
from mstclust.external import ReferenceScorer
from mstclust.mst import build_mst
from mstclust.oracle import SearchConfig, max_mst_ar

ORACLE_NAME = "MaxMST"
RESULT_FIELDS = ["dataset", "algorithm", "k", "ar", "seconds", "status"]
SUMMARY_FIELDS = ["algorithm", "n_lt_080", "n_ge_095", "min", "q1", "median", "mean"]


@dataclass
class BenchmarkConfig:
    roots: list[str]
    algorithms: list[str]
    names: list[str] = field(default_factory=lambda: ["*"])
    seed: int = 0
    parallelism: int = 1
    time_limit: float = 600.0
    output: str | None = None
    summary: str | None = None
    record_timing: bool = False
    oracle_budget: int = 10**6
    oracle_restarts: int = 10

    def __post_init__(self):
        if not self.roots:
            raise ConfigurationError("at least one dataset root is required")
        if not self.algorithms:
            raise ConfigurationError("at least one algorithm is required")
        if not self.time_limit > 0:
            raise ConfigurationError("time_limit must be positive")
        if self.parallelism < 1:
            raise ConfigurationError("parallelism must be at least 1")
        known = set(available_algorithms()) | {ORACLE_NAME}
        for a in self.algorithms:
            if a not in known and not re.fullmatch(r"Genie_G(\d+(\.\d*)?|\.\d+)|Genie\+Ic\(k\+\d+\)|MST/D_.+", a):
                raise ConfigurationError(f"unknown algorithm {a!r}")


def load_config(path) -> BenchmarkConfig:
    """Read a JSON config; relative roots and outputs resolve against its directory."""
    path = Path(path)
    raw = json.loads(path.read_text(encoding="utf-8"))
    base = path.parent
    raw["roots"] = [str(base / r) for r in raw.get("roots", [])]
    for key in ("output", "summary"):
        if raw.get(key):
            raw[key] = str(base / raw[key])
    try:
        return BenchmarkConfig(**raw)
    except TypeError as e:
        raise ConfigurationError(f"{path}: {e}") from None


@dataclass(frozen=True)
class RunRecord:
    dataset: str
    algorithm: str
    k: int
    ar: float
    seconds: float
    status: str  # ok, error or timeout
    references: tuple[str, ...] = ()
    message: str = ""


@dataclass(frozen=True)
class SummaryStats:
    algorithm: str
    n_lt_080: int
    n_ge_095: int
    min: float
    q1: float
    median: float
    mean: float


@dataclass(frozen=True)
class DatasetEntry:
    id: str
    data: Path
    labels: tuple[Path, ...]


_DATA_RE = re.compile(r"(.+)\.data(\.gz)?$")


def discover_datasets(roots: Sequence, names: Sequence[str] = ("*",)) -> list[DatasetEntry]:
    """Find ``*.data[.gz]`` files and their ``.labels<i>`` companions, sorted by id."""
    found = {}
    for root in roots:
        root = Path(root)
        for path in sorted(root.rglob("*.data*")):
            m = _DATA_RE.fullmatch(path.name)
            if not m:
                continue
            stem = m[1]
            ident = (path.parent.relative_to(root) / stem).as_posix()
            if not any(fnmatch.fnmatchcase(ident, pat) for pat in names):
                continue
            labels = []
            for lp in path.parent.glob(f"{stem}.labels*"):
                lm = re.fullmatch(re.escape(stem) + r"\.labels(\d+)(\.gz)?", lp.name)
                if lm:
                    labels.append((int(lm[1]), lp))
            found[ident] = DatasetEntry(ident, path, tuple(p for _, p in sorted(labels)))
    return [found[i] for i in sorted(found)]


def stream_seed(seed: int, dataset: str, algorithm: str) -> int:
    """Seed for one (dataset, algorithm) cell, independent of the other cells."""
    ss = np.random.SeedSequence([seed, zlib.crc32(dataset.encode()), zlib.crc32(algorithm.encode())])
    return int(ss.generate_state(1)[0])


class RunTimeout(Exception):
    pass


@contextmanager
def _time_limit(seconds: float):
    # SIGALRM only works in the main thread; elsewhere the limit is checked afterwards
    if threading.current_thread() is not threading.main_thread() or not hasattr(signal, "setitimer"):
        yield
        return

    def handler(signum, frame):
        raise RunTimeout()

    old = signal.signal(signal.SIGALRM, handler)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _run_one(entry: DatasetEntry, algo: str, ds, mst, refs, cfg: BenchmarkConfig) -> RunRecord:
    ks = [r.l for r in refs]
    start = time.perf_counter()
    try:
        with _time_limit(cfg.time_limit):
            best, best_i = -math.inf, 0
            if algo == ORACLE_NAME:
                search = SearchConfig(restarts=cfg.oracle_restarts, seed=stream_seed(cfg.seed, entry.id, algo))
                for i, ref in enumerate(refs):
                    value = max_mst_ar(mst, [ref], ref.l, cfg.oracle_budget, search).ar
                    if value > best:
                        best, best_i = value, i
            else:
                for k in sorted(set(ks)):
                    pred = cluster(ds, k, algo, mst).labels
                    for i, ref in enumerate(refs):
                        if ref.l == k:
                            value = ReferenceScorer([ref]).score(pred)
                            if value > best or (value == best and i < best_i):
                                best, best_i = value, i
        elapsed = time.perf_counter() - start
        if elapsed > cfg.time_limit:
            raise RunTimeout()
        status, message = "ok", ""
    except RunTimeout:
        best, best_i, status, message = 0.0, 0, "timeout", f"exceeded {cfg.time_limit} s"
    except Exception as e:  # any failure scores zero
        best, best_i, status, message = 0.0, 0, "error", f"{type(e).__name__}: {e}"
    elapsed = time.perf_counter() - start
    return RunRecord(
        entry.id, algo, ks[best_i], float(best), elapsed, status,
        tuple(p.name for p in entry.labels), message,
    )


def _run_dataset(entry: DatasetEntry, cfg: BenchmarkConfig) -> list[RunRecord]:
    try:
        ds = load_dataset(entry.data)
        if not entry.labels:
            raise ConfigurationError(f"{entry.id}: no reference labels")
        refs = [load_labels(p, ds.n) for p in entry.labels]
        mst = build_mst(ds)  # shared by all algorithms on this dataset
    except Exception as e:
        msg = f"{type(e).__name__}: {e}"
        return [RunRecord(entry.id, a, 0, 0.0, 0.0, "error", (), msg) for a in cfg.algorithms]
    return [_run_one(entry, algo, ds, mst, refs, cfg) for algo in cfg.algorithms]


def run_benchmark(cfg: BenchmarkConfig) -> list[RunRecord]:
    """Run every configured algorithm on every dataset.

    Each algorithm sees only the data matrix and the k of a reference
    labeling; a dataset's score is the best adjusted Rand index over its
    reference labelings.  Errors and timeouts score 0.  Records come back
    in (dataset, algorithm) configuration order whatever the parallelism.
    """
    entries = discover_datasets(cfg.roots, cfg.names)
    if not entries:
        raise ConfigurationError(f"no datasets found under {cfg.roots} matching {cfg.names}")
    if cfg.parallelism == 1:
        chunks = [_run_dataset(e, cfg) for e in entries]
    else:
        with ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
            chunks = list(pool.map(_run_dataset, entries, [cfg] * len(entries)))
    return [r for chunk in chunks for r in chunk]


def aggregate_summary(records: Sequence[RunRecord]) -> list[SummaryStats]:
    """Per-algorithm counts of AR < 0.8 and AR >= 0.95, min, Q1, median and mean.

    Quartiles interpolate linearly between order statistics.
    """
    if not records:
        raise ConfigurationError("no records to summarise")
    by_algo: dict[str, list[float]] = {}
    for r in records:
        by_algo.setdefault(r.algorithm, []).append(r.ar)
    out = []
    for algo, values in by_algo.items():
        ar = np.array(values, dtype=np.float64)
        out.append(SummaryStats(
            algo,
            int(np.sum(ar < 0.8)),
            int(np.sum(ar >= 0.95)),
            float(ar.min()),
            float(np.quantile(ar, 0.25)),
            float(np.median(ar)),
            float(ar.mean()),
        ))
    return out


def _fmt(x: float) -> str:
    return repr(float(x))


def write_results(records: Sequence[RunRecord], path, record_timing: bool = False) -> None:
    """CSV with one row per dataset and algorithm.

    Wall times vary between runs, so unless ``record_timing`` is set the
    seconds column holds ``NA`` and the file is reproducible byte for byte.
    """
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(RESULT_FIELDS)
        for r in records:
            secs = f"{r.seconds:.3f}" if record_timing else "NA"
            w.writerow([r.dataset, r.algorithm, r.k, _fmt(r.ar), secs, r.status])


def read_results(path) -> list[RunRecord]:
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    return [
        RunRecord(
            row["dataset"], row["algorithm"], int(row["k"]), float(row["ar"]),
            math.nan if row["seconds"] == "NA" else float(row["seconds"]), row["status"],
        )
        for row in rows
    ]


def write_summary(stats: Sequence[SummaryStats], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(SUMMARY_FIELDS)
        for s in stats:
            w.writerow([s.algorithm, s.n_lt_080, s.n_ge_095, _fmt(s.min), _fmt(s.q1), _fmt(s.median), _fmt(s.mean)])
