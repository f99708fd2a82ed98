# # Running a benchmark grid
#
# The bench module runs many algorithms over a directory tree of datasets
# stored as ``<name>.data.gz`` plus ``<name>.labels0.gz``, ``.labels1.gz``
# and so on.  A small battery in that layout ships with the package.

import tempfile
from pathlib import Path

from mstclust.bench import BenchmarkConfig, aggregate_summary, run_benchmark, write_results, write_summary
from mstclust.datasets import toy_root

cfg = BenchmarkConfig(
    roots=[str(toy_root())],
    algorithms=["single", "Genie_G0.3", "IcA", "Genie+Ic(k+5)", "ITM", "HEMST", "CTCEHC", "MaxMST"],
    seed=17,
    time_limit=60,
)
records = run_benchmark(cfg)

# Each record holds the best AR over the dataset's references.  MaxMST is
# the oracle bound, so no algorithm can beat it on any dataset.

for r in records:
    print(f"{r.dataset:12s} {r.algorithm:14s} k={r.k}  AR {r.ar:.3f}  {r.status}")

# The summary counts poor (AR < 0.8) and near-perfect (AR >= 0.95) results
# per algorithm, with quartiles of the AR distribution.

for s in aggregate_summary(records):
    print(f"{s.algorithm:14s} <0.8: {s.n_lt_080}  >=0.95: {s.n_ge_095}  median {s.median:.3f}  mean {s.mean:.3f}")

# Result files are byte-identical across runs and parallelism levels
# because wall-clock times are left out unless record_timing is set.

with tempfile.TemporaryDirectory() as tmp:
    write_results(records, Path(tmp) / "results.csv")
    write_summary(aggregate_summary(records), Path(tmp) / "summary.csv")
    print((Path(tmp) / "results.csv").read_text().splitlines()[0])
