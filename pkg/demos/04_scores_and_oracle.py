# # Scoring against references, and how good an MST cut can get
#
# The adjusted Rand index (AR) compares a clustering with a reference.  It
# is 1 for identical partitions and close to 0 for random agreement.
# Reference points labelled 0 are noise and are ignored.

import numpy as np

from mstclust.algorithms import available_algorithms, cluster
from mstclust.datasets import load_toy
from mstclust.external import adjusted_rand, best_ar_over_references
from mstclust.mst import build_mst
from mstclust.oracle import SearchConfig, exhaustive_max_ar, local_search_max_ar

print("identical :", adjusted_rand([1, 1, 2, 2, 3], [2, 2, 1, 1, 3]))
print("relabelled:", adjusted_rand([1, 1, 2, 2], [1, 2, 1, 2]))

rng = np.random.default_rng(1)
chance = [adjusted_rand(rng.integers(1, 4, 200), rng.integers(1, 4, 200)) for _ in range(200)]
print(f"random pairs: mean AR {np.mean(chance):+.4f}")

# Since every algorithm here only cuts MST edges, the best AR any of them
# could reach is the maximum over all (k-1)-subsets of edges.  For small k
# the subsets can be enumerated.

ds, refs = load_toy("overlap")
mst = build_mst(ds)
k = refs[0].l
best = exhaustive_max_ar(mst, refs, k)
print(f"overlap: n={ds.n}, k={k}, best attainable AR {best.ar:.4f} by cutting edges {best.removed}")

# For larger k a tabu-style local search gives a lower bound on the same
# maximum.  Here it can be compared against the exact answer.

found = local_search_max_ar(mst, refs, k, SearchConfig(restarts=5, seed=3))
print(f"local search: AR {found.ar:.4f}")

scores = {a: best_ar_over_references(refs, cluster(ds, k, a, mst)) for a in available_algorithms()[:12]}
for algo, ar in sorted(scores.items(), key=lambda t: -t[1]):
    print(f"  {algo:24s} {ar:.4f}   gap to best cut {best.ar - ar:.4f}")
