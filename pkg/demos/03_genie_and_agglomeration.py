# # Agglomerative schemes: single linkage, Genie and information criterion
#
# Agglomeration runs the other way round.  Start with n singletons and
# merge along MST edges in order of increasing weight.  Genie adds one
# rule: while the Gini index of the cluster sizes exceeds a threshold g,
# the next merge must involve one of the smallest clusters.

import numpy as np

from mstclust.agglomerative import genie
from mstclust.algorithms import cluster
from mstclust.datasets import load_toy
from mstclust.external import best_ar_over_references
from mstclust.mst import build_mst
from mstclust.validity import gini_index

ds, refs = load_toy("overlap")
mst = build_mst(ds)
k = refs[0].l
print(f"overlap: n={ds.n}, reference k={k}")

# Single linkage is prone to chaining: long thin clusters swallow their
# neighbours and tiny outlier groups survive as clusters of their own.

for g in (1.0, 0.7, 0.5, 0.3, 0.1):
    p = genie(mst, g, k)
    ar = best_ar_over_references(refs, p)
    print(f"  g={g:.1f}  sizes {sorted(p.sizes().tolist())}  Gini {gini_index(p.sizes()):.3f}  AR {ar:.3f}")

# g = 1 never triggers the constraint, so it reproduces single linkage.

assert genie(mst, 1.0, k) == cluster(ds, k, "single", mst)

# IcA merges greedily by the information criterion.  Genie+Ic(k+l) first
# runs Genie with several thresholds into k+l groups, keeps only the merges
# that every run agrees on, and lets the information criterion finish the
# job from there.

for algo in ("IcA", "Genie+Ic(k+0)", "Genie+Ic(k+5)", "Genie+Ic(k+10)"):
    p = cluster(ds, k, algo, mst)
    print(f"  {algo:15s} sizes {sorted(p.sizes().tolist())}  AR {best_ar_over_references(refs, p):.3f}")
