# # Divisive clustering driven by internal validity measures
#
# The divisive scheme deletes MST edges one at a time.  At each step it
# tries every remaining edge and keeps the deletion that maximises a chosen
# validity measure.  Different measures prefer very different splits.

import numpy as np

from mstclust.algorithms import cluster
from mstclust.datasets import load_toy
from mstclust.external import best_ar_over_references
from mstclust.mst import build_mst
from mstclust.validity import ObjectiveContext, evaluate_objective, gini_index, parse_objective

ds, refs = load_toy("overlap")
mst = build_mst(ds)
k = refs[0].l
print(f"overlap: n={ds.n}, d={ds.d}, reference k={k}")

# Every measure is oriented so that larger is better.  Scores such as
# Davies-Bouldin, where smaller is better, are negated.

measures = ["CalinskiHarabasz", "DaviesBouldin", "Silhouette", "GDunn_d2_D2", "DuNN_25_Min_Max", "WCNN_25"]
ctx = ObjectiveContext(ds, mst)
for name in measures:
    p = cluster(ds, k, f"MST/D_{name}", mst)
    value = evaluate_objective(parse_objective(name), ctx, p)
    ar = best_ar_over_references(refs, p)
    print(f"  {name:18s} value {value:10.4f}  sizes {p.sizes().tolist()}  AR {ar:.3f}")

# Measures based on centroids often shave off a few outliers.  The Gini
# index of the cluster sizes shows how unbalanced a result is
# (0 = equal sizes, values near 1 = one giant cluster).

for algo in ("single", "MST/D_Silhouette", "ITM"):
    p = cluster(ds, k, algo, mst)
    print(f"  {algo:18s} Gini {gini_index(p.sizes()):.3f}  sizes {p.sizes().tolist()}")

# ITM maximises an information criterion instead, and needs no neighbour
# table or distance matrix.
