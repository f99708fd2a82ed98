# # Minimum spanning trees and the partitions they encode
#
# Every algorithm in mstclust works on the Euclidean minimum spanning tree.
# Deleting k-1 of its edges leaves k connected pieces, so a k-clustering is
# just a choice of edges to cut.

import numpy as np

from mstclust.core import Dataset
from mstclust.divisive import single_linkage_cut
from mstclust.mst import build_mst, components_after_removal

rng = np.random.default_rng(0)
X = np.vstack([rng.normal((0, 0), 0.4, (6, 2)), rng.normal((4, 0), 0.4, (6, 2))])
ds = Dataset(X)

# Prim's algorithm runs in O(n^2) time without materialising the distance
# matrix.  Edges come back sorted by (weight, u, v), so edge 0 is the
# shortest and the last edge is the longest.

mst = build_mst(ds)
print(f"{mst.n} points, {mst.m} edges, total weight {mst.total_weight:.3f}")
for i, (u, v, w) in enumerate(mst.edges):
    print(f"  edge {i:2d}: {u:2d} - {v:2d}  {w:.3f}")

# Cutting the longest edge separates the two groups.  That is exactly
# single linkage with k = 2.

p = components_after_removal(mst, [mst.m - 1])
print("cut longest edge  :", p.labels.tolist())
print("single linkage k=2:", single_linkage_cut(mst, 2).labels.tolist())

# Labels are canonical: cluster 1 holds point 0, cluster 2 holds the
# smallest point not in cluster 1, and so on.  Two cuts that give the same
# grouping therefore give identical label vectors.

print("cluster sizes     :", p.sizes().tolist())
