"""Clustering with Euclidean minimum spanning trees.

Partition a dataset into exactly k clusters by cutting edges of its MST,
score partitions with the adjusted Rand index, and bound what any
MST-based method could achieve with exhaustive and local-search oracles.
"""

from mstclust.core import (
    Dataset,
    DisjointSets,
    Partition,
    canonical_labels,
    euclidean_distance,
    load_dataset,
    load_labels,
    write_dataset,
    write_labels,
)
from mstclust.mst import (
    Edge,
    Mst,
    NeighbourTable,
    build_mst,
    components_after_removal,
    knn_table,
    tree_path_length,
    vertex_degrees,
)
from mstclust.validity import ObjectiveSpec, evaluate_objective, gini_index, parse_objective
from mstclust.divisive import divisive_maximize, itm, single_linkage_cut
from mstclust.agglomerative import agglomerative_maximize, genie, genie_plus_ic, ica
from mstclust.extras import ctcehc, hemst
from mstclust.external import adjusted_rand, best_ar_over_references, confusion_matrix
from mstclust.oracle import SearchConfig, exhaustive_max_ar, local_search_max_ar
from mstclust.algorithms import cluster, available_algorithms

__version__ = "0.1.0"
