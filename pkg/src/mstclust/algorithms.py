"""Name-based access to every clustering algorithm."""

from __future__ import annotations

import re

from mstclust.agglomerative import genie, genie_plus_ic, ica
from mstclust.core import ConfigurationError, Dataset, Partition
from mstclust.divisive import divisive_maximize, itm, single_linkage_cut
from mstclust.extras import ctcehc, hemst
from mstclust.mst import Mst, NeighbourTable, build_mst
from mstclust.validity import all_measure_names, parse_objective

GENIE_THRESHOLDS = (0.1, 0.3, 0.5, 0.7)


def available_algorithms() -> list[str]:
    names = ["single"]
    names += [f"Genie_G{g}" for g in GENIE_THRESHOLDS]
    names += ["IcA", "Genie+Ic(k+0)", "Genie+Ic(k+5)", "Genie+Ic(k+10)", "ITM"]
    names += [f"MST/D_{m}" for m in all_measure_names()]
    names += ["HEMST", "CTCEHC"]
    return names


def cluster(ds: Dataset, k: int, algo: str, mst: Mst | None = None, nt: NeighbourTable | None = None) -> Partition:
    """Run the algorithm called ``algo`` and return a k-partition of ``ds``.

    Accepted names: ``single``, ``Genie_G<g>``, ``IcA``, ``Genie+Ic(k+<l>)``,
    ``ITM``, ``MST/D_<measure>``, ``HEMST`` and ``CTCEHC``.
    """
    if mst is None:
        mst = build_mst(ds)
    if algo == "single":
        return single_linkage_cut(mst, k)
    if algo == "IcA":
        return ica(mst, ds, k)
    if algo == "ITM":
        return itm(mst, ds, k)
    if algo == "HEMST":
        return hemst(mst, k)
    if algo == "CTCEHC":
        return ctcehc(mst, ds, k)
    if m := re.fullmatch(r"Genie_G(\d+(?:\.\d*)?|\.\d+)", algo):
        return genie(mst, float(m[1]), k)
    if m := re.fullmatch(r"Genie\+Ic\(k\+(\d+)\)", algo):
        return genie_plus_ic(mst, ds, k, GENIE_THRESHOLDS, int(m[1]))
    if algo.startswith("MST/D_"):
        return divisive_maximize(mst, ds, parse_objective(algo), k, nt)
    raise ConfigurationError(f"unknown algorithm {algo!r}")
