"""The best adjusted Rand index attainable by deleting k-1 MST edges.

For small k every subset of edges is enumerated.  Otherwise a tabu-like
steepest-ascent search over single-edge swaps with random restarts gives a
lower bound on that maximum.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from mstclust.core import DomainError, MstClustError
from mstclust.external import ReferenceScorer
from mstclust.mst import Mst, RootedTree


class BudgetExceededError(MstClustError):
    pass


class OracleResult(NamedTuple):
    ar: float
    removed: tuple[int, ...]


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 10
    tabu_tenure: int | None = None  # None: round(sqrt(n - 1))
    stall_limit: int = 5
    seed: int = 0
    max_sweeps: int = 1000

    def __post_init__(self):
        if self.restarts < 1:
            raise DomainError("restarts must be at least 1")
        if self.stall_limit < 1:
            raise DomainError("stall_limit must be at least 1")
        if self.tabu_tenure is not None and self.tabu_tenure < 0:
            raise DomainError("tabu_tenure must be nonnegative")


def _check_k(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise DomainError(f"k must lie in 1..{n}, got {k}")


def exhaustive_max_ar(mst: Mst, refs: Sequence, k: int, budget: int = 10**8) -> OracleResult:
    """Maximum over all C(n-1, k-1) edge subsets of the best AR against ``refs``.

    The witness is the lexicographically smallest optimal subset of edge
    identifiers.
    """
    _check_k(mst.n, k)
    count = math.comb(mst.m, k - 1)
    if count > budget:
        raise BudgetExceededError(
            f"{count} candidate partitions exceed the enumeration budget of {budget}; "
            "use local_search_max_ar instead"
        )
    tree = RootedTree(mst)
    scorer = ReferenceScorer(refs)
    best, witness = -np.inf, ()
    for removed in itertools.combinations(range(mst.m), k - 1):
        value = scorer.score(tree.labels_from_removed(removed))
        if value > best:
            best, witness = value, removed
    return OracleResult(float(best), tuple(int(e) for e in witness))


def local_search_max_ar(
    mst: Mst,
    refs: Sequence,
    k: int,
    cfg: SearchConfig = SearchConfig(),
    traces: list | None = None,
) -> OracleResult:
    """Tabu-like steepest ascent over (k-1)-subsets of MST edges.

    Each restart begins at a uniformly random subset drawn from a stream
    seeded by (cfg.seed, restart index).  A sweep evaluates every swap of
    one deleted edge for one kept edge and moves to the best admissible
    swap, improving or not; an edge just restored may not be deleted again
    for ``tabu_tenure`` sweeps unless doing so beats the best value found so
    far.  A restart ends after ``stall_limit`` sweeps without improving its
    best.  Ties go to the smallest (restored, deleted) edge pair.
    """
    if not 2 <= k <= mst.n:
        raise DomainError(f"k must lie in 2..{mst.n}, got {k}")
    m = mst.m
    tenure = round(math.sqrt(m)) if cfg.tabu_tenure is None else cfg.tabu_tenure
    tree = RootedTree(mst)
    scorer = ReferenceScorer(refs)
    evaluate = lambda s: scorer.score(tree.labels_from_removed(sorted(s)))

    best = OracleResult(-math.inf, ())
    for restart in range(cfg.restarts):
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, restart]))
        current = set(int(e) for e in rng.choice(m, size=k - 1, replace=False))
        value = evaluate(current)
        run_best, run_set = value, frozenset(current)
        trace = [value]
        tabu = {}
        stall = 0
        for sweep in range(cfg.max_sweeps):
            if run_best >= 1.0 or len(current) == m:
                break
            move, move_value = None, -math.inf
            for a in sorted(current):
                for b in range(m):
                    if b in current:
                        continue
                    cand = current - {a} | {b}
                    v = evaluate(cand)
                    if tabu.get(b, -1) >= sweep and v <= max(run_best, best.ar):
                        continue
                    if v > move_value:
                        move, move_value = (a, b), v
            if move is None:
                break
            a, b = move
            current = current - {a} | {b}
            tabu[a] = sweep + tenure
            trace.append(move_value)
            if move_value > run_best:
                run_best, run_set = move_value, frozenset(current)
                stall = 0
            else:
                stall += 1
                if stall >= cfg.stall_limit:
                    break
        if traces is not None:
            traces.append(trace)
        cand = OracleResult(float(run_best), tuple(sorted(run_set)))
        if cand.ar > best.ar or (cand.ar == best.ar and cand.removed < best.removed):
            best = cand
    return best


def max_mst_ar(mst: Mst, refs: Sequence, k: int, budget: int = 10**6, cfg: SearchConfig = SearchConfig()) -> OracleResult:
    """Exhaustive search when C(n-1, k-1) fits ``budget``, local search otherwise."""
    if k == 1 or math.comb(mst.m, k - 1) <= budget:
        return exhaustive_max_ar(mst, refs, k, budget)
    return local_search_max_ar(mst, refs, k, cfg)
