"""Command-line interface: ``mstclust {mst,cluster,score,oracle,bench}``."""

from __future__ import annotations

import argparse
import dataclasses
import sys

from mstclust.algorithms import available_algorithms, cluster
from mstclust.bench import aggregate_summary, load_config, run_benchmark, write_results, write_summary
from mstclust.core import MstClustError, load_dataset, load_labels, write_labels
from mstclust.external import best_ar_over_references
from mstclust.mst import build_mst, write_mst
from mstclust.oracle import SearchConfig, exhaustive_max_ar, local_search_max_ar


def _cmd_mst(args) -> None:
    mst = build_mst(load_dataset(args.data))
    if args.output:
        write_mst(mst, args.output)
    else:
        for a, b, w in mst.edges:
            print(f"{a} {b} {w:.17g}")


def _cmd_cluster(args) -> None:
    p = cluster(load_dataset(args.data), args.k, args.algo)
    if args.output:
        write_labels(p, args.output)
    else:
        sys.stdout.write("".join(f"{v}\n" for v in p.labels.tolist()))


def _cmd_score(args) -> None:
    pred = load_labels(args.pred)
    refs = [load_labels(path, pred.n) for path in args.ref.split(",")]
    print(repr(best_ar_over_references(refs, pred)))


def _cmd_oracle(args) -> None:
    ds = load_dataset(args.data)
    mst = build_mst(ds)
    refs = [load_labels(path, ds.n) for path in args.ref.split(",")]
    ks = sorted({r.l for r in refs}) if args.k is None else [args.k]
    best = None
    for k in ks:
        group = [r for r in refs if r.l == k] or refs
        if args.mode == "exhaustive":
            res = exhaustive_max_ar(mst, group, k)
        else:
            traces = []
            cfg = SearchConfig(restarts=args.restarts, seed=args.seed)
            res = local_search_max_ar(mst, group, k, cfg, traces)
            if args.verbose:
                for i, t in enumerate(traces):
                    print(f"restart {i}: " + " ".join(f"{v:.6f}" for v in t), file=sys.stderr)
        if best is None or res.ar > best[1].ar:
            best = (k, res)
    k, res = best
    print(f"k {k}")
    print(f"ar {res.ar!r}")
    print("removed " + " ".join(f"{mst.u[e]}-{mst.v[e]}" for e in res.removed))


def _cmd_bench(args) -> None:
    cfg = load_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.parallelism is not None:
        overrides["parallelism"] = args.parallelism
    if args.output is not None:
        overrides["output"] = args.output
    cfg = dataclasses.replace(cfg, **overrides)
    records = run_benchmark(cfg)
    if cfg.output:
        write_results(records, cfg.output, cfg.record_timing)
    else:
        for r in records:
            print(f"{r.dataset},{r.algorithm},{r.k},{r.ar!r},{r.status}")
    if cfg.summary:
        write_summary(aggregate_summary(records), cfg.summary)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mstclust", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mst", help="build the Euclidean MST and print 'u v weight' lines")
    p.add_argument("data")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_mst)

    p = sub.add_parser("cluster", help="partition a dataset into k clusters")
    p.add_argument("data")
    p.add_argument("--algo", required=True, help="e.g. " + ", ".join(available_algorithms()[:6]) + ", ...")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("score", help="adjusted Rand index of predicted labels (best over references)")
    p.add_argument("pred")
    p.add_argument("--ref", required=True, help="comma-separated reference label files")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("oracle", help="best AR attainable by cutting MST edges")
    p.add_argument("data")
    p.add_argument("--ref", required=True, help="comma-separated reference label files")
    p.add_argument("--k", type=int)
    p.add_argument("--mode", choices=["exhaustive", "search"], default="exhaustive")
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("bench", help="run a benchmark grid from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--parallelism", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (MstClustError, OSError) as e:
        print(f"mstclust: error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
