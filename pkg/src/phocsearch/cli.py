"""Command-line interface: ``phocsearch {index,search,eval,compare,bits,gridsearch}``.

Exit status is 0 on success, 2 on bad usage or malformed input, 1 otherwise.
"""

from __future__ import annotations

import argparse
import sys
import traceback
from pathlib import Path

from phocsearch.config import (
    MAX_BITS,
    LevelSelection,
    RegionKind,
    bit_layout,
    enumerate_configs,
)
from phocsearch.errors import PhocError
from phocsearch.evaluation import (
    METRICS,
    compare_runs,
    evaluate_run,
    format_table,
    load_qrels,
    ttest_records,
)
from phocsearch.gridsearch import grid_search, select_configs
from phocsearch.index import build_index, read_index, stats, write_index
from phocsearch.layout import load_corpus, load_topics
from phocsearch.search import read_run, run_topics, write_run


def _levels(text):
    try:
        return LevelSelection.parse(text)
    except PhocError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def cmd_index(args) -> int:
    corpus = load_corpus(args.corpus)
    idx = build_index(corpus, args.config, args.levels, workers=args.workers)
    write_index(idx, args.out)
    print(f"{idx.config_string}/{idx.selection.value} {stats(idx, args.out).summary()}")
    return 0


def cmd_search(args) -> int:
    idx = read_index(args.index)
    topics = load_topics(args.topics)
    entries = run_topics(idx, topics, args.k, args.tag)
    write_run(entries, args.out if args.out else sys.stdout)
    if args.out:
        print(f"wrote {len(entries)} entries for {len(topics)} topics to {args.out}", file=sys.stderr)
    return 0


def cmd_eval(args) -> int:
    qrels = load_qrels(args.qrels)
    report = evaluate_run(read_run(args.run), qrels, args.threshold)
    name = args.name or Path(args.run).stem
    comparison = compare_runs(name, {name: report}, metrics=METRICS)
    print(format_table(comparison))
    print()
    print("\n".join(report.records(name)))
    return 0


def cmd_compare(args) -> int:
    qrels = load_qrels(args.qrels)
    paths = [args.baseline, *args.runs]
    names = [Path(p).stem for p in paths]
    if len(set(names)) != len(names):
        names = [str(p) for p in paths]
    reports = {n: evaluate_run(read_run(p), qrels, args.threshold) for n, p in zip(names, paths)}
    comparison = compare_runs(names[0], reports, args.alpha)
    print(format_table(comparison))
    print()
    print("\n".join(ttest_records(comparison)))
    print()
    for n, rep in reports.items():
        print("\n".join(rep.records(n)))
    return 0


def cmd_bits(args) -> int:
    layout = bit_layout(args.config, args.levels)
    print(f"{layout.config_string} {layout.selection.value} {layout.width}")
    for kind, level, positions in layout.groups():
        name = "shared" if kind is None else f"{kind.value}{level}"
        print(f"  {name:<7} bits {positions.start}-{positions.stop - 1}")
    return 0


def cmd_gridsearch(args) -> int:
    kinds = [RegionKind(c) for c in args.kinds.lower()] if args.kinds else list(RegionKind)
    configs = enumerate_configs(
        args.max_level, not args.all_levels, args.bit_bound, kinds, args.exclude_level_one
    )
    print(f"{len(configs)} admissible configurations", file=sys.stderr)
    corpus = load_corpus(args.corpus)
    topics = load_topics(args.topics)
    qrels = load_qrels(args.qrels)
    results = grid_search(configs, corpus, topics, qrels, args.k, args.threshold, args.workers)
    by_deep, by_shallow, merged = select_configs(results)
    means = {r.config: r for r in results}
    pos_deep = {c: i for i, c in enumerate(by_deep, 1)}
    pos_shallow = {c: i for i, c in enumerate(by_shallow, 1)}
    print(f"{'rank':>4}  {'config':<12} {'bits':>4}  {'NDCG_prime':>10} {'P_prime@10':>10}  "
          f"{'r_ndcg':>6} {'r_p10':>6}  {'mrr':>7}")
    for i, (cfg, mrr) in enumerate(merged[: args.top], 1):
        r = means[cfg]
        ndcg, p10 = r.means["ndcg'@1000"], r.means["p'@10"]
        print(
            f"{i:>4}  {cfg:<12} {r.bits:>4}  {ndcg:>10.4f} {p10:>10.4f}  "
            f"{pos_deep[cfg]:>6} {pos_shallow[cfg]:>6}  {mrr:>7.4f}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phocsearch", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *flags):
        if "config" in flags:
            sp.add_argument("--config", required=True, help="e.g. yr7, x5y3r9, x2r7")
        if "levels" in flags:
            sp.add_argument("--levels", type=_levels, default=LevelSelection.FULL, help="full|odd|last")
        if "k" in flags:
            sp.add_argument("--k", type=_positive, default=1000, help="results per topic")
        if "threshold" in flags:
            sp.add_argument("--threshold", type=_positive, default=2,
                            help="minimum grade counted as relevant for P' and MAP'")
        if "workers" in flags:
            sp.add_argument("--workers", type=_positive, default=1)

    sp = sub.add_parser("index", help="encode a corpus and write an index directory")
    sp.add_argument("--corpus", required=True)
    sp.add_argument("--out", required=True)
    common(sp, "config", "levels", "workers")
    sp.set_defaults(func=cmd_index)

    sp = sub.add_parser("search", help="run topics against an index, write a TREC run")
    sp.add_argument("--index", required=True)
    sp.add_argument("--topics", required=True)
    sp.add_argument("--tag", default="phoc")
    sp.add_argument("--out", help="run file (default: stdout)")
    common(sp, "k")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("eval", help="prime metrics for one run")
    sp.add_argument("--run", required=True)
    sp.add_argument("--qrels", required=True)
    sp.add_argument("--name")
    common(sp, "threshold")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("compare", help="prime metrics and Bonferroni paired t-tests against a baseline")
    sp.add_argument("--baseline", required=True)
    sp.add_argument("--runs", nargs="+", required=True)
    sp.add_argument("--qrels", required=True)
    sp.add_argument("--alpha", type=float, default=0.05)
    common(sp, "threshold")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("bits", help="print the per-symbol bit layout of a configuration")
    common(sp, "config", "levels")
    sp.set_defaults(func=cmd_bits)

    sp = sub.add_parser("gridsearch", help="evaluate every admissible configuration")
    sp.add_argument("--corpus", required=True)
    sp.add_argument("--topics", required=True)
    sp.add_argument("--qrels", required=True)
    sp.add_argument("--max-level", type=_positive, default=9)
    sp.add_argument("--all-levels", action="store_true", help="allow even maximum levels")
    sp.add_argument("--bit-bound", type=_positive, default=MAX_BITS)
    sp.add_argument("--kinds", default="xyor", help="subset of region kinds to combine")
    sp.add_argument("--exclude-level-one", action="store_true",
                    help="skip configs where a kind stops at level 1")
    sp.add_argument("--top", type=_positive, default=20, help="rows to print")
    common(sp, "k", "threshold", "workers")
    sp.set_defaults(func=cmd_gridsearch)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        sys.stdout = None
        return 0
    except (PhocError, ValueError, OSError) as exc:
        print(f"phocsearch {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
