"""Bag-of-words and level-skipping comparison tables for a corpus/topics/qrels triple.

With no arguments a synthetic collection is generated. Pass ARQMath-derived
files in the CLI formats to run the study on real judgments.
"""

import argparse
from pathlib import Path

from phocsearch.evaluation import load_qrels
from phocsearch.layout import load_corpus, load_topics
from phocsearch.search import write_run
from phocsearch.study import STUDY_CONFIGS, run_study
from phocsearch.synthetic import make_collection


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--corpus")
    p.add_argument("--topics")
    p.add_argument("--qrels")
    p.add_argument("--configs", nargs="+", default=list(STUDY_CONFIGS))
    p.add_argument("--baseline", default="x1")
    p.add_argument("--k", type=int, default=1000)
    p.add_argument("--threshold", type=int, default=2)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--runs-dir", help="also write every TREC run here")
    args = p.parse_args()

    if args.corpus:
        corpus, topics, qrels = load_corpus(args.corpus), load_topics(args.topics), load_qrels(args.qrels)
    else:
        coll = make_collection(seed=0, clusters=200, variants=10, n_topics=50)
        corpus, topics, qrels = coll.corpus, coll.topics, coll.qrels

    result = run_study(corpus, topics, qrels, args.configs, args.baseline, args.k, args.threshold, args.alpha)
    print(result.tables())
    if args.runs_dir:
        out = Path(args.runs_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, entries in result.runs.items():
            write_run(entries, str(out / f"{name}.run"))


if __name__ == "__main__":
    main()
