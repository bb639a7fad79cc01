"""Write a clustered synthetic corpus, topics and qrels in the CLI's file formats."""

import argparse
from pathlib import Path

from phocsearch.layout import write_corpus
from phocsearch.synthetic import make_collection, write_qrels


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default="data/synthetic")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--clusters", type=int, default=200)
    p.add_argument("--variants", type=int, default=10)
    p.add_argument("--topics", type=int, default=50)
    args = p.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    coll = make_collection(args.seed, args.clusters, args.variants, args.topics)
    write_corpus(coll.corpus, out / "corpus.jsonl")
    write_corpus(coll.topics, out / "topics.jsonl", id_key="qid")
    write_qrels(coll.qrels, out / "qrels.txt")
    print(f"{len(coll.corpus)} formulas, {len(coll.topics)} topics -> {out}")


if __name__ == "__main__":
    main()
