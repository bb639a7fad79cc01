"""Clustered synthetic collections with graded judgments.

Each cluster starts from a random seed formula; corpus entries and topics
are perturbed copies of it (jittered positions, swapped or dropped symbols).
A topic's judgments grade its own cluster by how lightly each member was
perturbed, plus a few other-cluster documents judged non-relevant.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from phocsearch.evaluation import Qrels
from phocsearch.layout import FormulaLayout, SymbolPlacement, random_layout

VOCABULARY = tuple("abcdefxyzn") + ("+", "-", "=", "\\frac", "\\sqrt", "^", "(", ")", "1", "2", "\\sum", "\\int")


@dataclass
class SyntheticCollection:
    corpus: list[FormulaLayout]
    topics: list[FormulaLayout]
    qrels: Qrels


def perturb(rng: random.Random, f: FormulaLayout, strength: int, id: str, vocabulary=VOCABULARY) -> FormulaLayout:
    """Apply ``strength`` random edits: jitter, relabel, drop or mirror-swap a symbol."""
    symbols = list(f.symbols)
    for _ in range(strength):
        op = rng.random()
        i = rng.randrange(len(symbols))
        s = symbols[i]
        if op < 0.4:
            symbols[i] = SymbolPlacement(s.label, s.cx + rng.choice((-1, 1)) * 0.5, s.cy, s.w, s.h)
        elif op < 0.7:
            symbols[i] = SymbolPlacement(rng.choice(vocabulary), s.cx, s.cy, s.w, s.h)
        elif op < 0.85 and len(symbols) > 1:
            del symbols[i]
        else:
            j = rng.randrange(len(symbols))
            t = symbols[j]
            symbols[i] = SymbolPlacement(s.label, t.cx, t.cy, s.w, s.h)
            symbols[j] = SymbolPlacement(t.label, s.cx, s.cy, t.w, t.h)
    return FormulaLayout(id, tuple(symbols))


def make_collection(
    seed: int = 0,
    clusters: int = 40,
    variants: int = 8,
    n_topics: int = 20,
    negatives: int = 5,
    vocabulary=VOCABULARY,
) -> SyntheticCollection:
    rng = random.Random(seed)
    corpus: list[FormulaLayout] = []
    members: list[list[tuple[str, int]]] = []
    seeds = []
    for c in range(clusters):
        base = random_layout(rng, vocabulary, n_symbols=(4, 10), id=f"c{c:03d}", zero_size_rate=0.0)
        seeds.append(base)
        group = []
        for v in range(variants):
            strength = rng.randint(0, 6)
            doc = perturb(rng, base, strength, f"c{c:03d}v{v:02d}", vocabulary)
            corpus.append(doc)
            group.append((doc.id, strength))
        members.append(group)
    topics = []
    qrels: Qrels = {}
    for t, c in enumerate(rng.sample(range(clusters), min(n_topics, clusters))):
        qid = f"T{t:03d}"
        topics.append(perturb(rng, seeds[c], 1, qid, vocabulary))
        judged = qrels.setdefault(qid, {})
        for doc, strength in members[c]:
            judged[doc] = 3 if strength <= 1 else 2 if strength <= 3 else 1 if strength <= 5 else 0
        others = [d.id for d in corpus if not d.id.startswith(f"c{c:03d}")]
        for doc in rng.sample(others, min(negatives, len(others))):
            judged[doc] = 0
    return SyntheticCollection(corpus, topics, qrels)


def write_qrels(qrels: Qrels, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for qid in sorted(qrels):
            for doc in sorted(qrels[qid]):
                fh.write(f"{qid} 0 {doc} {qrels[qid][doc]}\n")
