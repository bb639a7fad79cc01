"""Ranking with the bit-operation cosine surrogate and TREC run output.

For a fixed query ``a`` the cosine ``|a & b| / (sqrt|a| sqrt|b|)`` orders
candidates exactly as ``|a & b| / sqrt|b|`` does, so the query norm is
dropped and only popcounts are needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from phocsearch.encoder import FormulaPhoc, encode_formula
from phocsearch.errors import RunFormatError
from phocsearch.index import InvertedIndex
from phocsearch.layout import FormulaLayout


@dataclass(frozen=True)
class ScoredHit:
    formula_id: str
    score: float


@dataclass(frozen=True)
class RunEntry:
    qid: str
    doc_id: str
    rank: int
    score: float
    tag: str

    def to_line(self) -> str:
        return f"{self.qid} Q0 {self.doc_id} {self.rank} {self.score:.6f} {self.tag}"


def intersection(query: FormulaPhoc, candidate: FormulaPhoc) -> int:
    return sum(
        (w & candidate.words[label]).bit_count()
        for label, w in query.words.items()
        if label in candidate.words
    )


def score(query: FormulaPhoc, candidate: FormulaPhoc) -> float:
    if candidate.norm <= 0:
        raise ValueError(f"candidate {candidate.id!r} has an empty signature")
    return intersection(query, candidate) / math.sqrt(candidate.norm)


def score_index(idx: InvertedIndex, query: FormulaPhoc) -> tuple[np.ndarray, np.ndarray]:
    """Handles and bcos scores of every formula sharing a label with ``query``."""
    n = len(idx.ids)
    overlap = np.zeros(n, dtype=np.int64)
    touched = np.zeros(n, dtype=bool)
    for label, qword in query.words.items():
        hit = idx.postings.get(label)
        if hit is None:
            continue
        refs, words = hit
        overlap[refs] += np.bitwise_count(words & np.uint64(qword))
        touched[refs] = True
    refs = np.flatnonzero(touched)
    return refs, overlap[refs] / np.sqrt(idx.norms[refs].astype(np.float64))


def retrieve_topk(idx: InvertedIndex, query: FormulaLayout | FormulaPhoc, k: int = 1000) -> list[ScoredHit]:
    """Top ``k`` formulas by score, ties broken by formula id; zero scores are dropped."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if isinstance(query, FormulaLayout):
        query = encode_formula(query, idx.layout)
    refs, scores = score_index(idx, query)
    keep = scores > 0
    refs, scores = refs[keep], scores[keep]
    order = np.lexsort((idx._id_rank[refs], -scores))[:k]
    return [ScoredHit(idx.ids[r], float(s)) for r, s in zip(refs[order], scores[order])]


def run_topics(
    idx: InvertedIndex, topics: Sequence[FormulaLayout], k: int = 1000, tag: str = "phoc"
) -> list[RunEntry]:
    seen = set()
    for t in topics:
        if t.id in seen:
            raise ValueError(f"duplicate topic id {t.id!r}")
        seen.add(t.id)
    if not tag or any(c.isspace() for c in tag):
        raise ValueError(f"run tag must be a non-empty token without spaces, got {tag!r}")
    entries = []
    for t in topics:
        for rank, hit in enumerate(retrieve_topk(idx, t, k), start=1):
            entries.append(RunEntry(t.id, hit.formula_id, rank, hit.score, tag))
    return entries


def format_run(entries: Iterable[RunEntry]) -> str:
    return "".join(e.to_line() + "\n" for e in entries)


def write_run(entries: Iterable[RunEntry], out: str | TextIO) -> None:
    if isinstance(out, str):
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(format_run(entries))
    else:
        out.write(format_run(entries))


def read_run(path) -> dict[str, list[tuple[str, float]]]:
    """Parse a TREC run into ``qid -> [(docid, score), ...]`` ordered by rank.

    Entries are re-sorted by the rank column; topics keep first-seen order.
    """
    per_topic: dict[str, list[tuple[int, str, float]]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 6:
                raise RunFormatError(f"{path}: line {lineno}: expected 6 fields, found {len(parts)}")
            qid, _, doc, rank, sc, _ = parts
            try:
                entry = (int(rank), doc, float(sc))
            except ValueError:
                raise RunFormatError(f"{path}: line {lineno}: bad rank or score") from None
            per_topic.setdefault(qid, []).append(entry)
    return {
        q: [(doc, sc) for _, doc, sc in sorted(rows, key=lambda r: r[0])]
        for q, rows in per_topic.items()
    }
