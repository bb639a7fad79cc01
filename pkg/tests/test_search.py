import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from phocsearch.config import bit_layout
from phocsearch.encoder import FormulaPhoc, encode_formula
from phocsearch.index import build_index
from phocsearch.layout import random_corpus, random_layout, synthesize_linear_layout
from phocsearch.search import format_run, read_run, retrieve_topk, run_topics, score

VOCAB = [f"s{i}" for i in range(15)]


def brute_force(corpus, query, layout, k):
    q = encode_formula(query, layout)
    hits = []
    for f in corpus:
        c = encode_formula(f, layout)
        s = score(q, c)
        if s > 0:
            hits.append((f.id, s))
    hits.sort(key=lambda h: (-h[1], h[0]))
    return hits[:k]


def test_score_examples():
    a = FormulaPhoc("q", {"x": 0b1111})
    assert score(a, a) == 2.0
    assert score(a, FormulaPhoc("c", {"y": 0b1})) == 0.0
    # a = 1100, b = 1010 read left-to-right; any bit order gives the same popcounts
    assert score(FormulaPhoc("q", {"x": 0b0011}), FormulaPhoc("c", {"x": 0b0101})) == pytest.approx(1 / math.sqrt(2), abs=1e-5)


def test_score_rejects_empty_candidate():
    with pytest.raises(ValueError):
        score(FormulaPhoc("q", {"x": 1}), FormulaPhoc("c", {}))


@pytest.fixture(scope="module")
def corpus():
    return random_corpus(2, 300, VOCAB)


@pytest.mark.parametrize("cfg, sel", [("x5y3r9", "full"), ("yr7", "last"), ("yr7o3", "odd"), ("x1", "full")])
def test_matches_brute_force(corpus, cfg, sel):
    idx = build_index(corpus, cfg, sel)
    rng = random.Random(8)
    for i in range(15):
        query = random_layout(rng, VOCAB + ["unseen"], id=f"q{i}")
        got = [(h.formula_id, h.score) for h in retrieve_topk(idx, query, 25)]
        assert got == brute_force(corpus, query, idx.layout, 25)


def test_self_query_ranks_first(corpus):
    idx = build_index(corpus, "yr7")
    for f in corpus[:20]:
        hits = retrieve_topk(idx, f, 1000)
        own = encode_formula(f, idx.layout)
        self_hit = next(h for h in hits if h.formula_id == f.id)
        assert self_hit.score == pytest.approx(math.sqrt(own.norm))
        # anything ranked above it must score at least as high
        assert all(h.score >= self_hit.score for h in hits[: hits.index(self_hit)])


def test_unseen_labels_return_nothing(corpus):
    idx = build_index(corpus, "yr7")
    assert retrieve_topk(idx, synthesize_linear_layout(["unseen", "other"]), 10) == []


def test_k_larger_than_candidates():
    corpus = [synthesize_linear_layout(list(w), id=w) for w in ("ab", "bc", "cd")]
    idx = build_index(corpus, "x3")
    hits = retrieve_topk(idx, synthesize_linear_layout(["b"]), 100)
    assert sorted(h.formula_id for h in hits) == ["ab", "bc"]


def test_ties_break_by_id():
    corpus = [synthesize_linear_layout(["a"], id=i) for i in ("z", "m", "b")]
    idx = build_index(corpus, "x1")
    assert [h.formula_id for h in retrieve_topk(idx, synthesize_linear_layout(["a"]), 3)] == ["b", "m", "z"]


def test_run_topics_format_and_grouping(tmp_path):
    corpus = [synthesize_linear_layout(list(w), id=w) for w in ("ab", "abc", "bcd")]
    idx = build_index(corpus, "x3")
    topics = [synthesize_linear_layout(list("ab"), id="T2"), synthesize_linear_layout(list("d"), id="T1")]
    entries = run_topics(idx, topics, k=10, tag="demo")
    assert [e.qid for e in entries] == ["T2", "T2", "T2", "T1"]
    assert [e.rank for e in entries[:3]] == [1, 2, 3]
    line = entries[0].to_line().split()
    assert line[1] == "Q0" and line[5] == "demo" and len(line) == 6
    assert line[4] == f"{entries[0].score:.6f}"
    path = tmp_path / "run.txt"
    path.write_text(format_run(entries))
    assert list(read_run(path)) == ["T2", "T1"]
    assert format_run(run_topics(idx, topics, k=10, tag="demo")) == format_run(entries)


def test_run_topics_duplicate_qid():
    idx = build_index([synthesize_linear_layout(["a"], id="f")], "x1")
    t = synthesize_linear_layout(["a"], id="T")
    with pytest.raises(ValueError, match="duplicate"):
        run_topics(idx, [t, t], 5, "x")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["x5y3r9", "yr7", "o5r5", "xy3"]))
def test_score_bounds(seed, cfg):
    rng = random.Random(seed)
    layout = bit_layout(cfg)
    q = encode_formula(random_layout(rng, VOCAB[:5]), layout)
    c = encode_formula(random_layout(rng, VOCAB[:5]), layout)
    s = score(q, c)
    upper = math.sqrt(c.norm)
    assert 0 <= s <= upper + 1e-12
    contained = all(label in q.words and w & q.words[label] == w for label, w in c.words.items())
    assert (s == upper) == contained
