"""Prime (judged-only) ranking metrics, paired t-tests and model selection.

Prime metrics drop unjudged documents from a ranking before scoring, so a
run is never penalized for documents nobody assessed.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy import stats as sps

from phocsearch.errors import RunFormatError

Qrels = dict[str, dict[str, int]]
Run = Mapping[str, Sequence]  # qid -> ranked docids, or (docid, score) pairs

METRICS = ("ndcg'@1000", "map'", "p'@10", "p'@5", "p'@1")
HEADERS = {"ndcg'@1000": "NDCG'", "map'": "MAP'", "p'@10": "P'@10", "p'@5": "P'@5", "p'@1": "P'@1"}


def load_qrels(path) -> Qrels:
    """Read ``qid 0 docid grade`` lines."""
    qrels: Qrels = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 4:
                raise RunFormatError(f"{path}: line {lineno}: expected 'qid 0 docid grade'")
            qid, _, doc, grade = parts
            try:
                g = int(grade)
            except ValueError:
                raise RunFormatError(f"{path}: line {lineno}: grade {grade!r} is not an integer") from None
            if g < 0:
                raise RunFormatError(f"{path}: line {lineno}: negative grade")
            qrels.setdefault(qid, {})[doc] = g
    return qrels


def _docids(ranking) -> list[str]:
    return [d if isinstance(d, str) else d[0] for d in ranking]


def prime_filter(ranking: Sequence[str], qrels: Qrels, qid: str) -> list[str]:
    dups = [d for d, c in Counter(ranking).items() if c > 1]
    if dups:
        raise ValueError(f"topic {qid}: document {dups[0]!r} ranked more than once")
    judged = qrels.get(qid, {})
    return [d for d in ranking if d in judged]


def n_relevant(qrels: Qrels, qid: str, threshold: int = 2) -> int:
    return sum(g >= threshold for g in qrels.get(qid, {}).values())


def precision_at_k(filtered: Sequence[str], qrels: Qrels, qid: str, k: int, threshold: int = 2) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    judged = qrels.get(qid, {})
    return sum(judged.get(d, 0) >= threshold for d in filtered[:k]) / k


def average_precision(filtered: Sequence[str], qrels: Qrels, qid: str, threshold: int = 2) -> Optional[float]:
    """Returns None when the topic has no relevant judged document."""
    total = n_relevant(qrels, qid, threshold)
    if total == 0:
        return None
    judged = qrels[qid]
    hits = 0
    acc = 0.0
    for i, d in enumerate(filtered, start=1):
        if judged.get(d, 0) >= threshold:
            hits += 1
            acc += hits / i
    return acc / total


def ndcg_at_k(filtered: Sequence[str], qrels: Qrels, qid: str, k: int = 1000) -> Optional[float]:
    """Gain is the raw grade, discount ``1 / log2(rank + 1)``. None without positive grades."""
    judged = qrels.get(qid, {})
    ideal_grades = sorted(judged.values(), reverse=True)[:k]
    ideal = sum(g / math.log2(i + 1) for i, g in enumerate(ideal_grades, start=1))
    if ideal == 0:
        return None
    dcg = sum(judged.get(d, 0) / math.log2(i + 1) for i, d in enumerate(filtered[:k], start=1))
    return dcg / ideal


@dataclass
class MetricReport:
    per_topic: dict[str, dict[str, float]]  # metric -> qid -> value
    threshold: int

    @property
    def topics(self) -> list[str]:
        return list(next(iter(self.per_topic.values())).keys()) if self.per_topic else []

    def mean(self, metric: str) -> float:
        vals = list(self.per_topic[metric].values())
        return sum(vals) / len(vals) if vals else 0.0

    @property
    def means(self) -> dict[str, float]:
        return {m: self.mean(m) for m in self.per_topic}

    def records(self, system: str) -> list[str]:
        """Flat ``system metric topic value`` lines, then ``system metric mean value``."""
        lines = []
        for m, vals in self.per_topic.items():
            lines.extend(f"{system} {m} {q} {v:.6f}" for q, v in vals.items())
            lines.append(f"{system} {m} mean {self.mean(m):.6f}")
        return lines


def evaluate_run(run: Run, qrels: Qrels, threshold: int = 2) -> MetricReport:
    """Prime metrics over every qrels topic with at least one relevant judgment.

    Topics absent from the run score zero; run topics absent from the
    qrels are ignored.
    """
    if threshold < 1:
        raise ValueError("relevance threshold must be >= 1")
    per_topic: dict[str, dict[str, float]] = {m: {} for m in METRICS}
    for qid in sorted(qrels):
        if n_relevant(qrels, qid, threshold) == 0:
            continue
        filtered = prime_filter(_docids(run.get(qid, ())), qrels, qid)
        per_topic["ndcg'@1000"][qid] = ndcg_at_k(filtered, qrels, qid, 1000)
        per_topic["map'"][qid] = average_precision(filtered, qrels, qid, threshold)
        for k in (10, 5, 1):
            per_topic[f"p'@{k}"][qid] = precision_at_k(filtered, qrels, qid, k, threshold)
    return MetricReport(per_topic, threshold)


@dataclass(frozen=True)
class TTestResult:
    system: str
    t: float
    p: float
    p_corrected: float
    significant: bool
    mean_diff: float


def paired_t(baseline: Sequence[float], system: Sequence[float]) -> tuple[float, float]:
    """Two-sided paired t statistic and p-value of ``system - baseline``."""
    d = np.asarray(system, dtype=np.float64) - np.asarray(baseline, dtype=np.float64)
    n = len(d)
    if n < 2:
        raise ValueError("a paired t-test needs at least 2 topics")
    mean = d.mean()
    sd = d.std(ddof=1)
    if sd == 0 or not np.isfinite(sd):
        if mean == 0:
            return 0.0, 1.0
        return math.copysign(math.inf, mean), 0.0
    t = mean / (sd / math.sqrt(n))
    return float(t), float(2 * sps.t.sf(abs(t), n - 1))


def paired_ttest_bonferroni(
    baseline: Mapping[str, float],
    systems: Mapping[str, Mapping[str, float]],
    alpha: float = 0.05,
) -> list[TTestResult]:
    """Compare each system to ``baseline`` per topic; p-values are multiplied by the number of systems."""
    topics = sorted(baseline)
    for name, scores in systems.items():
        if sorted(scores) != topics:
            raise ValueError(f"system {name!r} was evaluated on a different topic set than the baseline")
    m = len(systems)
    results = []
    base = [baseline[q] for q in topics]
    for name, scores in systems.items():
        sys_scores = [scores[q] for q in topics]
        t, p = paired_t(base, sys_scores)
        results.append(
            TTestResult(
                name, t, p, min(1.0, p * m), p * m < alpha, float(np.mean(sys_scores) - np.mean(base))
            )
        )
    return results


@dataclass
class Comparison:
    baseline: str
    reports: dict[str, MetricReport]
    tests: dict[str, dict[str, TTestResult]] = field(default_factory=dict)  # metric -> system -> result
    alpha: float = 0.05

    def significant(self, system: str, metric: str) -> bool:
        res = self.tests.get(metric, {}).get(system)
        return bool(res and res.significant)


def compare_runs(
    baseline: str,
    reports: Mapping[str, MetricReport],
    alpha: float = 0.05,
    metrics: Sequence[str] = METRICS,
) -> Comparison:
    """Test every metric of every non-baseline system against ``baseline``."""
    others = {name: r for name, r in reports.items() if name != baseline}
    base = reports[baseline]
    tests = {
        m: {
            r.system: r
            for r in paired_ttest_bonferroni(
                base.per_topic[m], {n: rep.per_topic[m] for n, rep in others.items()}, alpha
            )
        }
        for m in metrics
    }
    return Comparison(baseline, dict(reports), tests, alpha)


def format_table(
    comparison: Comparison,
    columns: Optional[Mapping[str, Mapping[str, str]]] = None,
    metrics: Sequence[str] = METRICS,
) -> str:
    """Aligned metric table, ``*`` marking significant differences from the baseline.

    ``columns`` optionally adds leading descriptive columns per system,
    e.g. ``{"yr7-odd": {"Levels": "Odd", "Bits": "31"}}``.
    """
    extra = []
    if columns:
        for cols in columns.values():
            extra.extend(c for c in cols if c not in extra)
    header = ["Model", *extra, *(HEADERS.get(m, m) for m in metrics)]
    rows = []
    for name, rep in comparison.reports.items():
        label = f"_{name}_" if name == comparison.baseline else name
        row = [label, *((columns or {}).get(name, {}).get(c, "") for c in extra)]
        for m in metrics:
            star = "*" if comparison.significant(name, m) else ""
            row.append(f"{rep.mean(m):.4f}{star}")
        rows.append(row)
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in [header, *rows]]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def ttest_records(comparison: Comparison) -> list[str]:
    """``system metric t p p_corrected significant`` per test."""
    out = []
    for m, per_sys in comparison.tests.items():
        for name, r in per_sys.items():
            out.append(
                f"{name} {m} t={r.t:.6g} p={r.p:.6g} p_bonferroni={r.p_corrected:.6g} "
                f"significant={'yes' if r.significant else 'no'}"
            )
    return out


def rank_configs(scores: Mapping[str, float]) -> list[str]:
    """Configs by score descending, ties by name."""
    return sorted(scores, key=lambda c: (-scores[c], c))


def select_by_reciprocal_rank(ranking_a: Sequence[str], ranking_b: Sequence[str]) -> list[tuple[str, float]]:
    """Order configs by the mean of their reciprocal ranks in two rankings."""
    if sorted(ranking_a) != sorted(ranking_b) or len(set(ranking_a)) != len(ranking_a):
        raise ValueError("rankings must be permutations of the same configurations")
    pos_b = {c: i for i, c in enumerate(ranking_b, start=1)}
    mrr = {c: (1 / i + 1 / pos_b[c]) / 2 for i, c in enumerate(ranking_a, start=1)}
    return sorted(mrr.items(), key=lambda e: (-e[1], e[0]))
