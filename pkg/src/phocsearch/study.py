"""Bag-of-words comparison and level-skipping tables for a set of configurations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from phocsearch.config import LevelSelection, bit_layout, config_to_string, parse_config
from phocsearch.evaluation import Comparison, MetricReport, Qrels, compare_runs, evaluate_run, format_table
from phocsearch.index import build_index
from phocsearch.layout import FormulaLayout
from phocsearch.search import RunEntry, run_topics

STUDY_CONFIGS = ("yr7", "yr7o3", "x5y3r9")


@dataclass
class StudyResult:
    runs: dict[str, list[RunEntry]]
    reports: dict[str, MetricReport]
    bow: Comparison
    skipping: list[Comparison]
    columns: dict[str, dict[str, str]]

    def tables(self) -> str:
        parts = ["Bag of words vs. full configurations", format_table(self.bow, self.columns)]
        parts.append("")
        parts.append("Level skipping")
        for cmp in self.skipping:
            parts.append(format_table(cmp, self.columns))
            parts.append("")
        return "\n".join(parts).rstrip() + "\n"


def run_study(
    corpus: Sequence[FormulaLayout],
    topics: Sequence[FormulaLayout],
    qrels: Qrels,
    configs: Sequence[str] = STUDY_CONFIGS,
    baseline: str = "x1",
    k: int = 1000,
    threshold: int = 2,
    alpha: float = 0.05,
) -> StudyResult:
    """Index and search every config under full/odd/last, then test as in the two study tables.

    Full configurations are compared against the bag-of-words baseline; odd and
    last variants are compared against their own full configuration.
    """
    names = [config_to_string(parse_config(c)) for c in configs]
    jobs = [(config_to_string(parse_config(baseline)), LevelSelection.FULL)]
    jobs += [(c, sel) for c in names for sel in LevelSelection]
    runs, reports, columns = {}, {}, {}
    for cfg, sel in jobs:
        label = f"{cfg}-{sel.value}"
        idx = build_index(corpus, cfg, sel)
        runs[label] = run_topics(idx, topics, k, tag=label)
        ranked: dict[str, list[str]] = {}
        for e in runs[label]:
            ranked.setdefault(e.qid, []).append(e.doc_id)
        reports[label] = evaluate_run(ranked, qrels, threshold)
        columns[label] = {"Levels": sel.value.capitalize(), "Bits": str(bit_layout(cfg, sel).width)}
    base = f"{jobs[0][0]}-full"
    bow = compare_runs(base, {base: reports[base], **{f"{c}-full": reports[f"{c}-full"] for c in names}}, alpha)
    skipping = [
        compare_runs(f"{c}-full", {f"{c}-{s.value}": reports[f"{c}-{s.value}"] for s in LevelSelection}, alpha)
        for c in names
    ]
    return StudyResult(runs, reports, bow, skipping, columns)
