"""Index, search and evaluate many configurations, then pick by reciprocal rank."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from phocsearch.config import LevelSelection, PhocConfig, config_to_string, layout_width
from phocsearch.evaluation import (
    Qrels,
    evaluate_run,
    rank_configs,
    select_by_reciprocal_rank,
)
from phocsearch.index import build_index
from phocsearch.layout import FormulaLayout
from phocsearch.search import retrieve_topk


@dataclass(frozen=True)
class ConfigResult:
    config: str
    bits: int
    means: dict[str, float]


def evaluate_config(
    cfg: PhocConfig,
    corpus: Sequence[FormulaLayout],
    topics: Sequence[FormulaLayout],
    qrels: Qrels,
    sel: LevelSelection = LevelSelection.FULL,
    k: int = 1000,
    threshold: int = 2,
) -> ConfigResult:
    idx = build_index(corpus, cfg, sel)
    run = {t.id: [h.formula_id for h in retrieve_topk(idx, t, k)] for t in topics}
    report = evaluate_run(run, qrels, threshold)
    return ConfigResult(config_to_string(cfg), layout_width(cfg, sel), report.means)


def _evaluate(args):
    return evaluate_config(*args)


def grid_search(
    configs: Sequence[PhocConfig],
    corpus: Sequence[FormulaLayout],
    topics: Sequence[FormulaLayout],
    qrels: Qrels,
    k: int = 1000,
    threshold: int = 2,
    workers: int = 1,
) -> list[ConfigResult]:
    jobs = [(c, corpus, topics, qrels, LevelSelection.FULL, k, threshold) for c in configs]
    if workers <= 1:
        return [_evaluate(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_evaluate, jobs))


def select_configs(
    results: Sequence[ConfigResult], deep: str = "ndcg'@1000", shallow: str = "p'@10"
) -> tuple[list[str], list[str], list[tuple[str, float]]]:
    """Rankings by the deep and the shallow metric, and their reciprocal-rank merge."""
    by_deep = rank_configs({r.config: r.means[deep] for r in results})
    by_shallow = rank_configs({r.config: r.means[shallow] for r in results})
    return by_deep, by_shallow, select_by_reciprocal_rank(by_deep, by_shallow)
