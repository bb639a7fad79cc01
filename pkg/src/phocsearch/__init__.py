"""Spatial PHOC signatures for query-by-expression formula retrieval."""

from phocsearch.config import (
    LevelSelection,
    PhocConfig,
    RegionKind,
    bit_layout,
    parse_config,
)
from phocsearch.encoder import FormulaPhoc, encode_formula
from phocsearch.errors import (
    CapacityError,
    ConfigError,
    CorpusFormatError,
    IndexFormatError,
    PhocError,
)
from phocsearch.index import InvertedIndex, build_index, read_index, write_index
from phocsearch.layout import FormulaLayout, SymbolPlacement, load_corpus
from phocsearch.search import retrieve_topk, run_topics, score

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "ConfigError",
    "CorpusFormatError",
    "FormulaLayout",
    "FormulaPhoc",
    "IndexFormatError",
    "InvertedIndex",
    "LevelSelection",
    "PhocConfig",
    "PhocError",
    "RegionKind",
    "SymbolPlacement",
    "bit_layout",
    "build_index",
    "encode_formula",
    "load_corpus",
    "parse_config",
    "read_index",
    "retrieve_topk",
    "run_topics",
    "score",
    "write_index",
]
