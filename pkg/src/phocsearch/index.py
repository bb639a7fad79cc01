"""Inverted index from symbol label to (formula handle, packed word) postings.

On disk an index is a directory of five files:

``meta``
    text: magic ``PHOCIDX1``, format version, config string, level
    selection, bit width, bytes per word and counts, one ``key value`` pair per line.
``vocab`` / ``ids``
    one label / formula id per line; vocabulary sorted.
``norms``
    little-endian uint32 popcount per formula.
``postings``
    magic, version and ``config/levels`` header, then for each vocabulary
    entry a little-endian uint64 count followed by (uint32 handle, word)
    pairs. Words take ``ceil(bits / 8)`` little-endian bytes, so narrower
    configurations give smaller indexes.
"""

from __future__ import annotations

import os
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from phocsearch.config import (
    BitLayout,
    LevelSelection,
    PhocConfig,
    bit_layout,
    parse_config,
)
from phocsearch.encoder import FormulaPhoc, encode_formula
from phocsearch.errors import ConfigError, IndexFormatError
from phocsearch.layout import FormulaLayout

MAGIC = "PHOCIDX1"
FORMAT_VERSION = 1
FILES = ("meta", "vocab", "ids", "norms", "postings")


def word_bytes(width: int) -> int:
    return max(1, -(-width // 8))


def posting_dtype(width: int) -> np.dtype:
    """Packed (handle, word bytes) record."""
    return np.dtype([("ref", "<u4"), ("word", "u1", (word_bytes(width),))])


def _pack_words(words: np.ndarray, nbytes: int) -> np.ndarray:
    return words.astype("<u8").view(np.uint8).reshape(-1, 8)[:, :nbytes]


def _unpack_words(raw: np.ndarray) -> np.ndarray:
    full = np.zeros((len(raw), 8), dtype=np.uint8)
    full[:, : raw.shape[1]] = raw
    return full.view("<u8").reshape(-1).astype(np.uint64)


@dataclass(eq=False)
class InvertedIndex:
    layout: BitLayout
    ids: tuple[str, ...]
    norms: np.ndarray  # uint32 per formula handle
    postings: dict[str, tuple[np.ndarray, np.ndarray]]  # label -> (uint32 refs, uint64 words)
    _id_rank: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.ids = tuple(self.ids)
        self.postings = {k: self.postings[k] for k in sorted(self.postings)}
        order = sorted(range(len(self.ids)), key=self.ids.__getitem__)
        rank = np.empty(len(self.ids), dtype=np.int64)
        rank[order] = np.arange(len(self.ids))
        self._id_rank = rank

    @property
    def vocabulary(self) -> list[str]:
        return list(self.postings)

    @property
    def config_string(self) -> str:
        return self.layout.config_string

    @property
    def selection(self) -> LevelSelection:
        return self.layout.selection

    @property
    def bit_width(self) -> int:
        return self.layout.width

    @property
    def n_postings(self) -> int:
        return sum(len(refs) for refs, _ in self.postings.values())

    def __len__(self) -> int:
        return len(self.ids)

    def __eq__(self, other) -> bool:
        if not isinstance(other, InvertedIndex):
            return NotImplemented
        return (
            self.layout == other.layout
            and self.ids == other.ids
            and np.array_equal(self.norms, other.norms)
            and list(self.postings) == list(other.postings)
            and all(
                np.array_equal(r, other.postings[k][0]) and np.array_equal(w, other.postings[k][1])
                for k, (r, w) in self.postings.items()
            )
        )

    def formula_words(self, ref: int) -> dict[str, int]:
        """Reassemble one formula's per-label words by scanning every posting list."""
        out = {}
        for label, (refs, words) in self.postings.items():
            pos = np.searchsorted(refs, ref)
            if pos < len(refs) and refs[pos] == ref:
                out[label] = int(words[pos])
        return out


def _encode_chunk(args):
    layouts, layout = args
    return [encode_formula(f, layout) for f in layouts]


def encode_corpus(corpus: Sequence[FormulaLayout], layout: BitLayout, workers: int = 1) -> list[FormulaPhoc]:
    if workers <= 1 or len(corpus) < 2 * workers:
        return [encode_formula(f, layout) for f in corpus]
    size = -(-len(corpus) // workers)
    chunks = [(corpus[i : i + size], layout) for i in range(0, len(corpus), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [p for part in pool.map(_encode_chunk, chunks) for p in part]


def build_index(
    corpus: Sequence[FormulaLayout],
    cfg: PhocConfig | str,
    sel: LevelSelection | str = LevelSelection.FULL,
    workers: int = 1,
) -> InvertedIndex:
    layout = bit_layout(cfg, sel)
    ids = [f.id for f in corpus]
    if len(set(ids)) != len(ids):
        seen = set()
        dup = next(i for i in ids if i in seen or seen.add(i))
        raise ValueError(f"duplicate formula id {dup!r}")
    phocs = encode_corpus(corpus, layout, workers)
    lists: dict[str, tuple[list[int], list[int]]] = {}
    for ref, phoc in enumerate(phocs):
        for label, word in phoc.words.items():
            refs, words = lists.setdefault(label, ([], []))
            refs.append(ref)
            words.append(word)
    postings = {
        label: (np.array(refs, dtype=np.uint32), np.array(words, dtype=np.uint64))
        for label, (refs, words) in lists.items()
    }
    norms = np.array([p.norm for p in phocs], dtype=np.uint32)
    return InvertedIndex(layout, tuple(ids), norms, postings)


def _check_lines(values, what):
    for v in values:
        if "\n" in v or "\r" in v:
            raise IndexFormatError(f"{what} {v!r} contains a line break and cannot be stored")


def _header(idx: InvertedIndex) -> bytes:
    tag = f"{idx.config_string}/{idx.selection.value}".encode()
    return MAGIC.encode() + struct.pack("<IH", FORMAT_VERSION, len(tag)) + tag


def serialize(idx: InvertedIndex) -> dict[str, bytes]:
    """File name to contents for the on-disk form of ``idx``."""
    _check_lines(idx.vocabulary, "label")
    _check_lines(idx.ids, "formula id")
    meta = (
        f"{MAGIC}\n"
        f"version {FORMAT_VERSION}\n"
        f"config {idx.config_string}\n"
        f"levels {idx.selection.value}\n"
        f"bits {idx.bit_width}\n"
        f"word_bytes {word_bytes(idx.bit_width)}\n"
        f"formulas {len(idx.ids)}\n"
        f"vocabulary {len(idx.postings)}\n"
        f"postings {idx.n_postings}\n"
    )
    parts = [_header(idx)]
    dtype = posting_dtype(idx.bit_width)
    for refs, words in idx.postings.values():
        rec = np.empty(len(refs), dtype=dtype)
        rec["ref"] = refs
        rec["word"] = _pack_words(words, word_bytes(idx.bit_width))
        parts.append(struct.pack("<Q", len(refs)))
        parts.append(rec.tobytes())
    return {
        "meta": meta.encode(),
        "vocab": "".join(f"{v}\n" for v in idx.vocabulary).encode(),
        "ids": "".join(f"{i}\n" for i in idx.ids).encode(),
        "norms": idx.norms.astype("<u4").tobytes(),
        "postings": b"".join(parts),
    }


def write_index(idx: InvertedIndex, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, data in serialize(idx).items():
        (directory / name).write_bytes(data)


def _read_lines(path: Path) -> list[str]:
    text = path.read_bytes().decode("utf-8")
    if text and not text.endswith("\n"):
        raise IndexFormatError(f"{path.name}: truncated (no final newline)")
    return text.split("\n")[:-1]


def _parse_meta(path: Path) -> dict[str, str]:
    lines = _read_lines(path)
    if not lines or lines[0] != MAGIC:
        raise IndexFormatError(f"{path}: bad magic, not a PHOC index")
    meta = {}
    for line in lines[1:]:
        key, _, value = line.partition(" ")
        meta[key] = value
    required = ("version", "config", "levels", "bits", "word_bytes", "formulas", "vocabulary", "postings")
    missing = [k for k in required if k not in meta]
    if missing:
        raise IndexFormatError(f"{path}: missing fields {', '.join(missing)}")
    if meta["version"] != str(FORMAT_VERSION):
        raise IndexFormatError(f"{path}: unsupported format version {meta['version']}")
    return meta


def read_index(directory: str | Path) -> InvertedIndex:
    directory = Path(directory)
    for name in FILES:
        if not (directory / name).is_file():
            raise IndexFormatError(f"{directory}: missing index file {name!r}")
    meta = _parse_meta(directory / "meta")
    try:
        layout = bit_layout(parse_config(meta["config"]), LevelSelection.parse(meta["levels"]))
        n_formulas = int(meta["formulas"])
        n_vocab = int(meta["vocabulary"])
        n_postings = int(meta["postings"])
        bits = int(meta["bits"])
    except (ConfigError, ValueError) as exc:
        raise IndexFormatError(f"{directory}/meta: {exc}") from None
    if bits != layout.width:
        raise IndexFormatError(f"meta: bit width {bits} does not match {meta['config']}/{meta['levels']}")
    if meta["word_bytes"] != str(word_bytes(bits)):
        raise IndexFormatError(f"meta: word_bytes {meta['word_bytes']} does not match bit width {bits}")

    vocab = _read_lines(directory / "vocab")
    ids = _read_lines(directory / "ids")
    if len(vocab) != n_vocab or len(ids) != n_formulas:
        raise IndexFormatError("vocab/ids line counts disagree with meta")
    if vocab != sorted(vocab) or len(set(vocab)) != len(vocab):
        raise IndexFormatError("vocab is not sorted and unique")

    raw_norms = (directory / "norms").read_bytes()
    if len(raw_norms) != 4 * n_formulas:
        raise IndexFormatError(f"norms: expected {4 * n_formulas} bytes, found {len(raw_norms)}")
    norms = np.frombuffer(raw_norms, dtype="<u4").astype(np.uint32)

    data = (directory / "postings").read_bytes()
    idx_stub = InvertedIndex(layout, (), np.zeros(0, np.uint32), {})
    header = _header(idx_stub)
    if not data.startswith(MAGIC.encode()):
        raise IndexFormatError("postings: bad magic")
    if data[: len(header)] != header:
        raise IndexFormatError("postings: header does not match meta config/levels")
    pos = len(header)
    postings = {}
    mask = np.uint64((1 << layout.width) - 1)
    dtype = posting_dtype(layout.width)
    for label in vocab:
        if pos + 8 > len(data):
            raise IndexFormatError("postings: truncated")
        (count,) = struct.unpack_from("<Q", data, pos)
        pos += 8
        end = pos + count * dtype.itemsize
        if end > len(data):
            raise IndexFormatError("postings: truncated")
        rec = np.frombuffer(data, dtype=dtype, count=count, offset=pos)
        pos = end
        refs = rec["ref"].astype(np.uint32)
        words = _unpack_words(rec["word"].reshape(count, -1))
        if count and (refs[-1] >= n_formulas or np.any(np.diff(refs.astype(np.int64)) <= 0)):
            raise IndexFormatError(f"postings for {label!r}: handles out of range or unsorted")
        if np.any(words & ~mask):
            raise IndexFormatError(f"postings for {label!r}: bits beyond width {layout.width}")
        postings[label] = (refs, words)
    if pos != len(data):
        raise IndexFormatError("postings: trailing bytes")

    idx = InvertedIndex(layout, tuple(ids), norms, postings)
    if idx.n_postings != n_postings:
        raise IndexFormatError("postings: count disagrees with meta")
    if not np.array_equal(recompute_norms(idx), norms):
        raise IndexFormatError("norms do not match posting popcounts")
    return idx


def recompute_norms(idx: InvertedIndex) -> np.ndarray:
    norms = np.zeros(len(idx.ids), dtype=np.int64)
    for refs, words in idx.postings.values():
        np.add.at(norms, refs.astype(np.int64), np.bitwise_count(words).astype(np.int64))
    return norms.astype(np.uint32)


@dataclass(frozen=True)
class IndexStats:
    formulas: int
    vocabulary: int
    postings: int
    bit_width: int
    bytes: int

    def summary(self) -> str:
        return (
            f"formulas={self.formulas} vocabulary={self.vocabulary} postings={self.postings} "
            f"bits={self.bit_width} bytes={self.bytes}"
        )


def stats(idx: InvertedIndex, directory: str | Path | None = None) -> IndexStats:
    """Counts for ``idx``; ``bytes`` sums the index files under ``directory`` (0 if not given)."""
    size = 0
    if directory is not None:
        size = sum(os.path.getsize(Path(directory) / name) for name in FILES)
    return IndexStats(len(idx.ids), len(idx.postings), idx.n_postings, idx.bit_width, size)
