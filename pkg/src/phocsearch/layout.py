"""Formula geometry: labeled symbol boxes, corpus files, synthetic layouts.

Corpus and topic files hold one JSON object per line::

    {"id": "f1", "symbols": [{"label": "x", "cx": 0.5, "cy": 0.5, "w": 1, "h": 1}]}

Topic files may use ``qid`` instead of ``id``.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from phocsearch.errors import CorpusFormatError


@dataclass(frozen=True)
class SymbolPlacement:
    label: str
    cx: float
    cy: float
    w: float = 0.0
    h: float = 0.0

    def __post_init__(self):
        if not isinstance(self.label, str) or not self.label:
            raise ValueError("symbol label must be a non-empty string")
        for name in ("cx", "cy", "w", "h"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"symbol {self.label!r}: {name} is not finite")
        if self.w < 0 or self.h < 0:
            raise ValueError(f"symbol {self.label!r}: negative width or height")


@dataclass(frozen=True)
class FormulaLayout:
    id: str
    symbols: tuple[SymbolPlacement, ...]

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValueError("formula id must be a non-empty string")
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if not self.symbols:
            raise ValueError(f"formula {self.id!r} has no symbols")

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self.symbols]


@dataclass(frozen=True)
class BoundingBox:
    x0: float
    y0: float
    x1: float
    y1: float

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def center(self) -> tuple[float, float]:
        return (self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2


def bounding_box(f: FormulaLayout) -> BoundingBox:
    """Tight hull of all symbol extents.

    A dimension with zero extent is widened symmetrically to one unit so that
    region fractions stay defined.
    """
    x0 = min(s.cx - s.w / 2 for s in f.symbols)
    x1 = max(s.cx + s.w / 2 for s in f.symbols)
    y0 = min(s.cy - s.h / 2 for s in f.symbols)
    y1 = max(s.cy + s.h / 2 for s in f.symbols)
    if not x1 > x0:
        mid = (x0 + x1) / 2
        x0, x1 = mid - 0.5, mid + 0.5
    if not y1 > y0:
        mid = (y0 + y1) / 2
        y0, y1 = mid - 0.5, mid + 0.5
    return BoundingBox(x0, y0, x1, y1)


def synthesize_linear_layout(tokens: Sequence[str], id: str = "linear") -> FormulaLayout:
    """Place token i in the unit cell [i, i+1) x [0, 1), like characters of a word."""
    if not tokens:
        raise ValueError("cannot lay out an empty token sequence")
    return FormulaLayout(
        id, tuple(SymbolPlacement(t, i + 0.5, 0.5, 1.0, 1.0) for i, t in enumerate(tokens))
    )


def mirror_layout(f: FormulaLayout) -> FormulaLayout:
    """Reflect symbol centers about the vertical midline of the bounding box."""
    box = bounding_box(f)
    axis = box.x0 + box.x1
    return FormulaLayout(
        f.id,
        tuple(SymbolPlacement(s.label, axis - s.cx, s.cy, s.w, s.h) for s in f.symbols),
    )


def random_layout(
    rng: random.Random,
    vocabulary: Sequence[str],
    n_symbols: int | tuple[int, int] = (1, 8),
    id: str = "r",
    extent: tuple[float, float] = (12.0, 4.0),
    zero_size_rate: float = 0.1,
) -> FormulaLayout:
    """Draw a random formula layout; deterministic for a seeded ``rng``.

    Coordinates are snapped to a 1/8 grid so exact boundary hits occur often
    enough to exercise tie-breaking.
    """
    if isinstance(n_symbols, tuple):
        n_symbols = rng.randint(*n_symbols)
    symbols = []
    for _ in range(n_symbols):
        label = rng.choice(vocabulary)
        cx = round(rng.uniform(0, extent[0]) * 8) / 8
        cy = round(rng.uniform(0, extent[1]) * 8) / 8
        if rng.random() < zero_size_rate:
            w = h = 0.0
        else:
            w = rng.choice((0.25, 0.5, 0.75, 1.0, 1.5))
            h = rng.choice((0.5, 1.0, 1.25))
        symbols.append(SymbolPlacement(label, cx, cy, w, h))
    return FormulaLayout(id, tuple(symbols))


def random_corpus(
    seed: int, size: int, vocabulary: Sequence[str], prefix: str = "f", **kwargs
) -> list[FormulaLayout]:
    rng = random.Random(seed)
    width = len(str(max(size - 1, 0)))
    return [
        random_layout(rng, vocabulary, id=f"{prefix}{i:0{width}d}", **kwargs) for i in range(size)
    ]


def _parse_record(line: str, lineno: int, id_keys: tuple[str, ...]) -> FormulaLayout:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"line {lineno}: invalid JSON ({exc.msg})") from None
    if not isinstance(rec, dict):
        raise CorpusFormatError(f"line {lineno}: expected an object")
    fid = next((rec[k] for k in id_keys if k in rec), None)
    if not isinstance(fid, str) or not fid:
        raise CorpusFormatError(f"line {lineno}: missing or empty {'/'.join(id_keys)}")
    raw = rec.get("symbols")
    if not isinstance(raw, list) or not raw:
        raise CorpusFormatError(f"line {lineno}: 'symbols' must be a non-empty array")
    symbols = []
    for j, s in enumerate(raw):
        try:
            vals = [s[k] for k in ("cx", "cy", "w", "h")]
            if not isinstance(s["label"], str) or any(
                isinstance(v, bool) or not isinstance(v, (int, float)) for v in vals
            ):
                raise TypeError
            symbols.append(SymbolPlacement(s["label"], *map(float, vals)))
        except (KeyError, TypeError):
            raise CorpusFormatError(
                f"line {lineno}: symbol {j} needs string 'label' and numeric cx, cy, w, h"
            ) from None
        except ValueError as exc:
            raise CorpusFormatError(f"line {lineno}: {exc}") from None
    return FormulaLayout(fid, tuple(symbols))


def _load(path, id_keys) -> list[FormulaLayout]:
    layouts = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            f = _parse_record(line, lineno, id_keys)
            if f.id in seen:
                raise CorpusFormatError(f"line {lineno}: duplicate id {f.id!r}")
            seen.add(f.id)
            layouts.append(f)
    return layouts


def load_corpus(path: str | Path) -> list[FormulaLayout]:
    return _load(path, ("id",))


def load_topics(path: str | Path) -> list[FormulaLayout]:
    """Like :func:`load_corpus`, but each record may name itself with ``qid``."""
    return _load(path, ("qid", "id"))


def layout_to_record(f: FormulaLayout, id_key: str = "id") -> dict:
    return {
        id_key: f.id,
        "symbols": [
            {"label": s.label, "cx": s.cx, "cy": s.cy, "w": s.w, "h": s.h} for s in f.symbols
        ],
    }


def write_corpus(layouts: Iterable[FormulaLayout], path: str | Path, id_key: str = "id") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for f in layouts:
            fh.write(json.dumps(layout_to_record(f, id_key), ensure_ascii=False) + "\n")
