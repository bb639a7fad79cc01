"""Formula layouts to packed per-symbol PHOC words.

Bit ``i`` of a word (value ``1 << i``) corresponds to ``layout.descriptors[i]``.
Repeated occurrences of a label are OR-merged into a single word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from phocsearch.config import BitLayout
from phocsearch.layout import BoundingBox, FormulaLayout, SymbolPlacement, bounding_box
from phocsearch.regions import symbol_regions


@dataclass(frozen=True)
class FormulaPhoc:
    id: str
    words: Mapping[str, int]
    norm: int = field(default=-1)

    def __post_init__(self):
        if self.norm < 0:
            object.__setattr__(self, "norm", sum(w.bit_count() for w in self.words.values()))


def _level_slots(layout: BitLayout):
    """(kind, level, first bit) for every non-shared level, plus the shared-bit position."""
    slots = []
    whole: Optional[int] = None
    for kind, level, positions in layout.groups():
        if kind is None:
            whole = positions.start
        else:
            slots.append((kind, level, positions.start))
    return slots, whole


def encode_symbol(sym: SymbolPlacement, box: BoundingBox, layout: BitLayout) -> int:
    slots, whole = _level_slots(layout)
    return _encode(sym, box, slots, whole)


def _encode(sym, box, slots, whole) -> int:
    word = 0 if whole is None else 1 << whole
    for kind, level, start in slots:
        for k in symbol_regions(sym, box, kind, level):
            word |= 1 << (start + k - 1)
    return word


def encode_formula(f: FormulaLayout, layout: BitLayout) -> FormulaPhoc:
    box = bounding_box(f)
    slots, whole = _level_slots(layout)
    words: dict[str, int] = {}
    for sym in f.symbols:
        words[sym.label] = words.get(sym.label, 0) | _encode(sym, box, slots, whole)
    return FormulaPhoc(f.id, words)


def format_word(word: int, layout: BitLayout, sep: str = " ") -> str:
    """Render a word in descriptor order, one group per level: ``'1 10 110'``."""
    return sep.join(
        "".join("1" if word >> i & 1 else "0" for i in positions)
        for _, _, positions in layout.groups()
    )


def project_word(word: int, source: BitLayout, target: BitLayout) -> int:
    """Keep only the bits of ``source`` whose descriptors also appear in ``target``."""
    pos = {d: i for i, d in enumerate(source.descriptors)}
    out = 0
    for j, d in enumerate(target.descriptors):
        if word >> pos[d] & 1:
            out |= 1 << j
    return out
