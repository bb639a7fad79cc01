"""PHOC configuration strings, level selection and per-symbol bit layouts.

A configuration string is a sequence of letter runs, each followed by the
maximum level for every kind in the run: ``xy5`` expands X and Y to level 5,
``x2r7`` expands X to level 2 and R to level 7.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Optional

from phocsearch.errors import CapacityError, ConfigError

MAX_BITS = 64


class RegionKind(enum.Enum):
    X = "x"  # vertical split lines: left-to-right bands
    Y = "y"  # horizontal split lines: top-to-bottom bands
    O = "o"  # concentric ellipses
    R = "r"  # concentric rectangles

    @property
    def order(self) -> int:
        return _KIND_ORDER[self]


_KIND_ORDER = {k: i for i, k in enumerate(RegionKind)}


class LevelSelection(enum.Enum):
    FULL = "full"
    ODD = "odd"
    LAST = "last"

    @classmethod
    def parse(cls, text: "str | LevelSelection") -> "LevelSelection":
        if isinstance(text, cls):
            return text
        try:
            return cls(text.lower())
        except ValueError:
            raise ConfigError(f"unknown level selection {text!r} (expected full, odd or last)") from None


@dataclass(frozen=True)
class PhocConfig:
    """Region kinds with their maximum levels, kept in canonical X, Y, O, R order."""

    entries: tuple[tuple[RegionKind, int], ...]

    def __post_init__(self):
        entries = tuple(sorted(self.entries, key=lambda e: e[0].order))
        kinds = [k for k, _ in entries]
        if not entries:
            raise ConfigError("configuration has no region kinds")
        if len(set(kinds)) != len(kinds):
            raise ConfigError("configuration repeats a region kind")
        for kind, level in entries:
            if not isinstance(level, int) or level < 1:
                raise ConfigError(f"level for {kind.value} must be an integer >= 1, got {level!r}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, **levels: int) -> "PhocConfig":
        """``PhocConfig.of(y=7, r=7)``"""
        return cls(tuple((RegionKind(k.lower()), v) for k, v in levels.items()))

    def as_dict(self) -> dict[RegionKind, int]:
        return dict(self.entries)

    def __str__(self) -> str:
        return config_to_string(self)


_TOKEN = re.compile(r"([A-Za-z]+)(\d*)")


def parse_config(text: str) -> PhocConfig:
    if not text:
        raise ConfigError("empty configuration string")
    entries: list[tuple[RegionKind, int]] = []
    seen: set[RegionKind] = set()
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ConfigError(f"{text!r}: expected region letters at position {pos}")
        letters, digits = m.groups()
        if not digits:
            raise ConfigError(f"{text!r}: missing level after {letters!r} at position {m.end()}")
        level = int(digits)
        if level < 1:
            raise ConfigError(f"{text!r}: level must be >= 1 at position {m.start(2)}")
        for offset, ch in enumerate(letters):
            try:
                kind = RegionKind(ch.lower())
            except ValueError:
                raise ConfigError(
                    f"{text!r}: unknown region kind {ch!r} at position {pos + offset}"
                ) from None
            if kind in seen:
                raise ConfigError(f"{text!r}: region kind {ch!r} repeated at position {pos + offset}")
            seen.add(kind)
            entries.append((kind, level))
        pos = m.end()
    return PhocConfig(tuple(entries))


def config_to_string(cfg: PhocConfig) -> str:
    parts = []
    for level, group in itertools.groupby(cfg.entries, key=lambda e: e[1]):
        parts.append("".join(k.value for k, _ in group) + str(level))
    return "".join(parts)


def select_levels(max_level: int, sel: LevelSelection) -> list[int]:
    if max_level < 1:
        raise ConfigError("max level must be >= 1")
    sel = LevelSelection.parse(sel)
    if sel is LevelSelection.FULL:
        return list(range(1, max_level + 1))
    if sel is LevelSelection.ODD:
        return list(range(1, max_level + 1, 2))
    return [max_level]


@dataclass(frozen=True)
class RegionDescriptor:
    """Region ``index`` (1-based) of ``level`` for ``kind``.

    ``kind`` is None only for the shared whole-formula bit: every level-1
    region covers the entire bounding box regardless of kind.
    """

    kind: Optional[RegionKind]
    level: int
    index: int

    def __post_init__(self):
        if self.level < 1 or not 1 <= self.index <= self.level:
            raise ValueError(f"invalid region descriptor {self}")
        if self.kind is None and self.level != 1:
            raise ValueError("only the whole-formula descriptor may omit its kind")

    def __str__(self) -> str:
        name = "*" if self.kind is None else self.kind.value
        return f"{name}{self.level}.{self.index}"


WHOLE = RegionDescriptor(None, 1, 1)


@dataclass(frozen=True)
class BitLayout:
    config: PhocConfig
    selection: LevelSelection
    descriptors: tuple[RegionDescriptor, ...]

    @property
    def width(self) -> int:
        return len(self.descriptors)

    @property
    def config_string(self) -> str:
        return config_to_string(self.config)

    def groups(self) -> list[tuple[Optional[RegionKind], int, range]]:
        """Consecutive descriptor positions per (kind, level), in bit order."""
        out = []
        for (kind, level), grp in itertools.groupby(
            enumerate(self.descriptors), key=lambda e: (e[1].kind, e[1].level)
        ):
            pos = [i for i, _ in grp]
            out.append((kind, level, range(pos[0], pos[-1] + 1)))
        return out


def _descriptors(cfg: PhocConfig, sel: LevelSelection) -> list[RegionDescriptor]:
    descs: list[RegionDescriptor] = []
    whole = False
    for kind, max_level in cfg.entries:
        for level in select_levels(max_level, sel):
            if level == 1:
                whole = True
                continue
            descs.extend(RegionDescriptor(kind, level, i) for i in range(1, level + 1))
    return [WHOLE] * whole + descs


def layout_width(cfg: PhocConfig, sel: LevelSelection = LevelSelection.FULL) -> int:
    return len(_descriptors(cfg, LevelSelection.parse(sel)))


def bit_layout(cfg: PhocConfig | str, sel: LevelSelection | str = LevelSelection.FULL) -> BitLayout:
    if isinstance(cfg, str):
        cfg = parse_config(cfg)
    sel = LevelSelection.parse(sel)
    descs = _descriptors(cfg, sel)
    if len(descs) > MAX_BITS:
        raise CapacityError(
            f"{config_to_string(cfg)}/{sel.value} needs {len(descs)} bits per symbol; "
            f"the limit is {MAX_BITS}"
        )
    return BitLayout(cfg, sel, tuple(descs))


def enumerate_configs(
    max_level_bound: int,
    odd_max_only: bool = True,
    bit_bound: int = MAX_BITS,
    kinds: Iterable[RegionKind] = tuple(RegionKind),
    exclude_level_one: bool = False,
) -> list[PhocConfig]:
    """All configurations over non-empty subsets of ``kinds`` that fit ``bit_bound``.

    ``exclude_level_one`` drops configurations where some kind stops at level 1;
    such a kind only contributes the shared whole-formula bit. Sorted by
    configuration string.
    """
    if max_level_bound < 1:
        raise ConfigError("max level bound must be >= 1")
    levels = [l for l in range(1, max_level_bound + 1) if l % 2 or not odd_max_only]
    if exclude_level_one:
        levels = [l for l in levels if l > 1]
    kinds = sorted(set(kinds), key=lambda k: k.order)
    found = []
    for choice in itertools.product([0] + levels, repeat=len(kinds)):
        entries = tuple((k, l) for k, l in zip(kinds, choice) if l)
        if not entries:
            continue
        cfg = PhocConfig(entries)
        if layout_width(cfg) <= bit_bound:
            found.append(cfg)
    return sorted(found, key=config_to_string)
