"""Region geometry and symbol membership for the four region kinds.

All regions are defined relative to a formula's bounding box. At level ``l``:

* X / Y: ``l`` equal half-open bands ``[lo, hi)`` along x / y, the last one
  closed at the box edge. A symbol belongs to every band its span overlaps.
* R: ``l`` disjoint rectangular rings around the box center. Ring ``k`` holds
  centroids inside the box scaled by ``k/l`` and outside the box scaled by
  ``(k-1)/l``.
* O: same with ellipses whose outermost boundary circumscribes the box
  (semi-axes scaled by sqrt(2)); a centroid past it falls in the last ring.

Ring boundaries are inner-inclusive, outer-exclusive.
"""

from __future__ import annotations

import math

import numpy as np

from phocsearch.config import RegionDescriptor, RegionKind
from phocsearch.layout import BoundingBox, SymbolPlacement

SQRT2 = math.sqrt(2.0)


def region_edges(lo: float, hi: float, level: int) -> list[float]:
    if level < 1:
        raise ValueError("level must be >= 1")
    span = hi - lo
    return [lo + span * j / level for j in range(level)] + [hi]


def region_intervals(box: BoundingBox, kind: RegionKind, level: int) -> list[tuple[float, float]]:
    """Bands of an X or Y level in ascending order; the last one includes its upper end."""
    if kind is RegionKind.X:
        edges = region_edges(box.x0, box.x1, level)
    elif kind is RegionKind.Y:
        edges = region_edges(box.y0, box.y1, level)
    else:
        raise ValueError(f"{kind} regions are rings, not intervals")
    return list(zip(edges[:-1], edges[1:]))


def _span_bands(center: float, size: float, edges: list[float]) -> range:
    """Indices (1-based) of the bands overlapped by ``[center - size/2, center + size/2)``."""
    level = len(edges) - 1
    a = center - size / 2
    b = center + size / 2
    # first band whose upper edge lies past a (last band closed on the right)
    first = 1
    while first < level and edges[first] <= a:
        first += 1
    if size == 0:
        return range(first, first + 1)
    # last band whose lower edge lies strictly before b
    last = level
    while last > 1 and edges[last - 1] >= b:
        last -= 1
    return range(first, max(first, last) + 1)


def normalized_radius(kind: RegionKind, cx: float, cy: float, box: BoundingBox) -> float:
    """Distance of a point from the box center in units of the outermost ring boundary."""
    mx, my = box.center
    hw, hh = box.width / 2, box.height / 2
    dx, dy = abs(cx - mx) / hw, abs(cy - my) / hh
    if kind is RegionKind.R:
        return max(dx, dy)
    if kind is RegionKind.O:
        return math.hypot(dx, dy) / SQRT2
    raise ValueError(f"{kind} regions are bands, not rings")


def _ring_of(rho: float, level: int) -> int:
    k = min(int(rho * level) + 1, level)
    # settle float rounding of rho * level against the k/l thresholds
    while k > 1 and rho < (k - 1) / level:
        k -= 1
    while k < level and rho >= k / level:
        k += 1
    return k


def ring_index(sym: SymbolPlacement, box: BoundingBox, kind: RegionKind, level: int) -> int:
    return _ring_of(normalized_radius(kind, sym.cx, sym.cy, box), level)


def symbol_regions(sym: SymbolPlacement, box: BoundingBox, kind: RegionKind, level: int) -> range:
    """All region indices at ``level`` of ``kind`` that contain ``sym``."""
    if level == 1:
        return range(1, 2)
    if kind is RegionKind.X:
        return _span_bands(sym.cx, sym.w, region_edges(box.x0, box.x1, level))
    if kind is RegionKind.Y:
        return _span_bands(sym.cy, sym.h, region_edges(box.y0, box.y1, level))
    k = ring_index(sym, box, kind, level)
    return range(k, k + 1)


def member(sym: SymbolPlacement, box: BoundingBox, d: RegionDescriptor) -> bool:
    if d.level == 1:
        return True
    return d.index in symbol_regions(sym, box, d.kind, d.level)


def locate_points(
    xs: np.ndarray, ys: np.ndarray, box: BoundingBox, kind: RegionKind, level: int
) -> np.ndarray:
    """Vectorized region index (1-based) of zero-size points at one level."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if kind in (RegionKind.X, RegionKind.Y):
        coord, lo, hi = (xs, box.x0, box.x1) if kind is RegionKind.X else (ys, box.y0, box.y1)
        edges = np.asarray(region_edges(lo, hi, level))
        return np.clip(np.searchsorted(edges, coord, side="right"), 1, level)
    mx, my = box.center
    dx = np.abs(xs - mx) / (box.width / 2)
    dy = np.abs(ys - my) / (box.height / 2)
    rho = np.maximum(dx, dy) if kind is RegionKind.R else np.hypot(dx, dy) / SQRT2
    return np.minimum(np.floor(rho * level).astype(np.int64) + 1, level)
