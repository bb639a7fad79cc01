import numpy as np
import pytest
from hypothesis import given, strategies as st

from phocsearch.config import RegionDescriptor, RegionKind
from phocsearch.layout import BoundingBox, SymbolPlacement, bounding_box, mirror_layout, synthesize_linear_layout
from phocsearch.regions import locate_points, member, region_intervals, symbol_regions

from conftest import layouts
from region_oracle import near_boundary, oracle_index

X, Y, O, R = RegionKind.X, RegionKind.Y, RegionKind.O, RegionKind.R
NINE = BoundingBox(0, 0, 9, 1)


def test_retrieval_r_level_two():
    f = synthesize_linear_layout(list("retrieval"))
    r = f.symbols[0]
    box = bounding_box(f)
    assert member(r, box, RegionDescriptor(X, 2, 1))
    assert not member(r, box, RegionDescriptor(X, 2, 2))


def test_center_in_innermost_ring():
    sym = SymbolPlacement("c", 4.5, 0.5, 1, 1)
    for kind in (O, R):
        assert [member(sym, NINE, RegionDescriptor(kind, 3, k)) for k in (1, 2, 3)] == [True, False, False]


def test_span_crossing_boundary_hits_both_bands():
    sym = SymbolPlacement("s", 4.5, 0.5, 1, 1)  # spans [4, 5), boundary at 4.5
    assert member(sym, NINE, RegionDescriptor(X, 2, 1))
    assert member(sym, NINE, RegionDescriptor(X, 2, 2))


def test_span_ending_on_boundary_stays_left():
    sym = SymbolPlacement("s", 2.5, 0.5, 1, 1)  # spans [2, 3), boundary at 3
    assert list(symbol_regions(sym, NINE, X, 3)) == [1]
    point = SymbolPlacement("p", 3.0, 0.5, 0, 0)
    assert list(symbol_regions(point, NINE, X, 3)) == [2]


def test_corner_falls_in_outermost_ellipse_ring():
    box = BoundingBox(0, 0, 4, 2)
    corner = SymbolPlacement("c", 4, 2, 0, 0)
    assert [member(corner, box, RegionDescriptor(O, 3, k)) for k in (1, 2, 3)] == [False, False, True]
    # rectangle ring boundary is the box itself: the corner sits in the closed last ring
    assert member(corner, box, RegionDescriptor(R, 3, 3))


def test_level_one_always_member():
    far = SymbolPlacement("z", 100, -100, 0, 0)
    for kind in RegionKind:
        assert member(far, NINE, RegionDescriptor(kind, 1, 1))


def test_intervals():
    assert region_intervals(NINE, X, 3) == [(0, 3), (3, 6), (6, 9)]
    assert region_intervals(NINE, X, 1) == [(0, 9)]
    widths = [b - a for a, b in region_intervals(BoundingBox(0, 0, 1, 1), X, 4)]
    assert widths == [0.25] * 4
    with pytest.raises(ValueError):
        region_intervals(NINE, R, 2)


boxes = st.tuples(
    st.floats(-50, 50), st.floats(-50, 50), st.floats(0.01, 100), st.floats(0.01, 100)
).map(lambda t: BoundingBox(t[0], t[1], t[0] + t[2], t[1] + t[3]))


@given(boxes, st.sampled_from([X, Y]), st.integers(1, 12))
def test_intervals_partition_extent(box, kind, level):
    iv = region_intervals(box, kind, level)
    lo, hi = (box.x0, box.x1) if kind is X else (box.y0, box.y1)
    assert iv[0][0] == lo and iv[-1][1] == hi
    assert all(a < b for a, b in iv)
    assert all(iv[i][1] == iv[i + 1][0] for i in range(len(iv) - 1))


@given(layouts(), st.integers(1, 9))
def test_every_symbol_in_some_region_per_level(f, level):
    box = bounding_box(f)
    for sym in f.symbols:
        for kind in RegionKind:
            hits = list(symbol_regions(sym, box, kind, level))
            assert hits and all(1 <= k <= level for k in hits)
            if kind in (O, R):
                assert len(hits) == 1


@given(layouts(), st.integers(2, 9))
def test_rectangle_ring_nesting(f, level):
    box = bounding_box(f)
    mx, my = box.center
    for sym in f.symbols:
        (k,) = symbol_regions(sym, box, R, level)
        dx, dy = abs(sym.cx - mx), abs(sym.cy - my)
        inside = lambda j: dx < box.width / 2 * j / level and dy < box.height / 2 * j / level
        assert inside(k) or k == level
        assert not inside(k - 1)


@given(layouts(), st.integers(1, 9), st.sampled_from([O, R]))
def test_ring_membership_mirror_invariant(f, level, kind):
    box = bounding_box(f)
    g = mirror_layout(f)
    gbox = bounding_box(g)
    for a, b in zip(f.symbols, g.symbols):
        assert list(symbol_regions(a, box, kind, level)) == list(symbol_regions(b, gbox, kind, level))


def test_locate_points_agrees_with_member(rng):
    box = BoundingBox(-2.0, 1.0, 5.0, 3.5)
    xs = np.array([rng.uniform(box.x0, box.x1) for _ in range(300)])
    ys = np.array([rng.uniform(box.y0, box.y1) for _ in range(300)])
    for kind in RegionKind:
        for level in range(1, 10):
            located = locate_points(xs, ys, box, kind, level)
            for x, y, k in zip(xs, ys, located):
                assert list(symbol_regions(SymbolPlacement("p", x, y), box, kind, level)) == [k]


def test_small_raster_matches_oracle():
    box = BoundingBox(0, 0, 3, 2)
    g = (np.arange(60) + 0.5) / 60
    xs, ys = np.meshgrid(box.x0 + g * box.width, box.y0 + g * box.height)
    for kind in RegionKind:
        for level in range(1, 6):
            expected, counts = oracle_index(xs, ys, box, kind, level)
            assert np.all(counts == 1)
            keep = ~near_boundary(xs, ys, box, kind, level)
            got = locate_points(xs, ys, box, kind, level)
            assert np.array_equal(got[keep], expected[keep])
