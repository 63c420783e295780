import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chipletnet import (
    AdjacencyGraph,
    Arrangement,
    ArrangementKind,
    ChipletPlacement,
    OverlappingPlacementsError,
    Regularity,
    adjacency_from_placements,
    build_arrangement,
    regularity_of,
)

KINDS = list(ArrangementKind)


def build(kind, n, w=2.0, h=1.5):
    return Arrangement.build(kind, n, w, h)


def test_kind_parse_aliases():
    assert ArrangementKind.parse("grid") is ArrangementKind.GRID
    assert ArrangementKind.parse("Brickwall") is ArrangementKind.BRICKWALL
    assert ArrangementKind.parse("HEXAMESH") is ArrangementKind.HEXAMESH
    # honeycomb chiplets tile into the same adjacency structure
    assert ArrangementKind.parse("honeycomb") is ArrangementKind.BRICKWALL
    with pytest.raises(ValueError):
        ArrangementKind.parse("pentagon")


@pytest.mark.parametrize(
    "kind,n,expected",
    [
        (ArrangementKind.GRID, 1, Regularity.REGULAR),
        (ArrangementKind.GRID, 2, Regularity.IRREGULAR),
        (ArrangementKind.GRID, 12, Regularity.SEMI_REGULAR),
        (ArrangementKind.GRID, 16, Regularity.REGULAR),
        (ArrangementKind.GRID, 11, Regularity.IRREGULAR),
        (ArrangementKind.BRICKWALL, 9, Regularity.REGULAR),
        (ArrangementKind.BRICKWALL, 6, Regularity.SEMI_REGULAR),
        (ArrangementKind.BRICKWALL, 7, Regularity.IRREGULAR),
        (ArrangementKind.HEXAMESH, 1, Regularity.REGULAR),
        (ArrangementKind.HEXAMESH, 7, Regularity.REGULAR),
        (ArrangementKind.HEXAMESH, 19, Regularity.REGULAR),
        (ArrangementKind.HEXAMESH, 37, Regularity.REGULAR),
        (ArrangementKind.HEXAMESH, 8, Regularity.IRREGULAR),
        (ArrangementKind.HEXAMESH, 12, Regularity.IRREGULAR),
    ],
)
def test_regularity(kind, n, expected):
    assert regularity_of(kind, n) is expected
    assert build(kind, n).regularity is expected


def test_hexamesh_never_semi_regular():
    for n in range(1, 100):
        assert regularity_of(ArrangementKind.HEXAMESH, n) is not Regularity.SEMI_REGULAR


def test_grid_2x2():
    arr = build(ArrangementKind.GRID, 4)
    assert arr.graph.num_edges == 4
    assert all(len(arr.graph.neighbors(v)) == 2 for v in range(4))


def test_grid_8x8_edges_and_degrees():
    arr = build(ArrangementKind.GRID, 64)
    # 2 * 8 * 7 internal lattice edges
    assert arr.graph.num_edges == 112
    degs = [len(arr.graph.neighbors(v)) for v in range(64)]
    assert min(degs) == 2 and max(degs) == 4


def test_grid_irregular_row_fill():
    arr = build(ArrangementKind.GRID, 11)
    ys = sorted({p.y for p in arr.placements})
    rows = [sum(1 for p in arr.placements if p.y == y) for y in ys]
    assert rows == [4, 4, 3]


def test_brickwall_3x3():
    arr = build(ArrangementKind.BRICKWALL, 9)
    assert arr.graph.num_edges == 16
    degs = [len(arr.graph.neighbors(v)) for v in range(9)]
    assert max(degs) == 6
    # middle-row chiplets touch up to two neighbors per adjacent row
    assert degs[4] == 6


def test_brickwall_offset_alternates():
    arr = build(ArrangementKind.BRICKWALL, 9, w=2.0)
    ys = sorted({p.y for p in arr.placements})
    xs_by_row = [sorted(p.x for p in arr.placements if p.y == y) for y in ys]
    assert xs_by_row[0][0] == 0.0
    assert xs_by_row[1][0] == pytest.approx(1.0)  # w/2
    assert xs_by_row[2][0] == 0.0


def test_hexamesh_7():
    arr = build(ArrangementKind.HEXAMESH, 7)
    assert arr.graph.num_edges == 12
    degs = sorted(len(arr.graph.neighbors(v)) for v in range(7))
    assert degs == [3, 3, 3, 3, 3, 3, 6]


def test_hexamesh_37():
    arr = build(ArrangementKind.HEXAMESH, 37)
    assert arr.graph.num_edges == 90
    degs = [len(arr.graph.neighbors(v)) for v in range(37)]
    assert max(degs) == 6
    # interior = center ring plus first ring
    assert sum(1 for d in degs if d == 6) == 19


def test_hexamesh_ring_counts():
    for r, n in [(0, 1), (1, 7), (2, 19), (3, 37), (4, 61)]:
        arr = build(ArrangementKind.HEXAMESH, n)
        assert arr.n == n == 1 + 3 * r * (r + 1)


def test_hexamesh_partial_ring_grows_clockwise_from_east():
    base = build(ArrangementKind.HEXAMESH, 7)
    arr = build(ArrangementKind.HEXAMESH, 8)
    base_pos = {(round(p.x, 6), round(p.y, 6)) for p in base.placements}
    new = [p for p in arr.placements if (round(p.x, 6), round(p.y, 6)) not in base_pos]
    assert len(new) == 1
    # first ring-2 cell sits due east of the center at lattice distance 2
    center = min(base.placements, key=lambda p: (p.x - 3.0) ** 2 + p.y**2)
    assert new[0].y == pytest.approx(center.y)
    assert new[0].x > center.x


def test_ids_are_row_major_for_all_kinds():
    for kind in KINDS:
        for n in (7, 12, 19, 37):
            arr = build(kind, n)
            order = sorted(arr.placements, key=lambda p: (round(p.y, 9), round(p.x, 9)))
            assert [p.id for p in order] == list(range(n)), (kind, n)


@pytest.mark.parametrize("kind", KINDS)
def test_single_chiplet(kind):
    arr = build(kind, 1)
    assert arr.n == 1
    assert arr.graph.num_edges == 0
    assert arr.placements[0].x == 0.0 and arr.placements[0].y == 0.0


@pytest.mark.parametrize("kind", KINDS)
def test_connected_up_to_60(kind):
    for n in range(1, 61):
        arr = build(kind, n)
        assert arr.graph.is_connected(), (kind, n)
        assert len({p.id for p in arr.placements}) == n


def test_corner_contact_is_not_an_edge():
    # two unit squares touching only at one corner point
    a = ChipletPlacement(0, 0.0, 0.0, 1.0, 1.0)
    b = ChipletPlacement(1, 1.0, 1.0, 1.0, 1.0)
    g = adjacency_from_placements([a, b])
    assert g.num_edges == 0


def test_tiny_shared_segment_below_eps_ignored():
    a = ChipletPlacement(0, 0.0, 0.0, 1.0, 1.0)
    b = ChipletPlacement(1, 1.0, 1.0 - 5e-7, 1.0, 1.0)
    g = adjacency_from_placements([a, b])
    assert g.num_edges == 0


def test_shared_segment_above_eps_is_edge():
    a = ChipletPlacement(0, 0.0, 0.0, 1.0, 1.0)
    b = ChipletPlacement(1, 1.0, 0.5, 1.0, 1.0)
    g = adjacency_from_placements([a, b])
    assert g.edges == [(0, 1)]


def test_overlap_raises():
    a = ChipletPlacement(0, 0.0, 0.0, 1.0, 1.0)
    b = ChipletPlacement(1, 0.5, 0.5, 1.0, 1.0)
    with pytest.raises(OverlappingPlacementsError):
        adjacency_from_placements([a, b])


@settings(max_examples=60, deadline=None)
@given(
    kind=st.sampled_from(KINDS),
    n=st.integers(min_value=1, max_value=80),
    w=st.floats(min_value=0.2, max_value=20.0),
    h=st.floats(min_value=0.2, max_value=20.0),
)
def test_placements_never_overlap(kind, n, w, h):
    arr = Arrangement.build(kind, n, w, h)
    for i, a in enumerate(arr.placements):
        for b in arr.placements[i + 1 :]:
            dx = max(a.x, b.x) - min(a.x + a.w, b.x + b.w)
            dy = max(a.y, b.y) - min(a.y + a.h, b.y + b.h)
            assert dx > -1e-9 or dy > -1e-9


@settings(max_examples=30, deadline=None)
@given(kind=st.sampled_from(KINDS), n=st.integers(min_value=1, max_value=50))
def test_json_round_trip(kind, n):
    arr = Arrangement.build(kind, n, 3.25, 2.5)
    doc = json.loads(arr.to_json())
    back = Arrangement.from_dict(doc)
    assert back.kind is arr.kind
    assert back.n == arr.n
    assert back.regularity is arr.regularity
    assert back.graph == arr.graph
    for p, q in zip(arr.placements, back.placements):
        assert p.id == q.id
        assert math.isclose(p.x, q.x, abs_tol=1e-6)
        assert math.isclose(p.y, q.y, abs_tol=1e-6)


def test_serialized_schema():
    arr = build(ArrangementKind.HEXAMESH, 7)
    doc = arr.to_dict()
    assert set(doc) == {"kind", "n", "regularity", "placements", "edges"}
    assert set(doc["placements"][0]) == {"id", "x", "y", "w", "h"}
    assert all(len(e) == 2 for e in doc["edges"])


def test_from_dict_trusts_stored_edges():
    doc = build(ArrangementKind.GRID, 4).to_dict()
    doc["edges"] = [[0, 1]]
    arr = Arrangement.from_dict(doc)
    assert arr.graph.edges == [(0, 1)]


def test_build_arrangement_wrapper():
    arr = build_arrangement("honeycomb", 9, 2.0, 1.5)
    assert arr.kind is ArrangementKind.BRICKWALL
    assert arr.n == 9


def test_graph_distances():
    arr = build(ArrangementKind.GRID, 9)
    d = arr.graph.distances_from(0)
    assert d[0] == 0 and d[8] == 4


def test_disconnected_graph_detect():
    g = AdjacencyGraph(3, [(0, 1)])
    assert not g.is_connected()
