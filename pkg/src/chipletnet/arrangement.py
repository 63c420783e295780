"""Chiplet arrangement generators and geometric adjacency extraction.

An arrangement places axis-aligned chiplet rectangles on the package plane.
Three layouts are supported:

* ``grid``      -- rows and columns aligned, interior degree 4.
* ``brickwall`` -- every other row shifted by half a chiplet width,
                   interior degree 6.  A honeycomb layout produces the
                   same adjacency graph, so it is folded into this kind.
* ``hexamesh``  -- hexagon-shaped patch of the brickwall lattice built
                   from a center chiplet plus concentric rings.

The adjacency graph is always derived from the placed rectangles: two
chiplets are neighbors iff their boundaries share a segment longer than
``CONTACT_EPS_MM``.  Corner contact does not count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

from .errors import OverlappingPlacementsError

# Below this length (mm) a shared boundary segment is treated as a corner
# contact; the same tolerance absorbs float rounding in the contact test.
CONTACT_EPS_MM = 1e-6


class ArrangementKind(str, Enum):
    GRID = "grid"
    BRICKWALL = "brickwall"
    HEXAMESH = "hexamesh"

    @classmethod
    def parse(cls, name: str) -> "ArrangementKind":
        key = name.strip().lower()
        if key == "honeycomb":  # same adjacency graph as the brickwall
            return cls.BRICKWALL
        try:
            return cls(key)
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown arrangement kind {name!r} (expected one of: {valid}, honeycomb)") from None


class Regularity(str, Enum):
    REGULAR = "regular"
    SEMI_REGULAR = "semi_regular"
    IRREGULAR = "irregular"


@dataclass(frozen=True)
class ChipletPlacement:
    """One chiplet rectangle: lower-left corner (x, y), size w x h, in mm."""

    id: int
    x: float
    y: float
    w: float
    h: float
    # (row, col) for grid/brickwall, axial (q, r) for hexamesh; not serialized.
    lattice_coord: Optional[tuple[int, int]] = None

    @property
    def x1(self) -> float:
        return self.x + self.w

    @property
    def y1(self) -> float:
        return self.y + self.h


class AdjacencyGraph:
    """Undirected graph on vertices 0..n-1 with a sorted edge list."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = set()
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a}, {b}) out of range for n={n}")
            norm.add((a, b) if a < b else (b, a))
        self.n = n
        self.edges: list[tuple[int, int]] = sorted(norm)
        self._adj: Optional[list[list[int]]] = None

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[int]]:
        if self._adj is None:
            adj: list[list[int]] = [[] for _ in range(self.n)]
            for a, b in self.edges:
                adj[a].append(b)
                adj[b].append(a)
            for lst in adj:
                lst.sort()
            self._adj = adj
        return self._adj

    def neighbors(self, v: int) -> list[int]:
        return self.adjacency()[v]

    def degrees(self) -> list[int]:
        return [len(lst) for lst in self.adjacency()]

    def distances_from(self, src: int) -> list[int]:
        """BFS hop distances from ``src``; unreachable vertices get -1."""
        adj = self.adjacency()
        dist = [-1] * self.n
        dist[src] = 0
        frontier = [src]
        while frontier:
            nxt = []
            for u in frontier:
                du = dist[u] + 1
                for v in adj[u]:
                    if dist[v] < 0:
                        dist[v] = du
                        nxt.append(v)
            frontier = nxt
        return dist

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return min(self.distances_from(0)) >= 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AdjacencyGraph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __repr__(self) -> str:
        return f"AdjacencyGraph(n={self.n}, edges={self.num_edges})"


def adjacency_from_placements(
    placements: Sequence[ChipletPlacement], eps: float = CONTACT_EPS_MM
) -> AdjacencyGraph:
    """Derive the neighbor graph from placed rectangles.

    Vertices are placement ids; an edge appears iff two rectangles share a
    boundary segment longer than ``eps``.  Raises
    :class:`OverlappingPlacementsError` if any two rectangles overlap with
    positive area.
    """
    n = len(placements)
    ids = sorted(p.id for p in placements)
    if ids != list(range(n)):
        raise ValueError("placement ids must be exactly 0..n-1")
    edges = []
    for i in range(n):
        a = placements[i]
        for j in range(i + 1, n):
            b = placements[j]
            # dx < 0: x-ranges overlap by -dx; |dx| <= eps: touching; dx > eps: gap
            dx = max(a.x, b.x) - min(a.x1, b.x1)
            dy = max(a.y, b.y) - min(a.y1, b.y1)
            if dx < -eps and dy < -eps:
                raise OverlappingPlacementsError(
                    f"chiplets {a.id} and {b.id} overlap by {-dx:.3g} x {-dy:.3g} mm"
                )
            if abs(dx) <= eps and dy < -eps:
                edges.append((a.id, b.id))
            elif abs(dy) <= eps and dx < -eps:
                edges.append((a.id, b.id))
    return AdjacencyGraph(n, edges)


def _balanced_factor_pair(n: int) -> Optional[tuple[int, int]]:
    """Factor pair (R, C) with R*C=n, R<=C, C-R<=2, R>=2; None if absent."""
    for r in range(math.isqrt(n), 1, -1):
        if n % r == 0:
            c = n // r
            if c - r <= 2:
                return (r, c)
            return None  # divisors only get more lopsided from here
    return None


def regularity_of(kind: ArrangementKind, n: int) -> Regularity:
    """Classify a chiplet count for the given arrangement kind."""
    if n < 1:
        raise ValueError("chiplet count must be >= 1")
    if kind is ArrangementKind.HEXAMESH:
        return Regularity.REGULAR if _hex_radius(n) is not None else Regularity.IRREGULAR
    s = math.isqrt(n)
    if s * s == n:
        return Regularity.REGULAR
    if _balanced_factor_pair(n) is not None:
        return Regularity.SEMI_REGULAR
    return Regularity.IRREGULAR


def _hex_radius(n: int) -> Optional[int]:
    """Ring count r with n = 1 + 3r(r+1), or None."""
    r = round((math.sqrt(max(12 * n - 3, 0)) / 3 - 1) / 2)
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and 1 + 3 * cand * (cand + 1) == n:
            return cand
    return None


def _row_lengths(n: int) -> tuple[list[int], Regularity]:
    """Row layout for grid/brickwall: list of per-row chiplet counts."""
    s = math.isqrt(n)
    if s * s == n:
        return [s] * s, Regularity.REGULAR
    pair = _balanced_factor_pair(n)
    if pair is not None:
        rows, cols = pair
        return [cols] * rows, Regularity.SEMI_REGULAR
    width = math.isqrt(n - 1) + 1  # ceil(sqrt(n))
    rows = [width] * (n // width)
    if n % width:
        rows.append(n % width)
    return rows, Regularity.IRREGULAR


def _build_rows(
    kind: ArrangementKind, n: int, w: float, h: float
) -> tuple[list[ChipletPlacement], Regularity]:
    rows, reg = _row_lengths(n)
    placements = []
    next_id = 0
    for r, count in enumerate(rows):
        # brickwall: every other row shifts right by half a chiplet width
        shift = w / 2 if (kind is ArrangementKind.BRICKWALL and r % 2 == 1) else 0.0
        for c in range(count):
            placements.append(
                ChipletPlacement(next_id, shift + c * w, r * h, w, h, (r, c))
            )
            next_id += 1
    return placements, reg


# Clockwise ring walk (y up): SW, W, NW, NE, E, SE in axial steps.
_HEX_WALK = ((0, -1), (-1, 0), (-1, 1), (0, 1), (1, 0), (1, -1))


def _hex_ring_cells(ring: int) -> list[tuple[int, int]]:
    """Axial cells of one ring, clockwise from the easternmost cell."""
    if ring == 0:
        return [(0, 0)]
    cells = []
    q, r = ring, 0
    for dq, dr in _HEX_WALK:
        for _ in range(ring):
            cells.append((q, r))
            q, r = q + dq, r + dr
    return cells


def _build_hexamesh(n: int, w: float, h: float) -> tuple[list[ChipletPlacement], Regularity]:
    cells: list[tuple[int, int]] = []
    ring = 0
    while len(cells) < n:
        ring_cells = _hex_ring_cells(ring)
        take = min(len(ring_cells), n - len(cells))
        cells.extend(ring_cells[:take])  # partial ring fills clockwise from east
        ring += 1
    reg = Regularity.REGULAR if _hex_radius(n) is not None else Regularity.IRREGULAR
    # ids run row-major from the bottom-left, matching the other kinds
    cells.sort(key=lambda qr: (qr[1], qr[0]))
    placements = [
        ChipletPlacement(i, (q + r / 2) * w, r * h, w, h, (q, r))
        for i, (q, r) in enumerate(cells)
    ]
    return placements, reg


@dataclass
class Arrangement:
    """A placed chiplet arrangement together with its derived neighbor graph."""

    kind: ArrangementKind
    n: int
    regularity: Regularity
    placements: list[ChipletPlacement]
    graph: AdjacencyGraph = field(repr=False)

    @classmethod
    def build(
        cls,
        kind: ArrangementKind | str,
        n: int,
        chiplet_w: float = 1.0,
        chiplet_h: float = 1.0,
    ) -> "Arrangement":
        if isinstance(kind, str):
            kind = ArrangementKind.parse(kind)
        if n < 1:
            raise ValueError("chiplet count must be >= 1")
        if chiplet_w <= 0 or chiplet_h <= 0:
            raise ValueError("chiplet dimensions must be positive")
        if kind is ArrangementKind.HEXAMESH:
            placements, reg = _build_hexamesh(n, chiplet_w, chiplet_h)
        else:
            placements, reg = _build_rows(kind, n, chiplet_w, chiplet_h)
        graph = adjacency_from_placements(placements)
        return cls(kind, n, reg, placements, graph)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "n": self.n,
            "regularity": self.regularity.value,
            "placements": [
                {
                    "id": p.id,
                    "x": round(p.x, 6),
                    "y": round(p.y, 6),
                    "w": round(p.w, 6),
                    "h": round(p.h, 6),
                }
                for p in self.placements
            ],
            "edges": [[a, b] for a, b in self.graph.edges],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Arrangement":
        kind = ArrangementKind.parse(data["kind"])
        regularity = Regularity(data["regularity"])
        n = int(data["n"])
        placements = [
            ChipletPlacement(int(p["id"]), float(p["x"]), float(p["y"]), float(p["w"]), float(p["h"]))
            for p in data["placements"]
        ]
        if len(placements) != n:
            raise ValueError(f"n={n} but {len(placements)} placements given")
        placements.sort(key=lambda p: p.id)
        graph = AdjacencyGraph(n, [(int(a), int(b)) for a, b in data["edges"]])
        return cls(kind, n, regularity, placements, graph)

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "Arrangement":
        return cls.from_dict(json.loads(text))


def build_arrangement(
    kind: ArrangementKind | str, n: int, chiplet_w: float = 1.0, chiplet_h: float = 1.0
) -> Arrangement:
    """Convenience wrapper around :meth:`Arrangement.build`."""
    return Arrangement.build(kind, n, chiplet_w, chiplet_h)
