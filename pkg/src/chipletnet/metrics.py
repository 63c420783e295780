"""Graph metrics for chiplet arrangements.

Two families of numbers live here:

* exact graph measurements (BFS diameter, minimum balanced bisection by
  exhaustive search or by a Kernighan-Lin style heuristic), and
* closed-form proxies for regular arrangements, used to sanity-check the
  measurements and to compare layout families at sizes too large to search.

A balanced bisection splits the vertices into halves whose sizes differ by
at most one; its value is the number of edges crossing the split.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .arrangement import AdjacencyGraph, Arrangement, ArrangementKind, Regularity, regularity_of
from .errors import DisconnectedGraphError, NotRegularError, TooLargeForExactError

# Exhaustive bisection enumerates all balanced splits; beyond this vertex
# count the search space is too large to be worth it.
EXACT_BISECTION_LIMIT = 20


def bfs_diameter(g: AdjacencyGraph) -> int:
    """Largest shortest-path hop count; raises if the graph is disconnected."""
    if g.n == 0:
        raise ValueError("diameter of an empty graph is undefined")
    best = 0
    for v in range(g.n):
        dist = g.distances_from(v)
        far = max(dist)
        if min(dist) < 0:
            raise DisconnectedGraphError(f"vertex {v} cannot reach every vertex")
        best = max(best, far)
    return best


def closed_form_diameter(kind: ArrangementKind, n: int) -> float:
    """Diameter proxy for a regular arrangement of n chiplets.

    Evaluates the closed form at any n (useful for asymptotics); use
    :func:`formula_diameter` when the count should be checked for
    regularity first.
    """
    if n < 1:
        raise ValueError("chiplet count must be >= 1")
    s = math.sqrt(n)
    if kind is ArrangementKind.GRID:
        return 2.0 * s - 2.0
    if kind is ArrangementKind.BRICKWALL:
        return 2.0 * s - 2.0 - math.floor((s - 1.0) / 2.0)
    return math.sqrt(12.0 * n - 3.0) / 3.0 - 0.5


def closed_form_bisection(kind: ArrangementKind, n: int) -> float:
    """Bisection-width proxy for a regular arrangement of n chiplets."""
    if n < 1:
        raise ValueError("chiplet count must be >= 1")
    if kind is ArrangementKind.GRID:
        return math.sqrt(n)
    if kind is ArrangementKind.BRICKWALL:
        return 2.0 * math.sqrt(n) - 1.0
    return 2.0 * math.sqrt(12.0 * n - 3.0) / 3.0


def formula_diameter(kind: ArrangementKind, n: int) -> float:
    """Closed-form diameter, restricted to regular chiplet counts."""
    if regularity_of(kind, n) is not Regularity.REGULAR:
        raise NotRegularError(f"{kind.value} with n={n} is not regular")
    return closed_form_diameter(kind, n)


def formula_bisection(kind: ArrangementKind, n: int) -> float:
    """Closed-form bisection width, restricted to regular chiplet counts."""
    if regularity_of(kind, n) is not Regularity.REGULAR:
        raise NotRegularError(f"{kind.value} with n={n} is not regular")
    return closed_form_bisection(kind, n)


def asymptotic_ratios() -> dict[str, float]:
    """Large-n limits of the closed-form proxies relative to the grid."""
    return {
        "diameter_brickwall_vs_grid": 3.0 / 4.0,
        "diameter_hexamesh_vs_grid": 1.0 / math.sqrt(3.0),
        "bisection_brickwall_vs_grid": 2.0,
        "bisection_hexamesh_vs_grid": 4.0 / math.sqrt(3.0),
    }


def _balanced_side_size(n: int) -> int:
    return n // 2


def exhaustive_bisection(g: AdjacencyGraph, limit: int = EXACT_BISECTION_LIMIT) -> int:
    """Minimum balanced cut by enumerating every balanced split.

    Only feasible for small graphs; raises :class:`TooLargeForExactError`
    above ``limit`` vertices.
    """
    n = g.n
    if n > limit:
        raise TooLargeForExactError(f"exhaustive bisection limited to n <= {limit}, got {n}")
    if n < 2:
        return 0
    k = _balanced_side_size(n)
    nbmask = [0] * n
    for a, b in g.edges:
        nbmask[a] |= 1 << b
        nbmask[b] |= 1 << a
    full = (1 << n) - 1
    best = len(g.edges) + 1
    if n % 2 == 0:
        # fix vertex 0 on one side so each split is visited once
        pools = (combo + (0,) for combo in combinations(range(1, n), k - 1))
    else:
        # sides differ in size, so enumerating the small side is enough
        pools = combinations(range(n), k)
    for side in pools:
        mask = 0
        for v in side:
            mask |= 1 << v
        rest = full ^ mask
        cut = 0
        for v in side:
            cut += (nbmask[v] & rest).bit_count()
            if cut >= best:
                break
        if cut < best:
            best = cut
    return best


def _kl_refine(adj: np.ndarray, mask: np.ndarray, cut: int) -> tuple[np.ndarray, int]:
    """One round of pairwise-swap refinement; returns improved (mask, cut)."""
    n = adj.shape[0]
    while True:
        side = np.where(mask, 1.0, -1.0)
        # D[v] = external - internal edge count for v
        d_val = -side * (adj @ side)
        locked = np.zeros(n, dtype=bool)
        swaps: list[tuple[int, int]] = []
        gains: list[float] = []
        pair_count = min(int(mask.sum()), int((~mask).sum()))
        for _ in range(pair_count):
            a_idx = np.where(mask & ~locked)[0]
            b_idx = np.where(~mask & ~locked)[0]
            gain_mat = d_val[a_idx][:, None] + d_val[b_idx][None, :] - 2.0 * adj[np.ix_(a_idx, b_idx)]
            flat = int(np.argmax(gain_mat))
            a = int(a_idx[flat // len(b_idx)])
            b = int(b_idx[flat % len(b_idx)])
            gains.append(float(gain_mat.flat[flat]))
            swaps.append((a, b))
            locked[a] = locked[b] = True
            d_val += 2.0 * adj[:, a] - 2.0 * adj[:, b]
            d_val[~mask] -= 4.0 * adj[:, a][~mask] - 4.0 * adj[:, b][~mask]
        prefix = np.cumsum(gains)
        m = int(np.argmax(prefix))
        if prefix[m] <= 1e-9:
            return mask, cut
        for a, b in swaps[: m + 1]:
            mask[a] = False
            mask[b] = True
        cut -= int(round(prefix[m]))


def _cut_value(edges: list[tuple[int, int]], mask: np.ndarray) -> int:
    return sum(1 for a, b in edges if mask[a] != mask[b])


def heuristic_bisection(g: AdjacencyGraph, restarts: int = 32, seed: int = 0) -> int:
    """Balanced min-cut via pairwise-swap refinement with random restarts.

    Restart streams are nested: the first ``r`` starting partitions are the
    same for every run with the same seed, so raising ``restarts`` can only
    improve (never worsen) the result.
    """
    n = g.n
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if n < 2:
        return 0
    k = _balanced_side_size(n)
    adj = np.zeros((n, n), dtype=np.float64)
    for a, b in g.edges:
        adj[a, b] = 1.0
        adj[b, a] = 1.0
    rng = random.Random(seed)
    best = len(g.edges) + 1
    for _ in range(restarts):
        side = rng.sample(range(n), k)
        mask = np.zeros(n, dtype=bool)
        mask[side] = True
        cut = _cut_value(g.edges, mask)
        _, cut = _kl_refine(adj, mask, cut)
        best = min(best, cut)
    return best


@dataclass(frozen=True)
class DegreeStats:
    min: int
    max: int
    avg: float


def degree_stats(g: AdjacencyGraph) -> DegreeStats:
    if g.n == 0:
        raise ValueError("degree stats of an empty graph are undefined")
    degs = g.degrees()
    return DegreeStats(min(degs), max(degs), 2.0 * g.num_edges / g.n)


@dataclass
class MetricsReport:
    """Bundle of graph metrics for one arrangement."""

    kind: str
    n: int
    regularity: str
    num_edges: int
    degree: DegreeStats
    diameter_bfs: int
    bisection_heuristic: int
    diameter_formula: Optional[float] = None
    bisection_formula: Optional[float] = None
    bisection_exact: Optional[int] = None

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "n": self.n,
            "regularity": self.regularity,
            "num_edges": self.num_edges,
            "degree_min": self.degree.min,
            "degree_max": self.degree.max,
            "degree_avg": self.degree.avg,
            "diameter_bfs": self.diameter_bfs,
            "bisection_heuristic": self.bisection_heuristic,
        }
        if self.diameter_formula is not None:
            out["diameter_formula"] = self.diameter_formula
        if self.bisection_formula is not None:
            out["bisection_formula"] = self.bisection_formula
        if self.bisection_exact is not None:
            out["bisection_exact"] = self.bisection_exact
        return out


def metrics_report(
    arr: Arrangement,
    restarts: int = 32,
    seed: int = 0,
    exact_limit: int = EXACT_BISECTION_LIMIT,
) -> MetricsReport:
    """Measure one arrangement; closed forms included when n is regular."""
    regular = arr.regularity is Regularity.REGULAR
    report = MetricsReport(
        kind=arr.kind.value,
        n=arr.n,
        regularity=arr.regularity.value,
        num_edges=arr.graph.num_edges,
        degree=degree_stats(arr.graph),
        diameter_bfs=bfs_diameter(arr.graph),
        bisection_heuristic=heuristic_bisection(arr.graph, restarts=restarts, seed=seed),
        diameter_formula=closed_form_diameter(arr.kind, arr.n) if regular else None,
        bisection_formula=closed_form_bisection(arr.kind, arr.n) if regular else None,
    )
    if arr.n <= exact_limit:
        report.bisection_exact = exhaustive_bisection(arr.graph, limit=exact_limit)
    return report
