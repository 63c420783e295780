"""Chiplet shape solving: PHY placement, bump sectors, and D2D spacing.

Every chiplet reserves a centered power-delivery region (a ``p_p`` fraction
of its C4 bump field) and splits the remaining bump area evenly among its
D2D link sectors: 4 sectors for the grid, 6 for brickwall-family layouts.

Grid chiplets are square.  Brickwall and hexamesh chiplets solve a small
system tying the chiplet outline to its link geometry:

* chiplet height = twice the neighbor spacing plus the diagonal link span,
* chiplet width  = twice the diagonal link span,
* power region width = chiplet width minus twice the neighbor spacing,
* outline area fixed to the per-chiplet budget,
* power region area fixed to the ``p_p`` fraction of that budget.

All lengths are mm, areas mm^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .arrangement import ArrangementKind
from .errors import NoLinkAreaError


@dataclass(frozen=True)
class ShapeSolution:
    """Solved chiplet outline and bump-sector geometry for one layout kind.

    ``w_p``/``h_p`` describe the power region: grid chiplets have a square
    one (``h_p`` set), brickwall-family chiplets a ``w_p`` x ``l_b`` one
    where ``l_b`` is the diagonal link span (``h_p`` is None, ``l_b`` set).
    """

    kind: ArrangementKind
    a_c: float  # chiplet area budget
    p_p: float  # power-bump fraction
    w_c: float  # chiplet width
    h_c: float  # chiplet height
    w_p: float  # power region width
    d_b: float  # spacing between neighboring PHY sectors / chiplet border
    a_b: float  # bump area per link sector
    h_p: Optional[float] = None
    l_b: Optional[float] = None

    @property
    def link_sectors(self) -> int:
        return 4 if self.kind is ArrangementKind.GRID else 6

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind.value,
            "A_C_mm2": self.a_c,
            "p_p": self.p_p,
            "W_C_mm": self.w_c,
            "H_C_mm": self.h_c,
            "W_P_mm": self.w_p,
            "D_B_mm": self.d_b,
            "A_B_mm2": self.a_b,
        }
        if self.h_p is not None:
            out["H_P_mm"] = self.h_p
        if self.l_b is not None:
            out["L_B_mm"] = self.l_b
        return out


def _validate(a_c: float, p_p: float) -> None:
    if a_c <= 0:
        raise ValueError(f"chiplet area must be positive, got {a_c}")
    if p_p < 0:
        raise ValueError(f"power-bump fraction must be >= 0, got {p_p}")
    if p_p >= 1:
        raise NoLinkAreaError(f"power-bump fraction {p_p} leaves no bump area for links")


def solve_shape_grid(a_c: float, p_p: float) -> ShapeSolution:
    """Square chiplet with a centered square power region and 4 link sectors."""
    _validate(a_c, p_p)
    w_c = math.sqrt(a_c)
    w_p = math.sqrt(p_p * a_c)
    return ShapeSolution(
        kind=ArrangementKind.GRID,
        a_c=a_c,
        p_p=p_p,
        w_c=w_c,
        h_c=w_c,
        w_p=w_p,
        h_p=w_p,
        d_b=(w_c - w_p) / 2.0,
        a_b=(1.0 - p_p) * a_c / 4.0,
    )


def solve_shape_brick(a_c: float, p_p: float, kind: ArrangementKind = ArrangementKind.BRICKWALL) -> ShapeSolution:
    """Rectangular chiplet shared by brickwall and hexamesh layouts (6 sectors)."""
    _validate(a_c, p_p)
    w_c = math.sqrt(a_c * (2.0 + 4.0 * p_p) / 3.0)
    h_c = a_c / w_c
    d_b = (1.0 - p_p) * a_c / math.sqrt(a_c * (6.0 + 12.0 * p_p))
    l_b = w_c / 2.0
    # p_p -> 0 collapses the power region; the subtraction can round to -eps
    return ShapeSolution(
        kind=kind,
        a_c=a_c,
        p_p=p_p,
        w_c=w_c,
        h_c=h_c,
        w_p=max(0.0, w_c - 2.0 * d_b),
        d_b=d_b,
        a_b=(1.0 - p_p) * a_c / 6.0,
        l_b=l_b,
    )


def shape_for(kind: ArrangementKind, a_c: float, p_p: float) -> ShapeSolution:
    """Solve the chiplet shape appropriate for the arrangement kind."""
    if kind is ArrangementKind.GRID:
        return solve_shape_grid(a_c, p_p)
    return solve_shape_brick(a_c, p_p, kind)


def chiplet_area(a_all: float, n: int) -> float:
    """Per-chiplet share of the total silicon budget."""
    if a_all <= 0:
        raise ValueError(f"total area must be positive, got {a_all}")
    if n < 1:
        raise ValueError(f"chiplet count must be >= 1, got {n}")
    return a_all / n


def shape_residuals(sol: ShapeSolution) -> list[float]:
    """Relative residuals of the defining equations (all ~0 for a solution).

    Grid solutions check the outline, power-region, and sector-area
    identities; brick solutions check the five-equation system.
    """
    if sol.kind is ArrangementKind.GRID:
        assert sol.h_p is not None
        return [
            rel(sol.w_c * sol.h_c, sol.a_c),
            rel(sol.w_p * sol.h_p, sol.p_p * sol.a_c) if sol.p_p > 0 else sol.w_p,
            rel(4.0 * sol.a_b, (1.0 - sol.p_p) * sol.a_c),
            rel(sol.w_p + 2.0 * sol.d_b, sol.w_c),
        ]
    assert sol.l_b is not None
    return [
        rel(sol.h_c, 2.0 * sol.d_b + sol.l_b),
        rel(sol.w_c, 2.0 * sol.l_b),
        rel(sol.w_p, sol.w_c - 2.0 * sol.d_b),
        rel(sol.h_c * sol.w_c, sol.a_c),
        rel(sol.w_p * sol.l_b, sol.p_p * sol.a_c) if sol.p_p > 0 else rel(sol.w_p * sol.l_b + sol.a_c, sol.a_c),
    ]


def rel(value: float, target: float) -> float:
    """Relative error of ``value`` against a reference ``target``."""
    scale = max(abs(target), 1e-300)
    return abs(value - target) / scale
