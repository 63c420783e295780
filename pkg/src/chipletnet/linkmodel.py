"""D2D link bandwidth from bump-sector geometry.

A link sector of area ``a_b`` packs micro-bumps on a square pitch ``p_b``;
each bump carries one wire.  A fixed number of those wires is reserved for
clock/control/power, the rest move data at the link frequency, one bit per
wire per cycle.  Bandwidth is therefore reported in Gbit/s when the
frequency is in GHz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import LinkInfeasibleError

# Fabrication guidance: D2D links beyond this reach (mm) need retimers or a
# different medium, so flag solutions whose estimated span exceeds it.
MAX_LINK_REACH_MM = 2.0


@dataclass(frozen=True)
class LinkParams:
    """Physical inputs of the per-link wire budget."""

    a_b: float  # bump area available to one link sector, mm^2
    p_b: float = 0.15  # micro-bump pitch, mm
    n_ndw: int = 12  # non-data wires (clock, control, power)
    f_ghz: float = 16.0  # link frequency, GHz

    def validate(self) -> None:
        if self.a_b < 0:
            raise ValueError(f"bump area must be >= 0, got {self.a_b}")
        if self.p_b <= 0:
            raise ValueError(f"bump pitch must be positive, got {self.p_b}")
        if self.n_ndw < 0:
            raise ValueError(f"non-data wire count must be >= 0, got {self.n_ndw}")
        if self.f_ghz <= 0:
            raise ValueError(f"link frequency must be positive, got {self.f_ghz}")


@dataclass(frozen=True)
class LinkBudget:
    """Wire counts and resulting bandwidth of one D2D link."""

    n_w: int  # total wires the sector can fit
    n_dw: int  # data wires after the fixed overhead
    bandwidth_gbps: float


def link_bandwidth(params: LinkParams) -> LinkBudget:
    """Wire budget and bandwidth of one link sector.

    Raises :class:`LinkInfeasibleError` when the sector cannot fit a single
    data wire beyond the fixed overhead.
    """
    params.validate()
    # tiny nudge so exact-integer ratios are not floored by float dust
    n_w = math.floor(params.a_b / (params.p_b * params.p_b) + 1e-9)
    n_dw = n_w - params.n_ndw
    if n_dw <= 0:
        raise LinkInfeasibleError(
            f"sector of {params.a_b:.4g} mm^2 at {params.p_b} mm pitch fits "
            f"{n_w} wires, <= {params.n_ndw} reserved non-data wires"
        )
    return LinkBudget(n_w=n_w, n_dw=n_dw, bandwidth_gbps=n_dw * params.f_ghz)


def full_global_bandwidth(n_chiplets: int, endpoints_per_chiplet: int, link_bw_gbps: float) -> float:
    """Aggregate injection bandwidth if every endpoint drove one link's worth."""
    if n_chiplets < 1 or endpoints_per_chiplet < 1:
        raise ValueError("chiplet and endpoint counts must be >= 1")
    return n_chiplets * endpoints_per_chiplet * link_bw_gbps


def estimate_link_span(d_b: float, placement_gap: float = 0.0) -> float:
    """Wire span between facing PHY sectors of two touching chiplets."""
    if d_b < 0 or placement_gap < 0:
        raise ValueError("distances must be >= 0")
    return 2.0 * d_b + placement_gap


def link_reach_warning(d_b: float, placement_gap: float = 0.0) -> Optional[str]:
    """Human-readable warning when the link span exceeds the reach guidance."""
    span = estimate_link_span(d_b, placement_gap)
    if span > MAX_LINK_REACH_MM:
        return (
            f"estimated link span {span:.3f} mm exceeds the {MAX_LINK_REACH_MM:.1f} mm "
            "reach guidance for package-substrate D2D links"
        )
    return None
