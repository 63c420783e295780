import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chipletnet import (
    MAX_LINK_REACH_MM,
    LinkInfeasibleError,
    LinkParams,
    estimate_link_span,
    full_global_bandwidth,
    link_bandwidth,
    link_reach_warning,
    solve_shape_brick,
    solve_shape_grid,
)


def test_brick_sector_budget():
    s = solve_shape_brick(16.0, 0.4)
    b = link_bandwidth(LinkParams(a_b=s.a_b))
    assert b.n_w == 71
    assert b.n_dw == 59
    assert b.bandwidth_gbps == pytest.approx(944.0)


def test_grid_sector_budget():
    s = solve_shape_grid(16.0, 0.4)
    b = link_bandwidth(LinkParams(a_b=s.a_b))
    assert b.n_w == 106
    assert b.n_dw == 94
    assert b.bandwidth_gbps == pytest.approx(1504.0)


def test_exact_integer_ratio_not_floored_down():
    # 50 * 0.15^2 lands exactly on a wire-count boundary
    b = link_bandwidth(LinkParams(a_b=50 * 0.15 * 0.15))
    assert b.n_w == 50


def test_infeasible_sector_raises():
    with pytest.raises(LinkInfeasibleError):
        link_bandwidth(LinkParams(a_b=12 * 0.15 * 0.15))  # exactly the overhead
    with pytest.raises(LinkInfeasibleError):
        link_bandwidth(LinkParams(a_b=0.01))


def test_param_validation():
    with pytest.raises(ValueError):
        link_bandwidth(LinkParams(a_b=1.0, p_b=0.0))
    with pytest.raises(ValueError):
        link_bandwidth(LinkParams(a_b=-1.0))
    with pytest.raises(ValueError):
        link_bandwidth(LinkParams(a_b=1.0, n_ndw=-1))
    with pytest.raises(ValueError):
        link_bandwidth(LinkParams(a_b=1.0, f_ghz=0.0))


def test_full_global_bandwidth():
    assert full_global_bandwidth(64, 2, 1136.0) == pytest.approx(145408.0)
    with pytest.raises(ValueError):
        full_global_bandwidth(0, 2, 1.0)


def test_link_span_and_warning():
    assert estimate_link_span(0.73) == pytest.approx(1.46)
    assert link_reach_warning(0.73) is None
    msg = link_reach_warning(1.2)
    assert msg is not None and f"{MAX_LINK_REACH_MM:.1f}" in msg
    assert link_reach_warning(0.9, placement_gap=0.3) is not None
    with pytest.raises(ValueError):
        estimate_link_span(-0.1)


@settings(max_examples=200, deadline=None)
@given(
    a_b=st.floats(min_value=0.5, max_value=50.0),
    p_b=st.floats(min_value=0.05, max_value=0.3),
    n_ndw=st.integers(min_value=0, max_value=16),
    f_ghz=st.floats(min_value=1.0, max_value=64.0),
)
def test_budget_consistency_property(a_b, p_b, n_ndw, f_ghz):
    try:
        b = link_bandwidth(LinkParams(a_b=a_b, p_b=p_b, n_ndw=n_ndw, f_ghz=f_ghz))
    except LinkInfeasibleError:
        assert a_b / (p_b * p_b) <= n_ndw + 1
        return
    assert b.n_dw == b.n_w - n_ndw > 0
    assert b.bandwidth_gbps == pytest.approx(b.n_dw * f_ghz)
    # wire count is the floor of the area ratio
    assert b.n_w <= a_b / (p_b * p_b) + 1e-6
    assert b.n_w + 1 > a_b / (p_b * p_b) - 1e-6


@settings(max_examples=60, deadline=None)
@given(
    a1=st.floats(min_value=0.5, max_value=25.0),
    a2=st.floats(min_value=0.5, max_value=25.0),
)
def test_wire_count_monotone_in_area(a1, a2):
    lo, hi = sorted((a1, a2))
    b_lo = link_bandwidth(LinkParams(a_b=lo))
    b_hi = link_bandwidth(LinkParams(a_b=hi))
    assert b_lo.n_w <= b_hi.n_w
