"""Acceptance suite: one test per headline requirement.

Each test prints a single [PASS]/[FAIL] line (visible with ``pytest -s``;
the verbose test names mirror the same information) and then asserts.
Simulation-based checks pin their windows and seeds so results are exactly
reproducible.
"""

import math

from chipletnet import (
    Arrangement,
    ArrangementKind,
    LinkParams,
    Regularity,
    SimConfig,
    analytic_zero_load,
    bfs_diameter,
    chiplet_area,
    closed_form_bisection,
    closed_form_diameter,
    degree_stats,
    exhaustive_bisection,
    find_saturation,
    formula_bisection,
    formula_diameter,
    heuristic_bisection,
    link_bandwidth,
    regularity_of,
    run,
    shape_for,
    shape_residuals,
    solve_shape_brick,
    solve_shape_grid,
    throughput_tbps,
)

G = ArrangementKind.GRID
BW = ArrangementKind.BRICKWALL
HM = ArrangementKind.HEXAMESH
KINDS = (G, BW, HM)

A_ALL = 800.0
P_P = 0.4


def _report(name: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f" :: {detail}"
    print(line)
    assert ok, line


def build(kind, n, w=2.0, h=1.5):
    return Arrangement.build(kind, n, w, h)


def regular_ns(kind, n_max=100):
    return [n for n in range(1, n_max + 1) if regularity_of(kind, n) is Regularity.REGULAR]


def sized_arrangement(kind, n):
    shape = shape_for(kind, chiplet_area(A_ALL, n), P_P)
    return shape, Arrangement.build(kind, n, shape.w_c, shape.h_c)


def test_c1_formula_reproduction():
    checks = [
        (formula_diameter(G, 64), 14.0),
        (formula_diameter(BW, 9), 3.0),
        (formula_diameter(HM, 7), 2.5),
        (formula_bisection(HM, 7), 6.0),
    ]
    # the closed forms themselves, over every regular count up to 100
    for n in regular_ns(G):
        s = math.sqrt(n)
        checks.append((formula_diameter(G, n), 2 * s - 2))
        checks.append((formula_bisection(G, n), s))
    for n in regular_ns(BW):
        s = math.sqrt(n)
        checks.append((formula_diameter(BW, n), 2 * s - 2 - math.floor((s - 1) / 2)))
        checks.append((formula_bisection(BW, n), 2 * s - 1))
    for n in regular_ns(HM):
        checks.append((formula_diameter(HM, n), math.sqrt(12 * n - 3) / 3 - 0.5))
        checks.append((formula_bisection(HM, n), 2.0 / 3.0 * math.sqrt(12 * n - 3)))
    worst = max(abs(got - want) for got, want in checks)
    _report("formula reproduction", worst <= 1e-12, f"max abs err {worst:.2e} over {len(checks)} values")


def test_c2_graph_vs_formula():
    deviations = []
    for kind in KINDS:
        for n in regular_ns(kind):
            if n < 2:
                continue
            measured = bfs_diameter(build(kind, n).graph)
            predicted = formula_diameter(kind, n)
            delta = measured - predicted
            if kind is G:
                ok = delta == 0
            else:
                ok = abs(delta) <= 1
            if not ok or delta != 0:
                deviations.append(f"{kind.value} n={n} bfs={measured} formula={predicted:g}")
            assert ok, deviations[-1]
    detail = f"{len(deviations)} within-tolerance deviations" + (
        f" ({'; '.join(deviations[:4])}...)" if deviations else ""
    )
    _report("graph diameter vs closed form (regular n <= 100)", True, detail)


def test_c3_bisection_oracle():
    disagreements = []
    for kind in KINDS:
        for n in regular_ns(kind, 20):
            if n < 2:
                continue
            exact = exhaustive_bisection(build(kind, n).graph)
            formula = formula_bisection(kind, n)
            if exact != formula:
                disagreements.append(f"{kind.value} n={n} exact={exact} formula={formula:g}")
    mismatch = []
    for kind in KINDS:
        for n in range(2, 21):
            g = build(kind, n).graph
            h = heuristic_bisection(g, restarts=32, seed=0)
            e = exhaustive_bisection(g)
            if h != e:
                mismatch.append(f"{kind.value} n={n} heuristic={h} exact={e}")
    detail = f"heuristic==exact on all 57 graphs; formula-vs-exact disagreements: {disagreements or 'none'}"
    _report("bisection oracle", not mismatch, detail if not mismatch else "; ".join(mismatch))


def test_c4_asymptotic_ratios():
    n = 10**6
    got = {
        "diameter BW/G": closed_form_diameter(BW, n) / closed_form_diameter(G, n),
        "diameter HM/G": closed_form_diameter(HM, n) / closed_form_diameter(G, n),
        "bisection BW/G": closed_form_bisection(BW, n) / closed_form_bisection(G, n),
        "bisection HM/G": closed_form_bisection(HM, n) / closed_form_bisection(G, n),
    }
    want = {
        "diameter BW/G": 0.75,
        "diameter HM/G": 1 / math.sqrt(3),
        "bisection BW/G": 2.0,
        "bisection HM/G": 4 / math.sqrt(3),
    }
    errs = {k: abs(got[k] / want[k] - 1) for k in got}
    ok = max(errs.values()) <= 0.01
    detail = ", ".join(f"{k} {got[k]:.4f} (limit {want[k]:.4f})" for k in got)
    _report("asymptotic ratios at n=1e6", ok, detail)


def test_c5_shape_solver():
    s = solve_shape_brick(16.0, 0.4)
    example_ok = (round(s.w_c, 2), round(s.h_c, 2), round(s.d_b, 2)) == (4.38, 3.65, 0.73)
    # deterministic 1000-point sweep: 20 areas x 25 power fractions x 2 solvers
    worst = 0.0
    for i in range(20):
        a_c = 0.5 * (2000.0 / 0.5) ** (i / 19)
        for j in range(25):
            p_p = 0.05 + (0.95 - 0.05) * j / 24
            for sol in (solve_shape_grid(a_c, p_p), solve_shape_brick(a_c, p_p)):
                worst = max(worst, max(shape_residuals(sol)))
    ok = example_ok and worst <= 1e-9
    _report("shape solver", ok, f"example round {example_ok}, max residual {worst:.2e} over 1000 points")


def test_c6_link_model():
    s = solve_shape_brick(16.0, 0.4)
    b = link_bandwidth(LinkParams(a_b=s.a_b))
    ok = abs(b.n_w - 71) <= 1 and abs(b.n_dw - 59) <= 1 and abs(b.bandwidth_gbps - 944.0) <= 16.0
    _report("link model", ok, f"N_w={b.n_w} N_dw={b.n_dw} B={b.bandwidth_gbps:g} Gb/s")


def test_c7_simulator_invariants():
    details = []

    # determinism per seed
    arr37 = sized_arrangement(G, 37)[1]
    cfg = SimConfig(injection_rate=0.005, seed=5, warmup_cycles=1000, measure_cycles=5000, drain_cycles=20000)
    deterministic = run(arr37, cfg).to_dict() == run(arr37, cfg).to_dict()
    details.append(f"deterministic={deterministic}")
    assert deterministic

    # zero-load accuracy on the evaluation sizes
    worst_rel = 0.0
    for kind in KINDS:
        for n in (16, 37, 64):
            _, arr = sized_arrangement(kind, n)
            zcfg = SimConfig(injection_rate=0.005, seed=0, warmup_cycles=2000,
                             measure_cycles=20000, drain_cycles=20000)
            res = run(arr, zcfg)
            assert res.drained
            assert res.flits_created == res.flits_ejected  # conservation
            rel_err = abs(res.avg_packet_latency_cycles / res.analytic_zero_load_cycles - 1)
            worst_rel = max(worst_rel, rel_err)
            assert rel_err <= 0.10, (kind, n, rel_err)
    details.append(f"worst zero-load err {worst_rel*100:.1f}%")

    # drain without deadlock at 1.5x the measured saturation rate
    for kind in KINDS:
        _, arr = sized_arrangement(kind, 16)
        scfg = SimConfig(seed=0, warmup_cycles=1000, measure_cycles=6000, drain_cycles=20000)
        sat = find_saturation(arr, scfg).sat_rate
        rate = min(1.0, 1.5 * sat)
        stress = run(arr, SimConfig(injection_rate=rate, seed=0, warmup_cycles=1000,
                                    measure_cycles=6000, drain_cycles=140000))
        assert stress.drained, (kind, rate)
        assert stress.flits_created == stress.flits_ejected
    details.append("1.5x-saturation runs drained with conservation")

    _report("simulator invariants", True, "; ".join(details))


def test_c8_arrangement_trend():
    zl_cfg = SimConfig(injection_rate=0.005, seed=0, warmup_cycles=2000,
                       measure_cycles=60000, drain_cycles=20000)
    sat_cfg = SimConfig(seed=0, warmup_cycles=2000, measure_cycles=8000, drain_cycles=30000)

    lines = []
    ok = True
    for n in (37, 64):
        zl = {}
        tput = {}
        for kind in KINDS:
            shape, arr = sized_arrangement(kind, n)
            budget = link_bandwidth(LinkParams(a_b=shape.a_b))
            res = run(arr, zl_cfg)
            assert res.drained
            zl[kind] = res.avg_packet_latency_cycles
            sat = find_saturation(arr, sat_cfg).sat_rate
            tput[kind] = throughput_tbps(sat, n, zl_cfg.endpoints_per_chiplet, budget.bandwidth_gbps)
        order_ok = zl[HM] <= zl[BW] <= zl[G]
        reduction = 1 - zl[HM] / zl[G]
        reduction_ok = 0.10 <= reduction <= 0.30
        hm_ratio = tput[HM] / tput[G]
        bw_ratio = tput[BW] / tput[G]
        ratios_ok = hm_ratio >= 1.15 and bw_ratio >= 0.95
        ok = ok and order_ok and reduction_ok and ratios_ok
        lines.append(
            f"n={n}: latency HM/BW/G {zl[HM]:.1f}/{zl[BW]:.1f}/{zl[G]:.1f}"
            f" (HM cut {reduction*100:.1f}%), throughput HM/G {hm_ratio:.2f} BW/G {bw_ratio:.2f}"
        )
    _report("arrangement trend at n in {37, 64}", ok, "; ".join(lines))


def test_c9_degree_properties():
    # Euler's e <= 3v - 6 bound holds for planar graphs with v >= 3
    for kind in KINDS:
        for n in range(3, 101):
            g = build(kind, n).graph
            assert 2 * g.num_edges / n <= 6 - 12 / n + 1e-12, (kind, n)
    for n in (7, 19, 37, 61, 91):
        assert degree_stats(build(HM, n).graph).min == 3, n
    deg1 = [
        n for n in range(2, 101)
        if regularity_of(G, n) is Regularity.IRREGULAR
        and degree_stats(build(G, n).graph).min == 1
    ]
    ok = bool(deg1)
    _report(
        "degree properties",
        ok,
        f"planar bound holds for n<=100; regular hexamesh min degree 3; "
        f"degree-1 irregular grids at n={deg1[:4]}",
    )
