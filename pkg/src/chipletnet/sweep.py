"""Arrangement-comparison sweeps: one CSV row per (kind, chiplet count).

Each row combines graph metrics, solved chiplet geometry, the per-link
bandwidth budget, and (unless disabled) simulated zero-load latency plus
the saturation throughput search.  Sweeps are deterministic: the same spec
produces byte-identical CSV output, and ``resume`` recomputes only the
(kind, n) points missing from an existing file.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from typing import Optional

from .arrangement import Arrangement, ArrangementKind, Regularity
from .errors import ChipletNetError
from .geometry import chiplet_area, shape_for
from .linkmodel import LinkParams, link_bandwidth, link_reach_warning
from .metrics import EXACT_BISECTION_LIMIT, bfs_diameter, closed_form_bisection, closed_form_diameter, degree_stats, heuristic_bisection
from .simnet import SimConfig, find_saturation, run, throughput_tbps

CSV_COLUMNS = [
    "kind",
    "n",
    "regularity",
    "diameter_bfs",
    "diameter_formula",
    "bisection_formula",
    "bisection_heuristic",
    "min_deg",
    "avg_deg",
    "A_C",
    "W_C",
    "H_C",
    "D_B",
    "A_B",
    "N_w",
    "N_dw",
    "link_bw_gbps",
    "zero_load_latency_cycles",
    "sat_fraction",
    "sat_throughput_tbps",
    "note",
]

DEFAULT_KINDS = (ArrangementKind.GRID, ArrangementKind.BRICKWALL, ArrangementKind.HEXAMESH)


@dataclass
class SweepSpec:
    """Full description of one sweep; mirrors the CLI/JSON configuration."""

    kinds: tuple[ArrangementKind, ...] = DEFAULT_KINDS
    n_min: int = 2
    n_max: int = 100
    a_all: float = 800.0  # total silicon area budget, mm^2
    p_p: float = 0.4
    p_b: float = 0.15
    n_ndw: int = 12
    f_ghz: float = 16.0
    restarts: int = 32
    seed: int = 0
    seeds: int = 1  # simulate this many seeds and average latency/saturation
    zero_load_rate: float = 0.005
    endpoints_per_chiplet: int = 2
    skip_sim: bool = False
    sim: SimConfig = field(default_factory=SimConfig)

    def validate(self) -> None:
        if not self.kinds:
            raise ValueError("sweep needs at least one arrangement kind")
        if not (1 <= self.n_min <= self.n_max):
            raise ValueError(f"bad count range [{self.n_min}, {self.n_max}]")
        if self.seeds < 1:
            raise ValueError("seeds must be >= 1")

    def to_dict(self) -> dict:
        out = {
            "kinds": [k.value for k in self.kinds],
            "n_min": self.n_min,
            "n_max": self.n_max,
            "a_all": self.a_all,
            "p_p": self.p_p,
            "p_b": self.p_b,
            "n_ndw": self.n_ndw,
            "f_ghz": self.f_ghz,
            "restarts": self.restarts,
            "seed": self.seed,
            "seeds": self.seeds,
            "zero_load_rate": self.zero_load_rate,
            "endpoints_per_chiplet": self.endpoints_per_chiplet,
            "skip_sim": self.skip_sim,
            "sim": {f.name: getattr(self.sim, f.name) for f in fields(SimConfig)},
        }
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        spec = cls()
        simple = {
            "n_min", "n_max", "a_all", "p_p", "p_b", "n_ndw", "f_ghz",
            "restarts", "seed", "seeds", "zero_load_rate",
            "endpoints_per_chiplet", "skip_sim",
        }
        for key, value in data.items():
            if key == "kinds":
                spec.kinds = tuple(ArrangementKind.parse(k) for k in value)
            elif key == "sim":
                spec.sim = replace(spec.sim, **value)
            elif key in simple:
                setattr(spec, key, type(getattr(spec, key))(value))
            else:
                raise ValueError(f"unknown sweep config key {key!r}")
        spec.validate()
        return spec


def format_cell(value) -> str:
    """CSV cell formatting: empty for missing, 6 significant digits for floats."""
    if value is None or value == "":
        return ""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def sweep_point(spec: SweepSpec, kind: ArrangementKind, n: int) -> dict:
    """Compute one CSV row; partial failures land in the ``note`` column."""
    notes: list[str] = []
    row: dict = {c: None for c in CSV_COLUMNS}
    row["kind"] = kind.value
    row["n"] = n

    a_c = chiplet_area(spec.a_all, n)
    shape = shape_for(kind, a_c, spec.p_p)
    arr = Arrangement.build(kind, n, shape.w_c, shape.h_c)
    row["regularity"] = arr.regularity.value
    row["diameter_bfs"] = bfs_diameter(arr.graph)
    row["bisection_heuristic"] = heuristic_bisection(arr.graph, restarts=spec.restarts, seed=spec.seed)
    if arr.regularity is Regularity.REGULAR:
        row["diameter_formula"] = closed_form_diameter(kind, n)
        row["bisection_formula"] = closed_form_bisection(kind, n)
    deg = degree_stats(arr.graph)
    row["min_deg"] = deg.min
    row["avg_deg"] = deg.avg
    row["A_C"] = a_c
    row["W_C"] = shape.w_c
    row["H_C"] = shape.h_c
    row["D_B"] = shape.d_b
    row["A_B"] = shape.a_b
    warn = link_reach_warning(shape.d_b)
    if warn:
        notes.append(warn)

    try:
        budget = link_bandwidth(LinkParams(a_b=shape.a_b, p_b=spec.p_b, n_ndw=spec.n_ndw, f_ghz=spec.f_ghz))
        row["N_w"] = budget.n_w
        row["N_dw"] = budget.n_dw
        row["link_bw_gbps"] = budget.bandwidth_gbps
    except ChipletNetError as exc:
        notes.append(f"link model: {exc}")
        budget = None

    if not spec.skip_sim and budget is not None:
        zl_vals = []
        sat_vals = []
        for i in range(spec.seeds):
            cfg = replace(
                spec.sim,
                seed=spec.seed + i,
                injection_rate=spec.zero_load_rate,
                endpoints_per_chiplet=spec.endpoints_per_chiplet,
            )
            res = run(arr, cfg)
            zl_vals.append(res.avg_packet_latency_cycles)
            sat_vals.append(find_saturation(arr, cfg).sat_rate)
        row["zero_load_latency_cycles"] = sum(zl_vals) / len(zl_vals)
        row["sat_fraction"] = sum(sat_vals) / len(sat_vals)
        row["sat_throughput_tbps"] = throughput_tbps(
            row["sat_fraction"], n, spec.endpoints_per_chiplet, row["link_bw_gbps"]
        )
    row["note"] = "; ".join(notes)
    return row


def _point_task(args: tuple) -> tuple[str, int, dict]:
    spec, kind, n = args
    return kind.value, n, sweep_point(spec, kind, n)


def read_sweep_csv(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_sweep_csv(path: str, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([format_cell(row.get(c)) for c in CSV_COLUMNS])


def run_sweep(
    spec: SweepSpec,
    out_path: str,
    resume: bool = False,
    jobs: int = 1,
    progress=None,
) -> list[dict]:
    """Execute a sweep and write the CSV; returns the rows in file order.

    Rows are kept in canonical order (kinds as specified, n ascending), so
    a completed sweep is byte-identical no matter how it was scheduled or
    whether it was resumed.
    """
    spec.validate()
    done: dict[tuple[str, int], dict] = {}
    if resume and os.path.exists(out_path):
        for row in read_sweep_csv(out_path):
            done[(row["kind"], int(row["n"]))] = row

    points = [
        (kind, n)
        for kind in spec.kinds
        for n in range(spec.n_min, spec.n_max + 1)
        if (kind.value, n) not in done
    ]
    computed: dict[tuple[str, int], dict] = {}
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for kv, n, row in pool.map(_point_task, [(spec, k, n) for k, n in points]):
                computed[(kv, n)] = row
                if progress:
                    progress(kv, n)
    else:
        for kind, n in points:
            computed[(kind.value, n)] = sweep_point(spec, kind, n)
            if progress:
                progress(kind.value, n)

    rows = []
    for kind in spec.kinds:
        for n in range(spec.n_min, spec.n_max + 1):
            key = (kind.value, n)
            rows.append(computed.get(key) or done[key])
    write_sweep_csv(out_path, rows)
    return rows


COMPARE_COLUMNS = ["kind", "n", "zero_load_latency_ratio", "sat_throughput_ratio"]


def compare_rows(rows: list[dict]) -> list[dict]:
    """Per-count latency/throughput ratios of each kind against the grid.

    Grid rows are retained (ratio 1.0) so the baseline shows up in plots.
    """
    def val(row, col):
        v = row.get(col)
        if v in (None, ""):
            return None
        return float(v)

    grid_by_n: dict[int, dict] = {}
    for row in rows:
        if row["kind"] == ArrangementKind.GRID.value:
            grid_by_n[int(row["n"])] = row
    out = []
    for row in rows:
        n = int(row["n"])
        base = grid_by_n.get(n)
        if base is None:
            raise ValueError(f"no grid baseline row for n={n}")
        ratios: dict = {"kind": row["kind"], "n": n}
        for col, out_col in (
            ("zero_load_latency_cycles", "zero_load_latency_ratio"),
            ("sat_throughput_tbps", "sat_throughput_ratio"),
        ):
            a, b = val(row, col), val(base, col)
            ratios[out_col] = (a / b) if (a is not None and b not in (None, 0.0)) else None
        out.append(ratios)
    return out


def write_compare_csv(path: str, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(COMPARE_COLUMNS)
        for row in rows:
            writer.writerow([format_cell(row.get(c)) for c in COMPARE_COLUMNS])
