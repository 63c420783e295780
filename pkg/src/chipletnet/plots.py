"""Render sweep results as SVG line charts.

Four panels: zero-load latency and saturation throughput versus chiplet
count, plus both normalized to the grid baseline at the same count.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .arrangement import ArrangementKind
from .sweep import compare_rows

_STYLE = {
    ArrangementKind.GRID.value: dict(color="tab:blue", marker="o"),
    ArrangementKind.BRICKWALL.value: dict(color="tab:orange", marker="s"),
    ArrangementKind.HEXAMESH.value: dict(color="tab:green", marker="^"),
}

PANELS = (
    "zero_load_latency.svg",
    "sat_throughput.svg",
    "zero_load_latency_ratio.svg",
    "sat_throughput_ratio.svg",
)


def _series(rows: list[dict], value_col: str) -> dict[str, tuple[list[int], list[float]]]:
    out: dict[str, tuple[list[int], list[float]]] = {}
    for row in rows:
        v = row.get(value_col)
        if v in (None, ""):
            continue
        xs, ys = out.setdefault(row["kind"], ([], []))
        xs.append(int(row["n"]))
        ys.append(float(v))
    return out


def _panel(path: str, series: dict, ylabel: str, title: str, hline: float | None = None) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for kind in _STYLE:
        if kind not in series:
            continue
        xs, ys = series[kind]
        order = sorted(range(len(xs)), key=xs.__getitem__)
        ax.plot(
            [xs[i] for i in order],
            [ys[i] for i in order],
            label=kind,
            markersize=3.5,
            linewidth=1.2,
            **_STYLE[kind],
        )
    if hline is not None:
        ax.axhline(hline, color="gray", linewidth=0.8, linestyle="--")
    ax.set_xlabel("chiplet count n")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    if ax.get_legend_handles_labels()[0]:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def render_report(rows: list[dict], outdir: str) -> list[str]:
    """Write the four SVG panels for a sweep; returns the file paths."""
    os.makedirs(outdir, exist_ok=True)
    ratios = compare_rows(rows)
    paths = [os.path.join(outdir, name) for name in PANELS]
    _panel(
        paths[0],
        _series(rows, "zero_load_latency_cycles"),
        "zero-load latency (cycles)",
        "Zero-load packet latency",
    )
    _panel(
        paths[1],
        _series(rows, "sat_throughput_tbps"),
        "saturation throughput (Tbps)",
        "Aggregate saturation throughput",
    )
    _panel(
        paths[2],
        _series(ratios, "zero_load_latency_ratio"),
        "latency ratio vs grid",
        "Zero-load latency normalized to grid",
        hline=1.0,
    )
    _panel(
        paths[3],
        _series(ratios, "sat_throughput_ratio"),
        "throughput ratio vs grid",
        "Saturation throughput normalized to grid",
        hline=1.0,
    )
    return paths
