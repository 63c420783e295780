"""Command-line front end: generate arrangements, analyze them, run
simulations and sweeps, and derive comparison tables and figures.

Exit codes: 0 success, 1 input error (bad flags, bad config, infeasible
parameters, missing files), 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from dataclasses import replace

from .arrangement import Arrangement, ArrangementKind
from .errors import ChipletNetError
from .geometry import chiplet_area, shape_for
from .linkmodel import LinkParams, link_bandwidth, link_reach_warning
from .metrics import metrics_report
from .simnet import SimConfig, find_saturation, run, throughput_tbps
from .sweep import SweepSpec, compare_rows, read_sweep_csv, run_sweep, write_compare_csv


class _Parser(argparse.ArgumentParser):
    # usage problems are input errors, not internal ones
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(doc: dict, args) -> None:
    if args.json:
        text = json.dumps(doc, separators=(",", ":"))
    else:
        text = json.dumps(doc, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _build_arrangement(kind: ArrangementKind, n: int, a_all: float, p_p: float):
    shape = shape_for(kind, chiplet_area(a_all, n), p_p)
    return shape, Arrangement.build(kind, n, shape.w_c, shape.h_c)


def cmd_generate(args) -> int:
    kind = ArrangementKind.parse(args.kind)
    _, arr = _build_arrangement(kind, args.n, args.a_all, args.p_p)
    _emit(arr.to_dict(), args)
    return 0


def cmd_analyze(args) -> int:
    kind = ArrangementKind.parse(args.kind)
    shape, arr = _build_arrangement(kind, args.n, args.a_all, args.p_p)
    report = metrics_report(arr, restarts=args.restarts, seed=args.seed)
    doc = {
        "kind": kind.value,
        "n": args.n,
        "metrics": report.to_dict(),
        "shape": shape.to_dict(),
        "warnings": [],
    }
    warn = link_reach_warning(shape.d_b)
    if warn:
        doc["warnings"].append(warn)
    try:
        budget = link_bandwidth(
            LinkParams(a_b=shape.a_b, p_b=args.p_b, n_ndw=args.n_ndw, f_ghz=args.f_ghz)
        )
        doc["link"] = {
            "N_w": budget.n_w,
            "N_dw": budget.n_dw,
            "bandwidth_gbps": budget.bandwidth_gbps,
        }
    except ChipletNetError as exc:
        doc["link"] = None
        doc["warnings"].append(str(exc))
    _emit(doc, args)
    return 0


def cmd_simulate(args) -> int:
    kind = ArrangementKind.parse(args.kind)
    shape, arr = _build_arrangement(kind, args.n, args.a_all, args.p_p)
    cfg = SimConfig(
        injection_rate=args.rate,
        seed=args.seed,
        endpoints_per_chiplet=args.endpoints,
        warmup_cycles=args.warmup,
        measure_cycles=args.measure,
        drain_cycles=args.drain,
    )
    cfg.validate()
    if args.find_saturation:
        sat = find_saturation(arr, cfg)
        doc = sat.to_dict()
        try:
            budget = link_bandwidth(
                LinkParams(a_b=shape.a_b, p_b=args.p_b, n_ndw=args.n_ndw, f_ghz=args.f_ghz)
            )
            doc["sat_throughput_tbps"] = throughput_tbps(
                sat.sat_rate, args.n, args.endpoints, budget.bandwidth_gbps
            )
        except ChipletNetError:
            pass
        _emit(doc, args)
    else:
        res = run(arr, cfg)
        _emit(res.to_dict(), args)
    return 0


def _load_sweep_spec(args) -> SweepSpec:
    if args.config:
        with open(args.config) as fh:
            spec = SweepSpec.from_dict(json.load(fh))
    else:
        spec = SweepSpec()
    # explicit flags (parser default None) override the config file
    overrides = {
        "n_min": args.n_min,
        "n_max": args.n_max,
        "a_all": args.a_all,
        "p_p": args.p_p,
        "p_b": args.p_b,
        "n_ndw": args.n_ndw,
        "f_ghz": args.f_ghz,
        "restarts": args.restarts,
        "seeds": args.seeds,
        "zero_load_rate": args.zero_load_rate,
        "endpoints_per_chiplet": args.endpoints,
    }
    for name, value in overrides.items():
        if value is not None:
            setattr(spec, name, value)
    if args.kinds is not None:
        spec.kinds = tuple(ArrangementKind.parse(k) for k in args.kinds.split(","))
    if args.seed is not None:
        spec.seed = args.seed
    if args.skip_sim:
        spec.skip_sim = True
    sim_overrides = {}
    if args.sim_warmup is not None:
        sim_overrides["warmup_cycles"] = args.sim_warmup
    if args.sim_measure is not None:
        sim_overrides["measure_cycles"] = args.sim_measure
    if args.sim_drain is not None:
        sim_overrides["drain_cycles"] = args.sim_drain
    if sim_overrides:
        spec.sim = replace(spec.sim, **sim_overrides)
    spec.validate()
    return spec


def cmd_sweep(args) -> int:
    spec = _load_sweep_spec(args)
    out_path = args.out or "sweep.csv"
    progress = None
    if args.progress:
        def progress(kind, n):
            print(f"done {kind} n={n}", file=sys.stderr)
    rows = run_sweep(spec, out_path, resume=args.resume, jobs=args.jobs, progress=progress)
    print(f"wrote {len(rows)} rows to {out_path}", file=sys.stderr)
    return 0


def cmd_compare(args) -> int:
    rows = read_sweep_csv(args.sweep)
    ratios = compare_rows(rows)
    out_path = args.out or "compare.csv"
    write_compare_csv(out_path, ratios)
    print(f"wrote {len(ratios)} rows to {out_path}", file=sys.stderr)
    return 0


def cmd_plot(args) -> int:
    from .plots import render_report

    rows = read_sweep_csv(args.sweep)
    paths = render_report(rows, args.outdir)
    for p in paths:
        print(p, file=sys.stderr)
    return 0


def _add_common(p: argparse.ArgumentParser, seed_default=0) -> None:
    p.add_argument("--seed", type=int, default=seed_default, help="base RNG seed")
    p.add_argument("--json", action="store_true", help="compact single-line JSON output")
    p.add_argument("--out", default=None, help="write output to this path instead of stdout")


def _add_shape_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a-all", type=float, default=800.0, help="total chiplet area budget, mm^2")
    p.add_argument("--p-p", type=float, default=0.4, help="processing-area fraction of each chiplet")


def _add_link_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p-b", type=float, default=0.15, help="bump pitch, mm")
    p.add_argument("--n-ndw", type=int, default=12, help="non-data wires per link")
    p.add_argument("--f-ghz", type=float, default=16.0, help="wire signaling rate, GHz")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chipletnet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build an arrangement and print its JSON")
    p.add_argument("--kind", required=True)
    p.add_argument("--n", type=int, required=True)
    _add_shape_params(p)
    _add_common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("analyze", help="metrics, shape, and link budget for one arrangement")
    p.add_argument("--kind", required=True)
    p.add_argument("--n", type=int, required=True)
    _add_shape_params(p)
    _add_link_params(p)
    p.add_argument("--restarts", type=int, default=32, help="bisection heuristic restarts")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="run the interconnect simulator on one arrangement")
    p.add_argument("--kind", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rate", type=float, default=0.005, help="flit injection rate per endpoint per cycle")
    p.add_argument("--endpoints", type=int, default=2, help="endpoints per chiplet")
    p.add_argument("--warmup", type=int, default=10000)
    p.add_argument("--measure", type=int, default=50000)
    p.add_argument("--drain", type=int, default=140000)
    p.add_argument("--find-saturation", action="store_true", help="search for the saturation rate instead of one run")
    _add_shape_params(p)
    _add_link_params(p)
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="write the full comparison CSV over a range of counts")
    p.add_argument("--config", default=None, help="JSON file with SweepSpec fields")
    p.add_argument("--kinds", default=None, help="comma-separated arrangement kinds")
    p.add_argument("--n-min", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--a-all", type=float, default=None)
    p.add_argument("--p-p", type=float, default=None)
    p.add_argument("--p-b", type=float, default=None)
    p.add_argument("--n-ndw", type=int, default=None)
    p.add_argument("--f-ghz", type=float, default=None)
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--seeds", type=int, default=None, help="average sim columns over this many seeds")
    p.add_argument("--zero-load-rate", type=float, default=None)
    p.add_argument("--endpoints", type=int, default=None)
    p.add_argument("--sim-warmup", type=int, default=None)
    p.add_argument("--sim-measure", type=int, default=None)
    p.add_argument("--sim-drain", type=int, default=None)
    p.add_argument("--skip-sim", action="store_true", help="omit simulation columns")
    p.add_argument("--resume", action="store_true", help="keep rows already present in the output file")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--progress", action="store_true", help="print per-point progress to stderr")
    p.add_argument("--seed", type=int, default=None, help="base RNG seed")
    p.add_argument("--json", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("--out", default=None, help="output CSV path (default sweep.csv)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="normalize a sweep CSV against the grid baseline")
    p.add_argument("--sweep", required=True, help="input sweep CSV")
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plot", help="render the four SVG panels from a sweep CSV")
    p.add_argument("--sweep", required=True, help="input sweep CSV")
    p.add_argument("--outdir", default="figs", help="directory for the SVG files")
    _add_common(p)
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ChipletNetError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
