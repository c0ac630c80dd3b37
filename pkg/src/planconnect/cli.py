"""Command line entry point wiring all analyses into subcommands."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import visual
from .dataset import SplitSpec, build_dataset
from .errors import PlanConnectError
from .farm.coordinator import serve_coordinator
from .farm.local import run_local
from .farm.manifest import Analysis, save_manifest
from .farm.runner import run_analysis
from .farm.worker import run_worker
from .fields import FieldKind, load_f32
from .grid import largest_component, load_occupancy, signed_distance_field, write_pgm
from .dataset import DEFAULT_DIRECTIONS, remap_to_gray
from .spatial import spatial_connectivity_field
from .synth import PlanStyle, PlanSynthParams, generate_batch

_ANALYSES = {
    "spatial": Analysis.SPATIAL,
    "visual": Analysis.VISUAL,
    "visual_depth": Analysis.VISUAL_DEPTH,
    "sdf": Analysis.SDF,
}


def _parse_analyses(text: str) -> list[Analysis]:
    names = [n.strip() for n in text.split(",") if n.strip()]
    bad = [n for n in names if n not in _ANALYSES]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown analyses: {', '.join(bad)}")
    return [_ANALYSES[n] for n in names]


def _parse_size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad size {text!r}, expected WxH") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="planconnect", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="procedurally generate plans and a task manifest")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--style", choices=["corridors", "open"], default="corridors")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=_parse_size, default=(100, 100), metavar="WxH")
    p.add_argument("--out", required=True)
    p.add_argument("--analyses", type=_parse_analyses, default=[Analysis.SPATIAL])
    p.add_argument("--cell-size", type=float, default=1.0)
    p.add_argument("--density", type=float, default=0.15, help="open-plan furniture density")

    p = sub.add_parser("analyze", help="run one analysis on one plan")
    p.add_argument("--input", required=True)
    p.add_argument("--analysis", choices=sorted(_ANALYSES), required=True)
    p.add_argument("--out", required=True, help="output grayscale PGM path")
    p.add_argument("--sidecar", action="store_true", help="also write a lossless .f32 sidecar")
    p.add_argument("--visibility", choices=list(visual.BACKENDS), default="shadowcast")
    p.add_argument("--cell-size", type=float, default=1.0)

    p = sub.add_parser("farm", help="batch execution, locally or over TCP")
    farm_sub = p.add_subparsers(dest="farm_command", required=True)
    f = farm_sub.add_parser("local")
    f.add_argument("--manifest", required=True)
    f.add_argument("--workers", type=int, required=True)
    f.add_argument("--json", action="store_true")
    f = farm_sub.add_parser("serve")
    f.add_argument("--manifest", required=True)
    f.add_argument("--bind", required=True, metavar="HOST:PORT")
    f.add_argument("--heartbeat-timeout", type=float, default=10.0)
    f.add_argument("--json", action="store_true")
    f = farm_sub.add_parser("worker")
    f.add_argument("--connect", required=True, metavar="HOST:PORT")
    f.add_argument("--slots", type=int, required=True)
    f.add_argument("--heartbeat-interval", type=float, default=2.0)

    p = sub.add_parser("dataset", help="dataset assembly")
    dataset_sub = p.add_subparsers(dest="dataset_command", required=True)
    d = dataset_sub.add_parser("build")
    d.add_argument("--plans", required=True)
    d.add_argument("--analyses", type=_parse_analyses, default=[Analysis.SPATIAL, Analysis.VISUAL])
    d.add_argument("--split", default="0.7,0.2,0.1")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--out", required=True)
    d.add_argument("--workers", type=int, default=1)
    d.add_argument("--cell-size", type=float, default=1.0)

    p = sub.add_parser("bench", help="time one analysis repeatedly, JSON on stdout")
    p.add_argument("--input", required=True)
    p.add_argument("--analysis", choices=sorted(_ANALYSES), required=True)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--visibility", choices=list(visual.BACKENDS), default="shadowcast")
    p.add_argument("--cell-size", type=float, default=1.0)

    return parser


def _cmd_generate(args) -> int:
    width, height = args.size
    params = PlanSynthParams(
        width=width,
        height=height,
        style=PlanStyle.CORRIDORS if args.style == "corridors" else PlanStyle.OPEN_PLAN,
        seed=args.seed,
        furniture_density=args.density,
        cell_size=args.cell_size,
    )
    tasks = generate_batch(params, args.count, args.out, analyses=tuple(args.analyses))
    save_manifest(tasks, Path(args.out) / "manifest.jsonl")
    print(f"wrote {args.count} plans and {len(tasks)} tasks to {args.out}")
    return 0


def _compute_field(grid, analysis: Analysis, backend: str):
    if analysis is Analysis.SPATIAL:
        return spatial_connectivity_field(grid)
    if analysis is Analysis.VISUAL:
        return visual.visual_connectivity_field(grid, backend=backend)
    if analysis is Analysis.VISUAL_DEPTH:
        return visual.visual_mean_depth_field(grid, backend=backend)
    return signed_distance_field(grid)


def _cmd_analyze(args) -> int:
    analysis = _ANALYSES[args.analysis]
    grid = largest_component(load_occupancy(args.input, args.cell_size))
    field = _compute_field(grid, analysis, args.visibility)
    write_pgm(remap_to_gray(field, grid, DEFAULT_DIRECTIONS[analysis]), args.out)
    if args.sidecar:
        field.save_f32(str(args.out) + ".f32")
    return 0


def _cmd_bench(args) -> int:
    analysis = _ANALYSES[args.analysis]
    grid = largest_component(load_occupancy(args.input, args.cell_size))
    _compute_field(grid, analysis, args.visibility)  # warm caches / jit
    timings = []
    for _ in range(max(1, args.repeat)):
        start = time.perf_counter()
        _compute_field(grid, analysis, args.visibility)
        timings.append(time.perf_counter() - start)
    print(json.dumps({"analysis": args.analysis, "timings": timings, "mean": sum(timings) / len(timings)}))
    return 0


def _cmd_farm(args) -> int:
    if args.farm_command == "local":
        stats = run_local(args.manifest, args.workers)
    elif args.farm_command == "serve":
        stats = serve_coordinator(args.manifest, args.bind, args.heartbeat_timeout)
    else:
        return run_worker(args.connect, args.slots, args.heartbeat_interval)
    print(json.dumps(stats.to_json()) if args.json else stats.render_table())
    return 0


def _cmd_dataset(args) -> int:
    ratios = tuple(float(r) for r in args.split.split(","))
    if len(ratios) != 3:
        raise PlanConnectError(f"--split expects three ratios, got {args.split!r}")
    build_dataset(
        args.plans,
        args.analyses,
        SplitSpec(ratios=ratios, seed=args.seed),
        args.out,
        cell_size=args.cell_size,
        workers=args.workers,
    )
    print(f"dataset written to {args.out}")
    return 0


def run_cli(argv: list[str]) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "farm":
            return _cmd_farm(args)
        return _cmd_dataset(args)
    except PlanConnectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


def plan_synth_main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


def farm_main() -> None:
    sys.exit(run_cli(["farm", *sys.argv[1:]]))


def dataset_main() -> None:
    sys.exit(run_cli(["dataset", *sys.argv[1:]]))
