"""Command-line interface: generate, value, solve, verify, score, select,
render.

Machine-readable output (JSON, SVG, CSV) goes to stdout or --out; diagnostics
go to stderr.  Exit codes: 0 success, 1 invalid solution / verification
failure, 2 usage or input error, 3 internal error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .generators import FAMILIES, GenConfig, GenerationFailed
from .model import (ParseError, ValidationError, load_instance, load_solution,
                    save_instance, save_solution, write_instance,
                    write_solution)
from .render import PALETTES, RenderOfInvalidSolution, RenderSpec, render
from .scoring import (UnknownInstance, build_leaderboard, read_records_csv,
                      render_table)
from .selection import METRIC_NAMES, SelectionConfig, select_from_features
from .solver import (Move, Ordering, PlacementMode, SolverConfig,
                     improve_local, solution_value, solve)
from .valuation import ValueKind, ValueOverflow, ValueSpec, assign_values
from .verifier import InstanceMismatch, verify

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _eprint(args, *msg):
    if not args.quiet:
        print(*msg, file=sys.stderr)


def _emit(args, data: bytes, summary=None):
    """Write bytes to --out (summary JSON to stdout) or bytes to stdout."""
    if args.out:
        Path(args.out).write_bytes(data)
        if summary is not None:
            print(json.dumps(summary))
    else:
        sys.stdout.write(data.decode("utf-8"))


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def _parse_range(text: str) -> tuple[int, int]:
    sep = ":" if ":" in text else ","
    lo, hi = text.split(sep)
    return int(lo), int(hi)


def _load_config_file(path: str) -> dict:
    """key = value lines; '#' comments; values parsed as int, fraction or
    range to match the GenConfig field."""
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {raw!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        out[key] = value
    return out


_FRACTION_FIELDS = {"area_multiple_t", "shear_probability", "convexity_ratio",
                    "jigsaw_merge_fraction", "value_noise", "value_scale"}
_RANGE_FIELDS = {"pixel_size_range", "random_points_range", "random_extent_range"}


def _gen_config_from(args) -> GenConfig:
    kwargs = {}
    if getattr(args, "config", None):
        for key, value in _load_config_file(args.config).items():
            if key == "value_kind":
                kwargs[key] = ValueKind(value)
            elif key in _FRACTION_FIELDS:
                kwargs[key] = Fraction(value)
            elif key in _RANGE_FIELDS:
                kwargs[key] = _parse_range(value)
            else:
                kwargs[key] = int(value)
    flag_map = {
        "seed": "seed", "n": "n_target", "t": "area_multiple_t",
        "convexity_ratio": "convexity_ratio", "lines": "jigsaw_line_count",
        "copies": "jigsaw_copies", "perturb": "jigsaw_perturb_amplitude",
        "pixel_range": "pixel_size_range", "shear_prob": "shear_probability",
        "value_kind": "value_kind", "value_noise": "value_noise",
        "value_scale": "value_scale",
    }
    for flag, field in flag_map.items():
        v = getattr(args, flag, None)
        if v is not None:
            kwargs[field] = v
    if getattr(args, "container", None):
        w, h = (int(p) for p in args.container.lower().split("x"))
        kwargs["container_width"] = w
        kwargs["container_height"] = h
    return GenConfig(**kwargs)


def cmd_generate(args) -> int:
    cfg = _gen_config_from(args)
    instance = FAMILIES[args.family](cfg)
    data = write_instance(instance)
    _emit(args, data, {
        "name": instance.name, "family": args.family, "n_items": instance.n_items,
        "total_value": sum(it.value for it in instance.items),
        "out": args.out,
    })
    _eprint(args, f"generated {instance.name}: {instance.n_items} items")
    return EXIT_OK


def cmd_value(args) -> int:
    instance = load_instance(args.instance)
    spec = ValueSpec(ValueKind(args.kind), Fraction(args.noise),
                     seed=args.seed or 0, global_scale=Fraction(args.scale))
    out = assign_values(instance, spec, record=not args.no_record)
    _emit(args, write_instance(out), {
        "name": out.name, "kind": args.kind,
        "total_value": sum(it.value for it in out.items), "out": args.out,
    })
    return EXIT_OK


def cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    moves = frozenset(Move(m) for m in args.moves.split(",")) if args.moves \
        else frozenset(Move)
    cfg = SolverConfig(
        ordering=Ordering(args.ordering),
        grid_levels=args.grid_levels,
        time_budget=args.budget,
        ls_moves=moves,
        seed=args.seed or 0,
        placement=PlacementMode.SHELF if args.shelf else PlacementMode.GRID,
    )
    started = time.monotonic()

    def progress(iteration, value):
        _eprint(args, f"iter {iteration}: value {value}")

    sol = solve(instance, cfg, progress=None if args.quiet else progress)
    elapsed = time.monotonic() - started
    report = verify(instance, sol)
    if not report.valid:  # the solver contract makes this unreachable
        _eprint(args, "internal error: solver emitted an invalid solution")
        return EXIT_INTERNAL
    data = write_solution(sol)
    _emit(args, data, {
        "instance": instance.name, "packed_value": report.packed_value,
        "n_placed": sol.n_placed, "n_items": instance.n_items,
        "elapsed_s": round(elapsed, 3), "out": args.out,
    })
    _eprint(args, f"packed {sol.n_placed}/{instance.n_items} items, "
                  f"value {report.packed_value}, {elapsed:.1f}s")
    return EXIT_OK


def cmd_verify(args) -> int:
    instance = load_instance(args.instance)
    try:
        solution = load_solution(args.solution)
        report = verify(instance, solution)
    except (ParseError, ValidationError, InstanceMismatch) as exc:
        print(json.dumps({
            "type": "cgshop2024_verification", "instance_name": instance.name,
            "valid": False, "packed_value": 0,
            "violation": {"kind": "InvalidFile", "detail": str(exc)},
        }))
        return EXIT_INVALID
    print(json.dumps(report.to_json_obj(instance.name)))
    return EXIT_OK if report.valid else EXIT_INVALID


def _instances_from_dir(path: str):
    files = sorted(Path(path).glob("*.json"))
    if not files:
        raise FileNotFoundError(f"no *.json instances under {path}")
    return [load_instance(f) for f in files]


def cmd_score(args) -> int:
    instances = _instances_from_dir(args.instances)
    records = read_records_csv(Path(args.records).read_bytes())
    board = build_leaderboard(records, [i.name for i in instances])
    print(json.dumps(board.to_json_obj()))
    _eprint(args, render_table(board))
    return EXIT_OK


def _metrics_worker(path: str):
    from .selection import compute_metrics
    inst = load_instance(path)
    return inst.name, compute_metrics(inst).values


def cmd_select(args) -> int:
    files = sorted(str(p) for p in Path(args.candidates).glob("*.json"))
    if not files:
        raise FileNotFoundError(f"no *.json instances under {args.candidates}")
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            named = list(pool.map(_metrics_worker, files))
    else:
        named = [_metrics_worker(f) for f in files]
    cfg = SelectionConfig(k=args.k, pca_components=args.pca_components,
                          seed=args.seed or 0, kmeans_restarts=args.restarts)
    import warnings
    with warnings.catch_warnings():
        if args.quiet:
            warnings.simplefilter("ignore")
        chosen = select_from_features(named, cfg)
    if args.features_csv:
        header = "name," + ",".join(METRIC_NAMES)
        rows = [name + "," + ",".join(f"{v:.9g}" for v in vals)
                for name, vals in sorted(named)]
        Path(args.features_csv).write_text("\n".join([header] + rows) + "\n")
        _eprint(args, f"feature matrix written to {args.features_csv}")
    print(json.dumps({"type": "cgshop2024_selection", "k": args.k,
                      "selected": chosen}))
    return EXIT_OK


def cmd_render(args) -> int:
    instance = load_instance(args.instance)
    solution = load_solution(args.solution) if args.solution else None
    spec = RenderSpec(instance, solution, scale=args.scale,
                      palette=args.palette, tray=args.tray, force=args.force)
    svg = render(spec)
    if args.out:
        Path(args.out).write_bytes(svg)
        print(json.dumps({"out": args.out, "bytes": len(svg)}))
    else:
        sys.stdout.write(svg.decode("utf-8"))
    return EXIT_OK


def _add_common(sp, out=True):
    sp.add_argument("--seed", type=int, default=None, help="random seed")
    sp.add_argument("--jobs", type=int, default=1,
                    help="parallelism across instances (used by select)")
    sp.add_argument("--quiet", action="store_true", help="suppress stderr chatter")
    if out:
        sp.add_argument("--out", "-o", default=None, help="output file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polypack",
        description="Maximum polygon packing toolkit: generate, solve, "
                    "verify, score, select, render.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a challenge instance")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("--n", type=int, default=None, help="target item count")
    p.add_argument("--t", type=_parse_fraction, default=None,
                   help="total-item-area multiple of container area, in [1,2]")
    p.add_argument("--convexity-ratio", dest="convexity_ratio",
                   type=_parse_fraction, default=None)
    p.add_argument("--lines", type=int, default=None, help="jigsaw cut lines")
    p.add_argument("--copies", type=int, default=None, help="jigsaw copies")
    p.add_argument("--perturb", type=int, default=None,
                   help="jigsaw perturbation amplitude (0 disables)")
    p.add_argument("--container", default=None, help="WxH for rectangular families")
    p.add_argument("--pixel-range", dest="pixel_range", type=_parse_range,
                   default=None, help="atris/satris pixel sizes, lo:hi")
    p.add_argument("--shear-prob", dest="shear_prob", type=_parse_fraction,
                   default=None)
    p.add_argument("--value-kind", dest="value_kind", type=ValueKind,
                   choices=list(ValueKind), default=None)
    p.add_argument("--value-noise", dest="value_noise", type=_parse_fraction,
                   default=None)
    p.add_argument("--value-scale", dest="value_scale", type=_parse_fraction,
                   default=None)
    p.add_argument("--config", default=None, help="key = value config file")
    _add_common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("value", help="re-assign item values on an instance")
    p.add_argument("instance")
    p.add_argument("--kind", default="area",
                   choices=[k.value for k in ValueKind])
    p.add_argument("--noise", default="0")
    p.add_argument("--scale", default="1")
    p.add_argument("--no-record", action="store_true",
                   help="do not record the value spec in instance meta")
    _add_common(p)
    p.set_defaults(func=cmd_value)

    p = sub.add_parser("solve", help="produce a feasible high-value packing")
    p.add_argument("instance")
    p.add_argument("--budget", type=float, default=60.0, help="seconds")
    p.add_argument("--ordering", default="density",
                   choices=[o.value for o in Ordering])
    p.add_argument("--grid-levels", dest="grid_levels", type=int, default=6)
    p.add_argument("--moves", default=None,
                   help="comma list of insert,relocate,swap,eject")
    p.add_argument("--shelf", action="store_true",
                   help="next-fit decreasing shelf placement (rect containers)")
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="exactly check a solution")
    p.add_argument("instance")
    p.add_argument("solution")
    _add_common(p, out=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("score", help="leaderboard from verified submission records")
    p.add_argument("--instances", required=True, help="directory of instance JSON")
    p.add_argument("--records", required=True,
                   help="CSV: team,instance,value,iso8601_timestamp")
    _add_common(p, out=False)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("select", help="curate a diverse benchmark subset")
    p.add_argument("--candidates", required=True, help="directory of instance JSON")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--pca-components", dest="pca_components", type=int, default=0)
    p.add_argument("--features-csv", dest="features_csv", default=None)
    _add_common(p, out=False)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("render", help="draw an instance (and solution) as SVG")
    p.add_argument("instance")
    p.add_argument("--solution", default=None)
    p.add_argument("--scale", type=float, default=1.0, help="pixels per grid unit")
    p.add_argument("--palette", default="default", choices=sorted(PALETTES))
    p.add_argument("--tray", action="store_true", help="draw unplaced items aside")
    p.add_argument("--force", action="store_true",
                   help="render even when the solution is invalid")
    _add_common(p)
    p.set_defaults(func=cmd_render)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except RenderOfInvalidSolution as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ParseError, ValidationError, ValueOverflow, UnknownInstance,
            InstanceMismatch, GenerationFailed, FileNotFoundError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
