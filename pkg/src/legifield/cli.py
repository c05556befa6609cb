"""Command-line front end: measure, plan, compare, plot, gen.

Exit codes: 0 success, 2 invalid input, 3 planner non-convergence.
Configuration resolves defaults < --config file < command-line flags; the
resolved config is echoed into every trajectory metadata sidecar.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, fields

from . import plotting, traj_io
from .baseline import BaselineConfig, gen_baseline_traj
from .clutter import clutteredness
from .errors import LegifieldError, LocalMinimumError, ParseError, ValidationError
from .fields import FieldConfig, gen_legible_traj
from .legibility import (OBSERVER_POINT_POSITION, OBSERVER_VELOCITY,
                         compare_planners, format_report)
from .scene import (generate_cluttered_scene, generate_uncluttered_scene,
                    load_scene, save_scene)
from .trajectory import PLANNER_BASELINE, PLANNER_POTENTIAL_FIELD

SEED_ENV_VAR = "LEGIFIELD_SEED"
DEFAULT_SEED = 7

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_CONVERGE = 3

_OBSERVER_NAMES = {
    "point-position": OBSERVER_POINT_POSITION,
    "velocity": OBSERVER_VELOCITY,
}
_PLANNER_NAMES = {"pf": PLANNER_POTENTIAL_FIELD, "baseline": PLANNER_BASELINE}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved planner + evaluation configuration."""

    field: FieldConfig
    baseline: BaselineConfig
    n_sections: int = 2
    observer: str = OBSERVER_POINT_POSITION
    seed: int = DEFAULT_SEED

    def to_dict(self) -> dict:
        return {
            "field": asdict(self.field),
            "baseline": asdict(self.baseline),
            "n_sections": self.n_sections,
            "observer": self.observer,
            "seed": self.seed,
        }


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"{SEED_ENV_VAR}={raw!r} is not an integer") from None


_FIELD_KEYS = {f.name for f in fields(FieldConfig)}
_BASELINE_KEYS = {f.name for f in fields(BaselineConfig)}
_TOP_KEYS = {"n_sections", "observer", "seed"}


def resolve_config(config_path: str | None, overrides: dict | None = None) -> RunConfig:
    """defaults < config file (flat JSON keys) < explicit overrides."""
    values: dict = {}
    if config_path:
        try:
            with open(config_path, encoding="utf-8") as fh:
                values = json.load(fh)
        except FileNotFoundError:
            raise ParseError(f"config file not found: {config_path}") from None
        except json.JSONDecodeError as exc:
            raise ParseError(f"{config_path}: invalid JSON ({exc})") from None
        if not isinstance(values, dict):
            raise ParseError(f"{config_path}: top level must be an object")
        unknown = sorted(set(values) - _FIELD_KEYS - _BASELINE_KEYS - _TOP_KEYS)
        if unknown:
            raise ParseError(f"{config_path}: unknown config key(s) {unknown}")
    for k, v in (overrides or {}).items():
        if v is not None:
            values[k] = v

    field_cfg = FieldConfig(**{k: values[k] for k in values if k in _FIELD_KEYS})
    base_cfg = BaselineConfig(**{k: values[k] for k in values if k in _BASELINE_KEYS})
    observer = values.get("observer", OBSERVER_POINT_POSITION)
    if observer in _OBSERVER_NAMES:
        observer = _OBSERVER_NAMES[observer]
    seed = values["seed"] if "seed" in values else _default_seed()
    return RunConfig(field=field_cfg, baseline=base_cfg,
                     n_sections=int(values.get("n_sections", 2)),
                     observer=observer, seed=int(seed))


def cmd_measure(args) -> int:
    scene = load_scene(args.scene)
    result = clutteredness(scene)
    print(f"scene={args.scene} xi={result.xi:.6f} D={result.divergence:.6f}")
    return EXIT_OK


def cmd_plan(args) -> int:
    cfg = resolve_config(args.config)
    scene = load_scene(args.scene)
    xi = clutteredness(scene).xi if len(scene.objects) >= 2 else 1.0
    planner = _PLANNER_NAMES[args.planner]
    if planner == PLANNER_BASELINE:
        traj = gen_baseline_traj(scene, args.target, cfg.baseline)
    else:
        try:
            traj = gen_legible_traj(scene, args.target, cfg.field)
        except LocalMinimumError as exc:
            traj_io.write_trajectory(exc.partial_trajectory, args.out, xi, cfg.to_dict())
            print(f"non-converged (local minimum): partial trajectory written to "
                  f"{args.out}", file=sys.stderr)
            return EXIT_NO_CONVERGE
    traj_io.write_trajectory(traj, args.out, xi, cfg.to_dict())
    print(f"wrote {args.out} ({len(traj)} waypoints, converged={traj.converged})")
    return EXIT_OK if traj.converged else EXIT_NO_CONVERGE


def _parse_targets(spec: str, scene) -> list[int]:
    if spec == "all":
        return [o.id for o in scene.objects]
    try:
        return [int(tok) for tok in spec.split(",") if tok.strip() != ""]
    except ValueError:
        raise ValidationError(f"--targets must be 'all' or comma-separated ids, "
                              f"got {spec!r}") from None


def cmd_compare(args) -> int:
    cfg = resolve_config(args.config, {
        "n_sections": args.sections,
        "observer": args.observer,
    })
    scene = load_scene(args.scene)
    targets = _parse_targets(args.targets, scene)
    report = compare_planners(scene, targets, n_sections=cfg.n_sections,
                              observer=cfg.observer, field_config=cfg.field,
                              baseline_config=cfg.baseline, scene_path=str(args.scene))
    if not report.cells:
        print("all comparison cells failed", file=sys.stderr)
        return EXIT_INPUT
    payload = report.to_dict()
    payload["config"] = cfg.to_dict()
    with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    sys.stdout.write(format_report(report))
    return EXIT_OK


def cmd_plot(args) -> int:
    scene = load_scene(args.scene)
    trajectories = [traj_io.read_trajectory(p) for p in args.trajectories]
    plotting.write_svg(scene, trajectories, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_gen(args) -> int:
    cfg = resolve_config(args.config, {"seed": args.seed})
    if args.kind == "uncluttered":
        n = args.n if args.n is not None else 5
        scene = (generate_uncluttered_scene(spacing=args.spacing, n=n)
                 if args.spacing is not None else generate_uncluttered_scene(n=n))
        desc = f"uncluttered n={n}"
    else:
        n = args.n if args.n is not None else 20
        min_gap = args.min_gap if args.min_gap is not None else 0.015
        scene = generate_cluttered_scene(n=n, seed=cfg.seed, min_gap=min_gap)
        desc = f"cluttered n={n} seed={cfg.seed}"
    save_scene(scene, args.out)
    print(f"wrote {args.out} ({desc})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="legifield",
        description="Clutter measurement and legible grasp trajectory planning")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="print the clutteredness of a scene")
    p.add_argument("scene")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("plan", help="plan one trajectory and write CSV + sidecar")
    p.add_argument("scene")
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--planner", choices=sorted(_PLANNER_NAMES), default="pf")
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("compare", help="score both planners with a simulated observer")
    p.add_argument("scene")
    p.add_argument("--targets", default="all", help="'all' or comma-separated ids")
    p.add_argument("--sections", type=int, default=None)
    p.add_argument("--observer", choices=sorted(_OBSERVER_NAMES), default=None)
    p.add_argument("--report", required=True)
    p.add_argument("--config")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plot", help="render trajectories over a scene as SVG")
    p.add_argument("trajectories", nargs="+")
    p.add_argument("--scene", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("gen", help="write a generated scene file")
    p.add_argument("kind", choices=["uncluttered", "cluttered"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--spacing", type=float, default=None)
    p.add_argument("--min-gap", dest="min_gap", type=float, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LocalMinimumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGE
    except LegifieldError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
