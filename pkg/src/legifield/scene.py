"""Table-top world model: workspace bounds, disk objects, scene files, generators.

All lengths are in meters.  Objects are vertical cylinders described by a
planar center, a radius and a grasp height (the z at which the end effector
is considered to have reached the object).  Everything is immutable after
construction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, PlacementError, ValidationError

DEFAULT_RADIUS = 0.03
DEFAULT_GRASP_HEIGHT = 0.05

# Spacing of the evenly-spaced row generator.  Wide enough that the fitted
# position distribution of a 5-object row saturates the divergence clamp
# (xi = 1) in the default workspace.
DEFAULT_ROW_SPACING = 0.23

# Cluttered generator: positions are drawn from a Gaussian whose sigma is
# this fraction of the workspace width, so scenes come out genuinely bunched.
CLUTTER_SIGMA_FRACTION = 0.13

# Proposals farther than this fraction of the width from the workspace center
# are rejected outright; without the cap, rejection pressure from the packed
# core pushes accepted samples into the Gaussian tails and the scene stops
# measuring as cluttered.
CLUTTER_MAX_RADIUS_FRACTION = 0.23

# Objects are never placed closer than this (planar, surface-to-surface) to
# the end-effector start, so every plan begins outside all repulsive cores.
START_KEEPOUT = 0.05


@dataclass(frozen=True)
class WorkspaceBounds:
    """Axis-aligned table region plus the maximum end-effector height."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    z_max: float

    def __post_init__(self):
        if not (self.x_min < self.x_max):
            raise ValidationError(f"bounds: x_min={self.x_min} must be < x_max={self.x_max}")
        if not (self.y_min < self.y_max):
            raise ValidationError(f"bounds: y_min={self.y_min} must be < y_max={self.y_max}")
        if not (self.z_max > 0):
            raise ValidationError(f"bounds: z_max={self.z_max} must be > 0")

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return (0.5 * (self.x_min + self.x_max), 0.5 * (self.y_min + self.y_max))

    def contains_xy(self, x: float, y: float, inset: float = 0.0) -> bool:
        return (self.x_min + inset < x < self.x_max - inset
                and self.y_min + inset < y < self.y_max - inset)


DEFAULT_BOUNDS = WorkspaceBounds(0.0, 1.3, 0.0, 0.75, 0.5)


@dataclass(frozen=True)
class SceneObject:
    """One cylindrical table object."""

    id: int
    x: float
    y: float
    radius: float = DEFAULT_RADIUS
    grasp_height: float = DEFAULT_GRASP_HEIGHT

    def __post_init__(self):
        if self.radius <= 0:
            raise ValidationError(f"object {self.id}: radius={self.radius} must be > 0")
        if self.grasp_height < 0:
            raise ValidationError(f"object {self.id}: grasp_height={self.grasp_height} must be >= 0")

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)

    @property
    def grasp_point(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.grasp_height)


@dataclass(frozen=True)
class Scene:
    """Workspace, objects and the end-effector start position."""

    bounds: WorkspaceBounds
    objects: tuple[SceneObject, ...]
    start: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "start", tuple(float(v) for v in self.start))
        if len(self.start) != 3:
            raise ValidationError("start must be a 3-D point")
        if not self.objects:
            raise ValidationError("scene must contain at least one object")
        ids = [o.id for o in self.objects]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValidationError(f"duplicate object ids: {dupes}")
        for o in self.objects:
            if not self.bounds.contains_xy(o.x, o.y, inset=o.radius):
                raise ValidationError(
                    f"object {o.id} at ({o.x}, {o.y}) r={o.radius} is not strictly "
                    f"inside the workspace inflated inward by its radius")
        for i, a in enumerate(self.objects):
            for b in self.objects[i + 1:]:
                d = math.hypot(a.x - b.x, a.y - b.y)
                if d < a.radius + b.radius:
                    raise ValidationError(
                        f"objects {a.id} and {b.id} overlap "
                        f"(center distance {d:.4f} < {a.radius + b.radius:.4f})")
        if not (0.0 < self.start[2] <= self.bounds.z_max):
            raise ValidationError(
                f"start z={self.start[2]} must be in (0, z_max={self.bounds.z_max}]")

    def object_by_id(self, object_id: int) -> SceneObject:
        for o in self.objects:
            if o.id == object_id:
                return o
        raise KeyError(object_id)

    def has_object(self, object_id: int) -> bool:
        return any(o.id == object_id for o in self.objects)

    def positions(self) -> np.ndarray:
        """(N, 2) array of object centers, in scene order."""
        return np.array([[o.x, o.y] for o in self.objects], dtype=float)


# End effector start height.  Close to the default grasp height: the rank
# metric sections by arc length, so extra vertical travel shifts where each
# planner's section cut lands; starting near grasp height keeps the two
# planners' cuts planar-comparable.
DEFAULT_START_HEIGHT = 0.06


def _default_start(bounds: WorkspaceBounds) -> tuple[float, float, float]:
    # Behind the object area (high-y side, where an arm base would sit).
    # Keeping the start off the object row's axis avoids the symmetric
    # head-on stall of gradient descent on collinear layouts.
    cx, _ = bounds.center
    return (cx, bounds.y_max - 0.05 * bounds.height, DEFAULT_START_HEIGHT)


def _scene_dict(scene: Scene) -> dict:
    return {
        "bounds": {
            "x_min": scene.bounds.x_min,
            "x_max": scene.bounds.x_max,
            "y_min": scene.bounds.y_min,
            "y_max": scene.bounds.y_max,
            "z_max": scene.bounds.z_max,
        },
        "start": list(scene.start),
        "objects": [
            {"id": o.id, "x": o.x, "y": o.y, "radius": o.radius,
             "grasp_height": o.grasp_height}
            for o in scene.objects
        ],
    }


_BOUNDS_KEYS = {"x_min", "x_max", "y_min", "y_max", "z_max"}
_OBJECT_KEYS = {"id", "x", "y", "radius", "grasp_height"}


def _check_keys(mapping: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise ParseError(f"{where}: unknown key(s) {unknown}")
    missing = sorted(allowed - set(mapping))
    if missing:
        raise ParseError(f"{where}: missing key(s) {missing}")


def _num(mapping: dict, key: str, where: str) -> float:
    v = mapping[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{where}: field '{key}' must be a number, got {v!r}")
    return float(v)


def load_scene(path) -> Scene:
    """Load and validate a scene file (UTF-8 JSON, see `save_scene`)."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ParseError(f"file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None

    if not isinstance(raw, dict):
        raise ParseError(f"{path}: top level must be an object")
    _check_keys(raw, {"bounds", "start", "objects"}, str(path))

    b = raw["bounds"]
    if not isinstance(b, dict):
        raise ParseError(f"{path}: 'bounds' must be an object")
    _check_keys(b, _BOUNDS_KEYS, f"{path}: bounds")
    bounds = WorkspaceBounds(*(_num(b, k, f"{path}: bounds") for k in
                               ("x_min", "x_max", "y_min", "y_max", "z_max")))

    start = raw["start"]
    if not isinstance(start, list) or len(start) != 3:
        raise ParseError(f"{path}: 'start' must be a list [x, y, z]")
    start = tuple(_num({"v": v}, "v", f"{path}: start") for v in start)

    objs_raw = raw["objects"]
    if not isinstance(objs_raw, list):
        raise ParseError(f"{path}: 'objects' must be a list")
    objects = []
    for i, entry in enumerate(objs_raw):
        if not isinstance(entry, dict):
            raise ParseError(f"{path}: objects[{i}] must be an object")
        _check_keys(entry, _OBJECT_KEYS, f"{path}: objects[{i}]")
        oid = entry["id"]
        if isinstance(oid, bool) or not isinstance(oid, int):
            raise ParseError(f"{path}: objects[{i}]: 'id' must be an integer")
        objects.append(SceneObject(
            id=oid,
            x=_num(entry, "x", f"{path}: object {oid}"),
            y=_num(entry, "y", f"{path}: object {oid}"),
            radius=_num(entry, "radius", f"{path}: object {oid}"),
            grasp_height=_num(entry, "grasp_height", f"{path}: object {oid}"),
        ))
    return Scene(bounds=bounds, objects=tuple(objects), start=start)


def save_scene(scene: Scene, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_scene_dict(scene), fh, indent=2)
        fh.write("\n")


def generate_uncluttered_scene(spacing: float = DEFAULT_ROW_SPACING, n: int = 5,
                               bounds: WorkspaceBounds = DEFAULT_BOUNDS) -> Scene:
    """Evenly spaced row of `n` objects on the workspace center line.

    Deterministic; ids run 0..n-1 from low to high x.
    """
    if n < 2:
        raise ValidationError(f"uncluttered generator needs n >= 2, got {n}")
    if spacing <= 2 * DEFAULT_RADIUS:
        raise ValidationError(
            f"spacing={spacing} must exceed an object diameter ({2 * DEFAULT_RADIUS})")
    if n * spacing > bounds.width:
        raise ValidationError(
            f"{n} objects at spacing {spacing} do not fit in a "
            f"{bounds.width:.3f} m wide workspace")
    cx, cy = bounds.center
    half_span = 0.5 * (n - 1) * spacing
    objects = tuple(
        SceneObject(id=i, x=cx - half_span + i * spacing, y=cy)
        for i in range(n)
    )
    return Scene(bounds=bounds, objects=objects, start=_default_start(bounds))


def generate_cluttered_scene(n: int = 20, seed: int = 7, min_gap: float = 0.04,
                             bounds: WorkspaceBounds = DEFAULT_BOUNDS) -> Scene:
    """Seeded rejection sampling of `n` bunched, non-overlapping objects.

    Positions come from a Gaussian at the workspace center with
    sigma = CLUTTER_SIGMA_FRACTION * width, rejected when outside the inset
    workspace, overlapping a placed object (surface gap < min_gap) or inside
    the start keep-out disk.  Identical seed => identical scene.
    """
    if n < 1:
        raise ValidationError(f"cluttered generator needs n >= 1, got {n}")
    if min_gap < 0:
        raise ValidationError(f"min_gap={min_gap} must be >= 0")
    rng = np.random.default_rng(seed)
    cx, cy = bounds.center
    sigma = CLUTTER_SIGMA_FRACTION * bounds.width
    max_radius = CLUTTER_MAX_RADIUS_FRACTION * bounds.width
    start = _default_start(bounds)
    r = DEFAULT_RADIUS
    placed: list[tuple[float, float]] = []
    attempts = 0
    max_attempts_per_object = 20000
    for _ in range(n):
        for _ in range(max_attempts_per_object):
            attempts += 1
            x = rng.normal(cx, sigma)
            y = rng.normal(cy, sigma)
            if math.hypot(x - cx, y - cy) > max_radius:
                continue
            if not bounds.contains_xy(x, y, inset=r):
                continue
            if math.hypot(x - start[0], y - start[1]) < 2 * r + START_KEEPOUT:
                continue
            if any(math.hypot(x - px, y - py) < 2 * r + min_gap for px, py in placed):
                continue
            placed.append((x, y))
            break
        else:
            raise PlacementError(
                f"placed {len(placed)}/{n} objects after {attempts} attempts "
                f"(min_gap={min_gap})", attempts=attempts)
    objects = tuple(SceneObject(id=i, x=p[0], y=p[1]) for i, p in enumerate(placed))
    return Scene(bounds=bounds, objects=objects, start=start)


def nearest_object(scene: Scene, point) -> tuple[int, float]:
    """Object whose grasp point is 3-D closest to `point`; ties -> lowest id."""
    px, py, pz = (float(v) for v in point)
    best_id, best_d = None, math.inf
    for o in sorted(scene.objects, key=lambda o: o.id):
        d = math.sqrt((o.x - px) ** 2 + (o.y - py) ** 2 + (o.grasp_height - pz) ** 2)
        if d < best_d:
            best_id, best_d = o.id, d
    return best_id, best_d
