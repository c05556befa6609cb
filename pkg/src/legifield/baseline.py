"""Hover-and-drop baseline: rise, traverse high, drop vertically on the target.

Reconstruction of the state-of-the-art legible trajectory shape used for
comparison: the end effector stays high until it is over the goal, then
descends straight down.  Traverse step lengths scale with the remaining
planar distance (fast when far, slow when near).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnknownTargetError, ValidationError
from .scene import Scene
from .trajectory import PLANNER_BASELINE, Trajectory

# Minimum height margin between the hover plateau and the tallest grasp point.
HOVER_CLEARANCE = 0.02


@dataclass(frozen=True)
class BaselineConfig:
    hover_height: float = 0.35  # plateau height (m)
    step_len: float = 0.01      # waypoint spacing floor (m)
    speed_gain: float = 0.04    # step length per meter of remaining distance

    def validate(self, scene: Scene) -> None:
        if self.step_len <= 0:
            raise ValidationError("baseline: step_len must be > 0")
        if self.speed_gain <= 0:
            raise ValidationError("baseline: speed_gain must be > 0")
        if self.hover_height > scene.bounds.z_max:
            raise ValidationError(
                f"baseline: hover_height={self.hover_height} exceeds "
                f"z_max={scene.bounds.z_max}")
        top = max(o.grasp_height for o in scene.objects)
        if self.hover_height <= top + HOVER_CLEARANCE:
            raise ValidationError(
                f"baseline: hover_height={self.hover_height} must clear the "
                f"tallest grasp height ({top}) by more than {HOVER_CLEARANCE}")
        if scene.start[2] > self.hover_height:
            raise ValidationError(
                f"baseline: start z={scene.start[2]} is above "
                f"hover_height={self.hover_height}")


def _vertical_leg(x: float, y: float, z_from: float, z_to: float,
                  step_len: float) -> list[np.ndarray]:
    span = abs(z_to - z_from)
    if span < 1e-12:
        return []
    n = max(1, math.ceil(span / step_len))
    return [np.array([x, y, z]) for z in np.linspace(z_from, z_to, n + 1)[1:]]


def gen_baseline_traj(scene: Scene, target_id: int,
                      config: BaselineConfig | None = None) -> Trajectory:
    """Three phases: ascend to hover, traverse straight, drop to the grasp point."""
    config = config or BaselineConfig()
    if not scene.has_object(target_id):
        raise UnknownTargetError(f"target id {target_id} not in scene")
    config.validate(scene)
    target = scene.object_by_id(target_id)

    sx, sy, sz = scene.start
    waypoints = [np.array([sx, sy, sz])]
    waypoints += _vertical_leg(sx, sy, sz, config.hover_height, config.step_len)

    dx, dy = target.x - sx, target.y - sy
    remaining = math.hypot(dx, dy)
    if remaining > 1e-12:
        ux, uy = dx / remaining, dy / remaining
        x, y = sx, sy
        while remaining > 1e-12:
            step = min(remaining, max(config.step_len, config.speed_gain * remaining))
            x += ux * step
            y += uy * step
            remaining -= step
            waypoints.append(np.array([x, y, config.hover_height]))
        waypoints[-1] = np.array([target.x, target.y, config.hover_height])

    waypoints += _vertical_leg(target.x, target.y, config.hover_height,
                               target.grasp_height, config.step_len)
    waypoints[-1] = np.array(target.grasp_point)
    return Trajectory(np.array(waypoints), PLANNER_BASELINE, target_id,
                      converged=True)
