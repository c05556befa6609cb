"""End-effector trajectory container shared by the planners."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

PLANNER_POTENTIAL_FIELD = "potential_field"
PLANNER_BASELINE = "baseline"


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Ordered 3-D waypoints of the end effector."""

    waypoints: np.ndarray   # (N, 3)
    planner: str            # PLANNER_POTENTIAL_FIELD | PLANNER_BASELINE
    target_id: int
    converged: bool

    def __post_init__(self):
        wps = np.asarray(self.waypoints, dtype=float).reshape(-1, 3)
        if wps.shape[0] < 1:
            raise ValueError("trajectory needs at least one waypoint")
        wps.flags.writeable = False
        object.__setattr__(self, "waypoints", wps)

    def __len__(self) -> int:
        return self.waypoints.shape[0]

    def step_lengths(self) -> np.ndarray:
        """(N-1,) segment lengths."""
        if len(self) < 2:
            return np.zeros(0)
        return np.linalg.norm(np.diff(self.waypoints, axis=0), axis=1)

    def cumulative_arc(self) -> np.ndarray:
        """(N,) arc length from the start to each waypoint."""
        return np.concatenate([[0.0], np.cumsum(self.step_lengths())])

    def arc_length(self) -> float:
        return float(self.step_lengths().sum())

    def max_z(self) -> float:
        return float(self.waypoints[:, 2].max())

    @property
    def endpoint(self) -> np.ndarray:
        return self.waypoints[-1]

    def with_waypoints(self, waypoints, converged=None) -> "Trajectory":
        return replace(self, waypoints=np.array(waypoints, dtype=float),
                       converged=self.converged if converged is None else converged)
