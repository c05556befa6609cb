"""Simulated-observer legibility scoring.

Trajectories are cut into cumulative arc-length sections; after each section
a mechanical observer produces a ranked guess of the target, and the guess is
scored by summing the planar distances of wrongly guessed objects to the true
target until the target comes up.  Lower is better; 0 means the first guess
was right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .baseline import BaselineConfig, gen_baseline_traj
from .errors import (LegifieldError, TargetUnrankedError, TooFewWaypointsError,
                     ValidationError)
from .fields import FieldConfig, gen_legible_traj
from .scene import Scene
from .trajectory import PLANNER_BASELINE, PLANNER_POTENTIAL_FIELD, Trajectory

OBSERVER_POINT_POSITION = "point_position"
OBSERVER_VELOCITY = "velocity_extrapolation"
OBSERVERS = (OBSERVER_POINT_POSITION, OBSERVER_VELOCITY)

MAX_RANKS = 5


@dataclass(frozen=True)
class RankedGuess:
    section: int
    ranked_ids: tuple[int, ...]  # rank 1 first


@dataclass(frozen=True)
class ComparisonCell:
    target_id: int
    planner: str
    section: int
    rank_distance: float
    ranked_ids: tuple[int, ...]


@dataclass(frozen=True)
class ComparisonReport:
    scene_path: str
    observer: str
    n_sections: int
    cells: tuple[ComparisonCell, ...]
    summary: tuple[dict, ...]       # one entry per (planner, section)
    failures: tuple[dict, ...] = field(default_factory=tuple)

    def mean(self, planner: str, section: int) -> float:
        for row in self.summary:
            if row["planner"] == planner and row["section"] == section:
                return row["mean"]
        raise KeyError((planner, section))

    def cell(self, target_id: int, planner: str, section: int) -> ComparisonCell:
        for c in self.cells:
            if (c.target_id, c.planner, c.section) == (target_id, planner, section):
                return c
        raise KeyError((target_id, planner, section))

    def to_dict(self) -> dict:
        return {
            "scene": self.scene_path,
            "observer": self.observer,
            "n_sections": self.n_sections,
            "cells": [
                {"target": c.target_id, "planner": c.planner, "section": c.section,
                 "rank_distance": c.rank_distance, "ranked_ids": list(c.ranked_ids)}
                for c in self.cells
            ],
            "summary": list(self.summary),
            "failures": list(self.failures),
        }


def section_trajectory(traj: Trajectory, n_sections: int) -> list[Trajectory]:
    """Cumulative prefixes cut at arc-length fractions k/n_sections.

    Each cut lands on the last waypoint at or before its fraction; cuts are
    strictly nested and the final prefix is the whole trajectory.
    """
    if n_sections < 1:
        raise ValidationError(f"n_sections={n_sections} must be >= 1")
    n_wp = len(traj)
    if n_wp < n_sections:
        raise TooFewWaypointsError(
            f"trajectory has {n_wp} waypoints, cannot cut {n_sections} sections")
    cum = traj.cumulative_arc()
    total = cum[-1]
    cuts = []
    for k in range(1, n_sections + 1):
        if k == n_sections or total <= 0:
            idx = n_wp - 1
        else:
            idx = int(np.searchsorted(cum, (k / n_sections) * total + 1e-12,
                                      side="right") - 1)
        if cuts:
            idx = max(idx, cuts[-1] + 1)
        cuts.append(min(idx, n_wp - 1))
    for k in range(n_sections - 2, -1, -1):  # restore strict nesting at the tail
        cuts[k] = min(cuts[k], cuts[k + 1] - 1)
    return [
        traj.with_waypoints(traj.waypoints[:idx + 1],
                            converged=traj.converged and idx == n_wp - 1)
        for idx in cuts
    ]


def _point_ray_distance(point: np.ndarray, origin: np.ndarray,
                        direction: np.ndarray) -> float:
    t = max(0.0, float(np.dot(point - origin, direction)))
    return float(np.linalg.norm(point - (origin + t * direction)))


def observer_rank(scene: Scene, prefix: Trajectory, observer: str,
                  section: int = 0) -> RankedGuess:
    """Ranked guess (top min(5, #objects)) after watching `prefix`.

    point_position ranks objects by 3-D distance from the prefix endpoint to
    their grasp points; velocity_extrapolation ranks by distance to the ray
    cast from the endpoint along the final step direction (ties broken by
    endpoint distance).  Remaining ties go to the lowest id.
    """
    if observer not in OBSERVERS:
        raise ValidationError(f"unknown observer {observer!r}, expected one of {OBSERVERS}")
    end = prefix.endpoint
    grasps = {o.id: np.array(o.grasp_point) for o in scene.objects}
    end_d = {i: float(np.linalg.norm(g - end)) for i, g in grasps.items()}

    if observer == OBSERVER_POINT_POSITION or len(prefix) < 2:
        keys = {i: (end_d[i], i) for i in grasps}
    else:
        step = end - prefix.waypoints[-2]
        norm = float(np.linalg.norm(step))
        if norm < 1e-12:
            keys = {i: (end_d[i], i) for i in grasps}
        else:
            u = step / norm
            keys = {i: (_point_ray_distance(g, end, u), end_d[i], i)
                    for i, g in grasps.items()}
    order = sorted(grasps, key=lambda i: keys[i])
    return RankedGuess(section=section,
                       ranked_ids=tuple(order[:min(MAX_RANKS, len(order))]))


def rank_distance(scene: Scene, guess: RankedGuess, target_id: int) -> float:
    """Sum of planar distances from each wrong guess to the target, in rank
    order, stopping at the target.  0 iff the target is rank 1."""
    target = scene.object_by_id(target_id)
    total = 0.0
    for oid in guess.ranked_ids:
        if oid == target_id:
            return total
        o = scene.object_by_id(oid)
        total += math.hypot(o.x - target.x, o.y - target.y)
    raise TargetUnrankedError(
        f"target {target_id} absent from ranked list {list(guess.ranked_ids)}",
        ranked_ids=guess.ranked_ids)


def _cell_score(scene: Scene, guess: RankedGuess, target_id: int) -> float:
    """rank_distance, extended: an observer who never names the target scores
    the sum over all wrong guesses (as if the target came right after the
    list).  Keeps every comparison cell scoreable in crowded scenes."""
    try:
        return rank_distance(scene, guess, target_id)
    except TargetUnrankedError:
        target = scene.object_by_id(target_id)
        return sum(
            math.hypot(scene.object_by_id(oid).x - target.x,
                       scene.object_by_id(oid).y - target.y)
            for oid in guess.ranked_ids)


_PLANNERS = {
    PLANNER_POTENTIAL_FIELD: lambda scene, tid, fc, bc: gen_legible_traj(scene, tid, fc),
    PLANNER_BASELINE: lambda scene, tid, fc, bc: gen_baseline_traj(scene, tid, bc),
}


def compare_planners(scene: Scene, targets, n_sections: int = 2,
                     observer: str = OBSERVER_POINT_POSITION,
                     field_config: FieldConfig | None = None,
                     baseline_config: BaselineConfig | None = None,
                     scene_path: str = "") -> ComparisonReport:
    """Plan, section, observe and score each target with both planners.

    Per-target planner failures are recorded in the report instead of
    aborting the batch.  Deterministic for fixed inputs.
    """
    targets = list(targets)
    if not targets:
        raise ValidationError("compare: need at least one target")
    for t in targets:
        if not scene.has_object(t):
            raise ValidationError(f"compare: unknown target id {t}")
    field_config = field_config or FieldConfig()
    baseline_config = baseline_config or BaselineConfig()

    cells: list[ComparisonCell] = []
    failures: list[dict] = []
    for tid in targets:
        for planner in (PLANNER_POTENTIAL_FIELD, PLANNER_BASELINE):
            try:
                traj = _PLANNERS[planner](scene, tid, field_config, baseline_config)
                for k, prefix in enumerate(section_trajectory(traj, n_sections), start=1):
                    guess = observer_rank(scene, prefix, observer, section=k)
                    score = _cell_score(scene, guess, tid)
                    cells.append(ComparisonCell(tid, planner, k, score,
                                                guess.ranked_ids))
            except LegifieldError as exc:
                failures.append({"target": tid, "planner": planner,
                                 "error": f"{type(exc).__name__}: {exc}"})

    summary = []
    for planner in (PLANNER_POTENTIAL_FIELD, PLANNER_BASELINE):
        for k in range(1, n_sections + 1):
            scores = [c.rank_distance for c in cells
                      if c.planner == planner and c.section == k]
            if scores:
                summary.append({"planner": planner, "section": k,
                                "mean": sum(scores) / len(scores),
                                "count": len(scores)})
    return ComparisonReport(scene_path=scene_path, observer=observer,
                            n_sections=n_sections, cells=tuple(cells),
                            summary=tuple(summary), failures=tuple(failures))


def format_report(report: ComparisonReport) -> str:
    """Aligned plain-text tables: per-(planner, section) means, then per-target."""
    lines = [f"scene={report.scene_path} observer={report.observer} "
             f"sections={report.n_sections}"]
    lines.append(f"{'planner':<16} {'section':>7} {'mean_rank_dist':>14} {'count':>5}")
    for row in report.summary:
        lines.append(f"{row['planner']:<16} {row['section']:>7} "
                     f"{row['mean']:>14.6f} {row['count']:>5}")
    lines.append("")
    lines.append(f"{'target':>6} {'planner':<16} " +
                 " ".join(f"{'s' + str(k):>10}" for k in range(1, report.n_sections + 1)))
    seen = sorted({c.target_id for c in report.cells})
    for tid in seen:
        for planner in (PLANNER_POTENTIAL_FIELD, PLANNER_BASELINE):
            row = [f"{tid:>6}", f"{planner:<16}"]
            for k in range(1, report.n_sections + 1):
                try:
                    row.append(f"{report.cell(tid, planner, k).rank_distance:>10.4f}")
                except KeyError:
                    row.append(f"{'-':>10}")
            lines.append(" ".join(row))
    for f in report.failures:
        lines.append(f"FAILED target={f['target']} planner={f['planner']}: {f['error']}")
    return "\n".join(lines) + "\n"
