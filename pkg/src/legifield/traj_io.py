"""Trajectory CSV + metadata sidecar I/O.

CSV: header `k,x,y,z`, one waypoint per row, 6 decimal places.  The sidecar
(same basename, `.meta.json`) records planner tag, target id, converged flag,
xi and the full resolved config.  Output is byte-stable for identical inputs.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .errors import ParseError
from .trajectory import Trajectory


def meta_path(csv_path) -> str:
    base, _ = os.path.splitext(str(csv_path))
    return base + ".meta.json"


def write_trajectory(traj: Trajectory, csv_path, xi: float, config: dict) -> None:
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("k,x,y,z\n")
        for k, (x, y, z) in enumerate(traj.waypoints):
            fh.write(f"{k},{x:.6f},{y:.6f},{z:.6f}\n")
    meta = {
        "planner": traj.planner,
        "target": traj.target_id,
        "converged": traj.converged,
        "xi": round(float(xi), 9),
        "config": config,
    }
    with open(meta_path(csv_path), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_trajectory(csv_path) -> Trajectory:
    """Read a waypoint CSV; planner/target/converged come from the sidecar when present."""
    try:
        with open(csv_path, encoding="utf-8") as fh:
            lines = [row.strip() for row in fh if row.strip()]
    except FileNotFoundError:
        raise ParseError(f"file not found: {csv_path}") from None
    if not lines or lines[0] != "k,x,y,z":
        raise ParseError(f"{csv_path}: expected header 'k,x,y,z'")
    waypoints = []
    for i, row in enumerate(lines[1:], start=2):
        parts = row.split(",")
        if len(parts) != 4:
            raise ParseError(f"{csv_path}:{i}: expected 4 columns, got {len(parts)}")
        try:
            waypoints.append([float(parts[1]), float(parts[2]), float(parts[3])])
        except ValueError:
            raise ParseError(f"{csv_path}:{i}: non-numeric coordinate") from None
    if not waypoints:
        raise ParseError(f"{csv_path}: no waypoints")

    planner, target, converged = "unknown", -1, False
    mpath = meta_path(csv_path)
    if os.path.exists(mpath):
        try:
            with open(mpath, encoding="utf-8") as fh:
                meta = json.load(fh)
            planner = str(meta.get("planner", planner))
            target = int(meta.get("target", target))
            converged = bool(meta.get("converged", converged))
        except (json.JSONDecodeError, TypeError, ValueError) as exc:
            raise ParseError(f"{mpath}: invalid metadata ({exc})") from None
    return Trajectory(np.array(waypoints), planner, target, converged)
