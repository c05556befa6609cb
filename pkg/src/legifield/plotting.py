"""SVG rendering of scenes and trajectories: top-down view plus z-profile.

Plain handwritten SVG so plots stay textual, diffable and dependency-free.
"""

from __future__ import annotations

from .scene import Scene
from .trajectory import Trajectory

PANEL_W = 480
PANEL_H = 320
MARGIN = 30
GAP = 40

STYLE = {
    "potential_field": ("#1f77b4", "none"),
    "baseline": ("#808080", "6,4"),
}
FALLBACK_COLORS = ("#d62728", "#2ca02c", "#9467bd", "#8c564b")


def _style(tag: str, index: int) -> tuple[str, str]:
    if tag in STYLE:
        return STYLE[tag]
    return FALLBACK_COLORS[index % len(FALLBACK_COLORS)], "2,2"


def render_svg(scene: Scene, trajectories: list[Trajectory]) -> str:
    b = scene.bounds
    sx = (PANEL_W - 2 * MARGIN) / b.width
    sy = (PANEL_H - 2 * MARGIN) / b.height

    def top_xy(x, y):
        return (MARGIN + (x - b.x_min) * sx,
                PANEL_H - MARGIN - (y - b.y_min) * sy)

    total_h = PANEL_H * 2 + GAP
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{PANEL_W}" '
           f'height="{total_h}" viewBox="0 0 {PANEL_W} {total_h}">']

    targets = {t.target_id for t in trajectories}
    out.append('<g id="top-down">')
    out.append(f'<rect x="{MARGIN}" y="{MARGIN}" width="{PANEL_W - 2 * MARGIN}" '
               f'height="{PANEL_H - 2 * MARGIN}" fill="white" stroke="black"/>')
    for o in scene.objects:
        cx, cy = top_xy(o.x, o.y)
        fill = "#ffbf00" if o.id in targets else "#2ca02c"
        out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{o.radius * sx:.2f}" '
                   f'fill="{fill}" stroke="black" data-object-id="{o.id}"/>')
    scx, scy = top_xy(scene.start[0], scene.start[1])
    out.append(f'<circle cx="{scx:.2f}" cy="{scy:.2f}" r="4" fill="black"/>')
    for i, traj in enumerate(trajectories):
        color, dash = _style(traj.planner, i)
        pts = " ".join(f"{px:.2f},{py:.2f}" for px, py in
                       (top_xy(w[0], w[1]) for w in traj.waypoints))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                   f'stroke-width="1.5" stroke-dasharray="{dash}" '
                   f'data-planner="{traj.planner}"/>')
    out.append("</g>")

    y0 = PANEL_H + GAP
    max_arc = max((t.arc_length() for t in trajectories), default=1.0) or 1.0

    def prof_xy(arc, z):
        return (MARGIN + (arc / max_arc) * (PANEL_W - 2 * MARGIN),
                y0 + PANEL_H - MARGIN - (z / b.z_max) * (PANEL_H - 2 * MARGIN))

    out.append('<g id="z-profile">')
    out.append(f'<rect x="{MARGIN}" y="{y0 + MARGIN}" width="{PANEL_W - 2 * MARGIN}" '
               f'height="{PANEL_H - 2 * MARGIN}" fill="white" stroke="black"/>')
    for i, traj in enumerate(trajectories):
        color, dash = _style(traj.planner, i)
        arcs = traj.cumulative_arc()
        pts = " ".join(f"{px:.2f},{py:.2f}" for px, py in
                       (prof_xy(a, w[2]) for a, w in zip(arcs, traj.waypoints)))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                   f'stroke-width="1.5" stroke-dasharray="{dash}" '
                   f'data-planner="{traj.planner}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(scene: Scene, trajectories: list[Trajectory], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_svg(scene, trajectories))
