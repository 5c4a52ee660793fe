"""Scenes of a conic, the absolute and the compound isoptic, and their files.

The SVG and CSV writers are hand-rolled so that identical scenes give
byte-identical files; the PNG writer goes through matplotlib and is meant
for viewing, not for comparison.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .conics import ConicSpec, residual_xy
from .contours import (
    BRANCHES,
    CONTOUR_TOL,
    DEFAULT_RESOLUTION,
    DEFAULT_WINDOW,
    Resolution,
    Window,
    conic_field,
    extract_contours,
    isoptic_contours,
)
from .isoptics import IsopticBranch, IsopticQuery, residual_arrays

VIEWBOX = 1000
CIRCLE_SEGMENTS = 720

# stroke colours per layer; the absolute is drawn black
# and the conic dashed
STYLE = {
    "absolute": {"stroke": "#000000", "stroke-width": "2"},
    "conic": {"stroke": "#555555", "stroke-width": "1.5", "stroke-dasharray": "8,6"},
    IsopticBranch.CoshBranch.name: {"stroke": "#c0392b", "stroke-width": "1.5"},
    IsopticBranch.CosBranch.name: {"stroke": "#27ae60", "stroke-width": "1.5"},
    IsopticBranch.SinhBranch.name: {"stroke": "#2471a3", "stroke-width": "1.5"},
}


@dataclass
class Scene:
    """Polylines of one figure, in model coordinates."""

    conic: ConicSpec
    alpha: float
    window: Window
    resolution: Resolution
    absolute: List[np.ndarray] = field(default_factory=list)
    conic_curve: List[np.ndarray] = field(default_factory=list)
    branches: Dict[IsopticBranch, List[np.ndarray]] = field(default_factory=dict)

    def isoptic_polylines(self) -> List[np.ndarray]:
        return [p for b in BRANCHES for p in self.branches.get(b, [])]

    def vertex_count(self) -> int:
        return sum(len(p) for p in self.isoptic_polylines())

    def layers(self):
        yield "absolute", self.absolute
        yield "conic", self.conic_curve
        for b in BRANCHES:
            yield b.name, self.branches.get(b, [])


def unit_circle(segments: int = CIRCLE_SEGMENTS) -> np.ndarray:
    t = np.linspace(0.0, 2 * math.pi, segments + 1)
    pts = np.column_stack([np.cos(t), np.sin(t)])
    pts[-1] = pts[0]
    return pts


def _check_window(window: Window) -> None:
    xmin, xmax, ymin, ymax = window
    if not (xmin <= -1 and xmax >= 1 and ymin <= -1 and ymax >= 1):
        raise ValueError(f"window {window} must contain the unit disk")


def render_scene(
    conic: ConicSpec,
    alpha: float,
    window: Window = DEFAULT_WINDOW,
    resolution: Resolution = DEFAULT_RESOLUTION,
    workers: int = 1,
    tol: float = CONTOUR_TOL,
) -> Scene:
    """Trace the absolute, the conic and every isoptic branch.

    Args:
        conic: conic in normal form.
        alpha: viewing angle in ``(0, pi)``.
        window: ``(xmin, xmax, ymin, ymax)``; must contain the unit disk.
        resolution: grid nodes per axis (or a pair).
        workers: threads used for grid sampling.
        tol: bound on ``|lhs - rhs|`` at every isoptic vertex.
    """
    _check_window(window)
    query = IsopticQuery(conic, alpha)
    branches = isoptic_contours(query, window, resolution, workers, tol)
    cfield = conic_field(conic, window, resolution)
    scale = 1.0 + float(np.nanmax(np.abs(cfield.values)))
    curve = extract_contours(cfield, tol=1e-9 * scale)
    return Scene(conic, alpha, window, resolution, [unit_circle()], curve, branches)


def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def _to_view(window: Window, pts: np.ndarray) -> np.ndarray:
    xmin, xmax, ymin, ymax = window
    vx = (pts[:, 0] - xmin) / (xmax - xmin) * VIEWBOX
    vy = (ymax - pts[:, 1]) / (ymax - ymin) * VIEWBOX
    return np.column_stack([vx, vy])


def _path_data(window: Window, poly: np.ndarray) -> str:
    v = _to_view(window, poly)
    parts = [f"M{_fmt(v[0, 0])} {_fmt(v[0, 1])}"]
    parts += [f"L{_fmt(x)} {_fmt(y)}" for x, y in v[1:]]
    return " ".join(parts)


def scene_svg(scene: Scene) -> str:
    """SVG 1.1 text of the scene: one group of paths per layer, no text."""
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{VIEWBOX}" height="{VIEWBOX}" viewBox="0 0 {VIEWBOX} {VIEWBOX}">',
        f'<rect x="0" y="0" width="{VIEWBOX}" height="{VIEWBOX}" fill="#ffffff"/>',
    ]
    for name, polys in scene.layers():
        attrs = " ".join(f'{k}="{v}"' for k, v in STYLE[name].items())
        out.append(f'<g id="{name}" fill="none" {attrs}>')
        out.extend(f'<path d="{_path_data(scene.window, p)}"/>' for p in polys)
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def scene_csv(scene: Scene) -> str:
    """Isoptic polylines as ``branch,polyline,x,y`` rows, ids counted across branches."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["branch", "polyline", "x", "y"])
    pid = 0
    for b in BRANCHES:
        for poly in scene.branches.get(b, []):
            for x, y in poly:
                w.writerow([b.name, pid, f"{x:.9g}", f"{y:.9g}"])
            pid += 1
    return buf.getvalue()


def _write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_svg(scene: Scene, path) -> None:
    _write_text(path, scene_svg(scene))


def write_csv(scene: Scene, path) -> None:
    _write_text(path, scene_csv(scene))


def write_png(scene: Scene, path, title: Optional[str] = None, dpi: int = 150) -> None:
    """Matplotlib rendering of the scene (Agg backend, square axes)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 6))
    try:
        for p in scene.absolute:
            ax.plot(p[:, 0], p[:, 1], color="black", lw=1.2)
        for p in scene.conic_curve:
            ax.plot(p[:, 0], p[:, 1], color=STYLE["conic"]["stroke"], lw=1.0, ls="--")
        for b in BRANCHES:
            colour = STYLE[b.name]["stroke"]
            for k, p in enumerate(scene.branches.get(b, [])):
                ax.plot(p[:, 0], p[:, 1], color=colour, lw=1.0, label=b.name if k == 0 else None)
        xmin, xmax, ymin, ymax = scene.window
        ax.set_xlim(xmin, xmax)
        ax.set_ylim(ymin, ymax)
        ax.set_aspect("equal")
        if any(scene.branches.get(b) for b in BRANCHES):
            ax.legend(loc="upper right", fontsize=8)
        ax.set_title(title or f"{scene.conic}, alpha = {scene.alpha:.6g}", fontsize=10)
        fig.savefig(path, dpi=dpi, metadata={"Software": None})
    finally:
        plt.close(fig)


def vertex_residuals(scene: Scene) -> np.ndarray:
    """``|lhs - rhs|`` re-evaluated at every isoptic vertex of the scene."""
    res = []
    for b in BRANCHES:
        for p in scene.branches.get(b, []):
            r, lab = residual_arrays(scene.conic, scene.alpha, p[:, 0], p[:, 1])
            res.append(np.where(lab == int(b), np.abs(r), np.inf))
    return np.concatenate(res) if res else np.empty(0)


def conic_vertex_residuals(scene: Scene) -> np.ndarray:
    res = [np.abs(residual_xy(scene.conic, p[:, 0], p[:, 1])) for p in scene.conic_curve]
    return np.concatenate(res) if res else np.empty(0)
