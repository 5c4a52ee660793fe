"""Zero sets of sampled scalar fields.

`sample_field` evaluates the isoptic residual on a regular grid; nodes where
no branch applies (or the quotient is singular) are masked out together
with their branch label. `extract_contours` runs marching squares over the
unmasked cells and stitches the segments into polylines. When the field
carries its generating function, every vertex is refined by bisection along
its grid edge, and vertices that cannot be driven below the tolerance are
dropped (the polyline is split there).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .conics import ConicSpec, residual_xy
from .isoptics import (
    IsopticBranch,
    IsopticQuery,
    branch_level,
    common_tangents,
    residual_arrays,
    signed_root_arrays,
)

Window = Tuple[float, float, float, float]
Resolution = Union[int, Tuple[int, int]]

#: Default drawing window (model coordinates) and grid size.
DEFAULT_WINDOW: Window = (-2.0, 2.0, -2.0, 2.0)
DEFAULT_RESOLUTION = 512
CONTOUR_TOL = 1e-6
BISECTION_STEPS = 48
#: Band half-width around singular lines, as a fraction of the window size,
#: and the innermost offset traced inside it, relative to the half-width.
STRIP_FRACTION = 0.0125
STRIP_INNER = 1e-7
STRIP_OFFSETS = 96


@dataclass
class ScalarField:
    """Grid samples ``values[i, j]`` at ``(xs[i], ys[j])``.

    ``func(x, y)`` (optional) re-evaluates the field off the grid and returns
    ``(values, labels)``; ``labels`` (optional) tags each node, e.g. with its
    isoptic branch.
    """

    window: Window
    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray
    mask: np.ndarray
    labels: Optional[np.ndarray] = None
    func: Optional[Callable] = None

    @property
    def resolution(self) -> Tuple[int, int]:
        return len(self.xs), len(self.ys)


def _grid(window: Window, resolution: Resolution):
    xmin, xmax, ymin, ymax = window
    if not (xmin < xmax and ymin < ymax):
        raise ValueError(f"empty window {window}")
    nx, ny = (resolution, resolution) if isinstance(resolution, int) else resolution
    if nx < 2 or ny < 2:
        raise ValueError("resolution must be at least 2 in each direction")
    return np.linspace(xmin, xmax, nx), np.linspace(ymin, ymax, ny)


def field_from_function(
    func: Callable,
    window: Window,
    resolution: Resolution,
    workers: int = 1,
    refine: bool = True,
) -> ScalarField:
    """Sample ``func(x, y) -> values`` or ``-> (values, labels)`` on a grid.

    Non-finite values are masked. With ``workers > 1`` the rows are split
    into blocks evaluated concurrently and merged by index.
    """
    xs, ys = _grid(window, resolution)

    def evaluate(x, y):
        out = func(x, y)
        return out if isinstance(out, tuple) else (out, None)

    X, Y = np.meshgrid(xs, ys, indexing="ij")
    if workers > 1:
        blocks = np.array_split(np.arange(len(xs)), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda rows: evaluate(X[rows], Y[rows]), blocks))
        values = np.concatenate([p[0] for p in parts])
        labels = None if parts[0][1] is None else np.concatenate([p[1] for p in parts])
    else:
        values, labels = evaluate(X, Y)
    values = np.asarray(values, dtype=float)
    mask = np.isfinite(values)
    return ScalarField(window, xs, ys, values, mask, labels, evaluate if refine else None)


def sample_field(
    query: IsopticQuery,
    window: Window = DEFAULT_WINDOW,
    resolution: Resolution = DEFAULT_RESOLUTION,
    workers: int = 1,
) -> ScalarField:
    """Isoptic residual on a grid, labelled by branch and masked where invalid."""
    func = partial(residual_arrays, query.conic, query.alpha)
    field = field_from_function(func, window, resolution, workers)
    field.mask &= field.labels != IsopticBranch.Invalid
    return field


BRANCHES = (IsopticBranch.CoshBranch, IsopticBranch.CosBranch, IsopticBranch.SinhBranch)


def _level_func(conic: ConicSpec, offset: float, to_xy=None):
    def func(x, y):
        if to_xy is not None:
            x, y = to_xy(x, y)
        g, branch = signed_root_arrays(conic, x, y)
        return g - offset, branch

    return func


@dataclass(frozen=True)
class _Strip:
    """Frame ``p = c0 n + s d + t n`` along the line ``n . p = c0``."""

    n: np.ndarray
    d: np.ndarray
    c0: float

    @classmethod
    def from_line(cls, u) -> "_Strip":
        norm = float(np.hypot(u[0], u[1]))
        n = np.array([u[0], u[1]]) / norm
        return cls(n, np.array([-n[1], n[0]]), -float(u[2]) / norm)

    def to_xy(self, s, t):
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        x = self.c0 * self.n[0] + s * self.d[0] + t * self.n[0]
        y = self.c0 * self.n[1] + s * self.d[1] + t * self.n[1]
        return x, y

    def offset(self, x, y):
        return self.n[0] * x + self.n[1] * y - self.c0


def _in_window(window: Window, x, y):
    xmin, xmax, ymin, ymax = window
    return (x >= xmin) & (x <= xmax) & (y >= ymin) & (y <= ymax)


def _strip_grid(strip: _Strip, window: Window, resolution: Resolution, halfwidth: float):
    xmin, xmax, ymin, ymax = window
    corners = np.array([[xmin, ymin], [xmin, ymax], [xmax, ymin], [xmax, ymax]])
    proj = corners @ strip.d
    nx, _ = (resolution, resolution) if isinstance(resolution, int) else resolution
    cell = (xmax - xmin) / (nx - 1)
    ss = np.arange(proj.min(), proj.max() + cell / 2, cell / 2)
    # geometric spacing resolves arcs that run within 1e-4 of the line
    side = np.geomspace(STRIP_INNER * halfwidth, halfwidth, STRIP_OFFSETS)
    return ss, np.concatenate([-side[::-1], side])


def _trace_levels(base: ScalarField, query: IsopticQuery, tol: float, to_xy=None, keep=None):
    out = {b: [] for b in BRANCHES}
    for b in BRANCHES:
        level = branch_level(query.alpha, b)
        signs = (1, -1) if level > 1e-12 else (1,)
        for sign in signs:
            offset = sign * level
            field = ScalarField(
                base.window,
                base.xs,
                base.ys,
                base.values - offset,
                base.mask,
                base.labels,
                _level_func(query.conic, offset, to_xy),
            )
            # |lhs - rhs| = |g - offset| * |g + offset|
            out[b].extend(
                extract_contours(
                    field, label=int(b), tol=tol / (1 + 2 * level), transform=to_xy, keep=keep
                )
            )
    return out


def isoptic_contours(
    query: IsopticQuery,
    window: Window = DEFAULT_WINDOW,
    resolution: Resolution = DEFAULT_RESOLUTION,
    workers: int = 1,
    tol: float = CONTOUR_TOL,
    strips: bool = True,
) -> dict:
    """Polylines of the compound isoptic, keyed by branch.

    Each branch level ``g = +-sqrt(rhs)`` of the signed root ``g`` is traced
    over all valid nodes, and only vertices that refine to a point of that
    branch are kept. Tracing across branch boundaries (rather than only
    inside cells of a single branch) recovers the arcs that run within a
    cell width of a boundary. Every kept vertex has ``|lhs - rhs| < tol``.

    The quotient is singular along the boundary lines touching the conic,
    and isoptic arcs hug those lines far closer than any uniform grid can
    resolve. With `strips` on, a band around each such line is traced on
    its own grid (along the line by half cells, across it geometrically),
    and the regular grid only covers the rest.
    """
    xmin, xmax, ymin, ymax = window
    lines = [_Strip.from_line(u) for u in common_tangents(query.conic)] if strips else []
    halfwidth = STRIP_FRACTION * min(xmax - xmin, ymax - ymin)

    def outside_strips(x, y):
        ok = np.ones(np.shape(x), dtype=bool)
        for st in lines:
            ok &= np.abs(st.offset(x, y)) >= halfwidth
        return ok

    base = field_from_function(
        partial(signed_root_arrays, query.conic), window, resolution, workers, refine=False
    )
    base.mask &= base.labels != IsopticBranch.Invalid
    out = _trace_levels(base, query, tol, keep=outside_strips if lines else None)

    for k, st in enumerate(lines):
        ss, ts = _strip_grid(st, window, resolution, halfwidth)
        S, T = np.meshgrid(ss, ts, indexing="ij")
        X, Y = st.to_xy(S, T)
        g, labels = signed_root_arrays(query.conic, X, Y)
        mask = np.isfinite(g) & (labels != IsopticBranch.Invalid) & _in_window(window, X, Y)

        def nearest(x, y, k=k):
            # points in overlapping bands go to the closest line
            own = np.abs(lines[k].offset(x, y))
            ok = _in_window(window, x, y) & (own <= halfwidth)
            for m, other in enumerate(lines):
                if m != k:
                    ok &= own <= np.abs(other.offset(x, y))
            return ok

        field = ScalarField(window, ss, ts, g, mask, labels)
        for b, polys in _trace_levels(field, query, tol, st.to_xy, nearest).items():
            out[b].extend(polys)
    return out


def conic_field(
    conic: ConicSpec, window: Window = DEFAULT_WINDOW, resolution: Resolution = DEFAULT_RESOLUTION
) -> ScalarField:
    return field_from_function(partial(residual_xy, conic), window, resolution)


# segments per marching-squares case, as pairs of local edges:
# 0 bottom (c0-c1), 1 right (c1-c2), 2 top (c3-c2), 3 left (c0-c3)
_SEGMENTS = {
    1: [(3, 0)],
    2: [(0, 1)],
    3: [(3, 1)],
    4: [(1, 2)],
    6: [(0, 2)],
    7: [(2, 3)],
    8: [(2, 3)],
    9: [(0, 2)],
    11: [(1, 2)],
    12: [(1, 3)],
    13: [(0, 1)],
    14: [(3, 0)],
}
# saddles: (center positive, center not positive)
_SADDLES = {
    5: ([(0, 1), (2, 3)], [(3, 0), (1, 2)]),
    10: ([(3, 0), (1, 2)], [(0, 1), (2, 3)]),
}


def _edge_ids(nx: int, ny: int, i: np.ndarray, j: np.ndarray):
    """Global ids of the four edges of cells ``(i, j)``."""
    H = (nx - 1) * ny
    bottom = i * ny + j
    top = i * ny + j + 1
    left = H + i * (ny - 1) + j
    right = H + (i + 1) * (ny - 1) + j
    return [bottom, right, top, left]


def _edge_nodes(nx: int, ny: int, eid: np.ndarray):
    H = (nx - 1) * ny
    horiz = eid < H
    i0 = np.where(horiz, eid // ny, (eid - H) // (ny - 1))
    j0 = np.where(horiz, eid % ny, (eid - H) % (ny - 1))
    i1 = np.where(horiz, i0 + 1, i0)
    j1 = np.where(horiz, j0, j0 + 1)
    return i0, j0, i1, j1


def _segments(field: ScalarField, active: np.ndarray):
    v = field.values
    nx, ny = v.shape
    pos = v > 0
    cell_ok = active[:-1, :-1] & active[1:, :-1] & active[1:, 1:] & active[:-1, 1:]
    case = (
        pos[:-1, :-1].astype(np.int8)
        | (pos[1:, :-1].astype(np.int8) << 1)
        | (pos[1:, 1:].astype(np.int8) << 2)
        | (pos[:-1, 1:].astype(np.int8) << 3)
    )
    case = np.where(cell_ok, case, 0)
    with np.errstate(invalid="ignore"):
        center_pos = (v[:-1, :-1] + v[1:, :-1] + v[1:, 1:] + v[:-1, 1:]) > 0
    segs = []
    for c in range(1, 15):
        ci, cj = np.nonzero(case == c)
        if len(ci) == 0:
            continue
        edges = _edge_ids(nx, ny, ci, cj)
        if c in _SADDLES:
            cp = center_pos[ci, cj]
            for flag, pairs in zip((cp, ~cp), _SADDLES[c]):
                for a, b in pairs:
                    segs.append(np.column_stack([edges[a][flag], edges[b][flag]]))
        else:
            for a, b in _SEGMENTS[c]:
                segs.append(np.column_stack([edges[a], edges[b]]))
    if not segs:
        return np.empty((0, 2), dtype=np.int64)
    return np.concatenate(segs).astype(np.int64)


def _stitch(segs: np.ndarray) -> List[List[int]]:
    """Chain edge-id segments into ordered paths; closed loops repeat the start.

    Each grid edge borders two cells at most, so every id has degree 1 or 2
    and the components are simple paths or cycles.
    """
    adj: dict = {}
    for a, b in segs.tolist():
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen = set()

    def walk(start):
        path = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [n for n in adj[cur] if n != prev and n not in seen]
            if not nxt:
                if len(path) > 2 and start in adj[cur] and prev is not None:
                    path.append(start)
                return path
            prev, cur = cur, nxt[0]
            seen.add(cur)
            path.append(cur)

    paths = [walk(e) for e in adj if len(adj[e]) == 1 and e not in seen]
    paths += [walk(e) for e in adj if e not in seen]
    return paths


def _refine(field: ScalarField, eids: np.ndarray, label, tol: float):
    """Vertex positions for edge ids, plus a flag for vertices that pass `tol`."""
    nx, ny = field.values.shape
    i0, j0, i1, j1 = _edge_nodes(nx, ny, eids)
    p0 = np.column_stack([field.xs[i0], field.ys[j0]])
    p1 = np.column_stack([field.xs[i1], field.ys[j1]])
    f0 = field.values[i0, j0]
    f1 = field.values[i1, j1]
    t = f0 / (f0 - f1)
    t = np.clip(np.where(np.isfinite(t), t, 0.5), 0.0, 1.0)
    if field.func is None:
        ok = np.ones(len(eids), dtype=bool)
        if label is not None and field.labels is not None:
            ok = (field.labels[i0, j0] == label) & (field.labels[i1, j1] == label)
        return p0 + t[:, None] * (p1 - p0), ok

    s0 = f0 > 0
    lo = np.zeros(len(eids))
    hi = np.ones(len(eids))
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        pm = p0 + mid[:, None] * (p1 - p0)
        fm, _ = field.func(pm[:, 0], pm[:, 1])
        same = (fm > 0) == s0
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    candidates = []
    for tt in (lo, hi):
        pt = p0 + tt[:, None] * (p1 - p0)
        fv, lab = field.func(pt[:, 0], pt[:, 1])
        ok = np.isfinite(fv) & (np.abs(fv) < tol)
        if label is not None and lab is not None:
            ok &= lab == label
        candidates.append((pt, np.where(ok, np.abs(fv), np.inf), ok))
    (pa, ea, oka), (pb, eb, okb) = candidates
    use_b = eb < ea
    pts = np.where(use_b[:, None], pb, pa)
    return pts, oka | okb


def extract_contours(
    field: ScalarField,
    label=None,
    refine: bool = True,
    tol: float = CONTOUR_TOL,
    transform: Optional[Callable] = None,
    keep: Optional[Callable] = None,
) -> List[np.ndarray]:
    """Zero-level polylines of `field` as ``(k, 2)`` arrays of model coordinates.

    With `label` set, only vertices whose refined position carries that label
    are kept (without refinement: both end nodes of the vertex's edge). Saddle
    cells are resolved by the sign of the mean of their corners.

    Args:
        transform: maps grid coordinates ``(x, y)`` to model coordinates,
            for fields sampled in a local frame.
        keep: predicate on model coordinates; vertices failing it are
            dropped like unrefinable ones.
    """
    segs = _segments(field, field.mask)
    if len(segs) == 0:
        return []
    eids = np.unique(segs)
    src = field if refine else ScalarField(
        field.window, field.xs, field.ys, field.values, field.mask, field.labels
    )
    pts, good = _refine(src, eids, label, tol)
    if transform is not None:
        pts = np.column_stack(transform(pts[:, 0], pts[:, 1]))
    if keep is not None:
        good = good & keep(pts[:, 0], pts[:, 1])
    index = {e: k for k, e in enumerate(eids.tolist())}

    polylines = []
    for path in _stitch(segs):
        run: list = []
        for e in path:
            k = index[e]
            if good[k]:
                run.append(pts[k])
            else:
                if len(run) >= 2:
                    polylines.append(np.array(run))
                run = []
        if len(run) >= 2:
            polylines.append(np.array(run))
    return polylines


def arc_length(polylines: Sequence[np.ndarray]) -> float:
    return float(sum(np.sum(np.hypot(*np.diff(p, axis=0).T)) for p in polylines))
