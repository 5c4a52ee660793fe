"""Command-line front end.

Every subcommand prints one record. The default ``kv`` format is a single
line of ``key=value`` pairs in a fixed order, reals with 9 significant
digits; ``csv`` prints a header line and a value line; ``human`` prints an
aligned two-column table. ``report`` prints one record per figure preset.

Exit status: 0 on success, 1 on geometric errors (e.g. a point with no real
tangents), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .angles import generalized_angle
from .conics import ConicSpec, Family, classify, dual, matrices
from .contours import DEFAULT_RESOLUTION, DEFAULT_WINDOW, arc_length
from .errors import GeometryError, InvalidRegion
from .figures import PRESETS
from .isoptics import (
    IsopticBranch,
    IsopticQuery,
    classify_branch,
    isoptic_angle_direct,
    isoptic_lhs,
    rhs,
    squared_measure,
)
from .render import render_scene, vertex_residuals, write_csv, write_png, write_svg
from .tangents import tangent_pair

Record = List[Tuple[str, object]]


class UsageError(Exception):
    pass


def _reals(text: str, count: int, what: str) -> Tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != count:
        raise argparse.ArgumentTypeError(f"{what} needs {count} comma-separated reals, got {text!r}")
    try:
        values = tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{what}: not a decimal real in {text!r}") from None
    if not all(math.isfinite(v) for v in values):
        raise argparse.ArgumentTypeError(f"{what}: values must be finite")
    return values


def _point(text):
    return _reals(text, 2, "--point")


def _triple(text):
    return _reals(text, 3, "line")


def _window(text):
    return _reals(text, 4, "--window")


def _real(text):
    return _reals(text, 1, "number")[0]


def fmt(value) -> str:
    """Locale-free text of a value; reals with 9 significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if v == 0:
            return "0"
        return f"{v:.9g}"
    if isinstance(value, (tuple, list, np.ndarray)):
        return ",".join(fmt(v) for v in value)
    return str(value)


def emit(record: Record, style: str, out, header: bool = True) -> None:
    if style == "kv":
        out.write(" ".join(f"{k}={fmt(v)}" for k, v in record) + "\n")
    elif style == "csv":
        if header:
            out.write(",".join(k for k, _ in record) + "\n")
        out.write(",".join(_csv_cell(fmt(v)) for _, v in record) + "\n")
    else:
        width = max(len(k) for k, _ in record)
        for k, v in record:
            out.write(f"{k.ljust(width)}  {fmt(v)}\n")


def _csv_cell(text: str) -> str:
    return f'"{text}"' if "," in text else text


def _conic(args) -> ConicSpec:
    if args.family is None or args.a is None:
        raise UsageError("--family and --a are required")
    family = Family(args.family)
    if family is Family.OsculatingParabola:
        if args.b is not None:
            raise UsageError("the osculating family takes --a only")
        return ConicSpec(family, args.a)
    if args.b is None:
        raise UsageError(f"--b is required for the {family.value} family")
    return ConicSpec(family, args.a, args.b)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join(f"--{n}" for n in missing))


def _line(u) -> Tuple[float, float, float]:
    u = np.asarray(u, dtype=float)
    return tuple(u / np.max(np.abs(u)))


def cmd_classify(args) -> Record:
    spec = _conic(args)
    return [("class", classify(spec).value)]


def cmd_dual(args) -> Record:
    d = dual(_conic(args))
    rec: Record = [("family", d.family.value), ("a", d.a)]
    if d.b is not None:
        rec.append(("b", d.b))
    return rec


def cmd_matrices(args) -> Record:
    m = matrices(_conic(args))
    return [("point", m.point_matrix.ravel()), ("line", m.line_matrix.ravel())]


def cmd_tangents(args) -> Record:
    _need(args, "point")
    pair = tangent_pair(_conic(args), args.point)
    return [
        ("u", _line(pair.u)),
        ("v", _line(pair.v)),
        ("coincident", pair.coincident),
        ("method", pair.method),
    ]


def cmd_angle(args) -> Record:
    _need(args, "u", "v")
    ang = generalized_angle(args.u, args.v)
    value = "none" if ang.value is None else float(ang.value)
    return [("kind", ang.kind.value), ("value", value), ("formula", ang.which_formula.value)]


def _branch_record(args) -> Tuple[ConicSpec, IsopticBranch]:
    _need(args, "point")
    spec = _conic(args)
    branch = classify_branch(spec, args.point)
    if branch is IsopticBranch.Invalid:
        raise InvalidRegion(f"{fmt(args.point)} is not in any branch region of {spec}")
    return spec, branch


def cmd_isoptic(args) -> Record:
    _need(args, "alpha")
    spec, branch = _branch_record(args)
    IsopticQuery(spec, args.alpha, args.point)
    lhs = isoptic_lhs(spec, args.point)
    r = rhs(args.alpha, branch)
    return [("branch", branch.name), ("lhs", lhs), ("rhs", r), ("residual", lhs - r)]


def cmd_oracle(args) -> Record:
    spec, branch = _branch_record(args)
    ang = isoptic_angle_direct(spec, args.point)
    lhs = isoptic_lhs(spec, args.point)
    direct = squared_measure(ang, branch)
    return [
        ("branch", branch.name),
        ("kind", ang.kind.value),
        ("angle", ang.value),
        ("lhs", lhs),
        ("direct", direct),
        ("deviation", abs(lhs - direct)),
    ]


def _stem(path: str) -> str:
    root, ext = os.path.splitext(path)
    return root if ext.lower() == ".svg" else path


def cmd_render(args) -> Record:
    _need(args, "alpha", "out")
    spec = _conic(args)
    scene = render_scene(spec, args.alpha, args.window, args.resolution, args.workers)
    write_svg(scene, args.out)
    rec: Record = [("svg", args.out)]
    if args.csv:
        path = _stem(args.out) + ".csv"
        write_csv(scene, path)
        rec.append(("csv", path))
    if args.png:
        path = _stem(args.out) + ".png"
        write_png(scene, path)
        rec.append(("png", path))
    return rec + _scene_stats(scene)


def _scene_stats(scene) -> Record:
    res = vertex_residuals(scene)
    rec: Record = [("polylines", len(scene.isoptic_polylines())), ("vertices", len(res))]
    rec.append(("max_residual", float(res.max()) if len(res) else 0.0))
    rec.append(("arc_length", arc_length(scene.isoptic_polylines())))
    return rec


def cmd_report(args) -> Iterable[Record]:
    _need(args, "out")
    names = args.presets or list(PRESETS)
    unknown = [n for n in names if n not in PRESETS]
    if unknown:
        raise UsageError("unknown preset(s): " + ", ".join(unknown))
    os.makedirs(args.out, exist_ok=True)
    for name in names:
        p = PRESETS[name]
        scene = render_scene(p.conic, p.alpha, args.window, args.resolution, args.workers)
        base = os.path.join(args.out, name)
        write_svg(scene, base + ".svg")
        write_csv(scene, base + ".csv")
        write_png(scene, base + ".png", title=f"{name}: {p.conic}, alpha = {p.alpha:.6g}")
        yield [
            ("figure", name),
            ("family", p.conic.family.value),
            ("a", p.conic.a),
            ("b", "none" if p.conic.b is None else p.conic.b),
            ("alpha", p.alpha),
            ("class", classify(p.conic).value),
        ] + _scene_stats(scene)


COMMANDS = {
    "classify": cmd_classify,
    "dual": cmd_dual,
    "matrices": cmd_matrices,
    "tangents": cmd_tangents,
    "angle": cmd_angle,
    "isoptic": cmd_isoptic,
    "oracle": cmd_oracle,
    "render": cmd_render,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", choices=[f.value for f in Family])
    common.add_argument("--a", type=_real)
    common.add_argument("--b", type=_real)
    common.add_argument("--alpha", type=_real, help="viewing angle in radians")
    common.add_argument("--point", type=_point, metavar="x,y")
    common.add_argument("--u", type=_triple, metavar="a,b,c")
    common.add_argument("--v", type=_triple, metavar="a,b,c")
    common.add_argument(
        "--window", type=_window, default=DEFAULT_WINDOW, metavar="xmin,xmax,ymin,ymax"
    )
    common.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION, metavar="n")
    common.add_argument("--out", metavar="path")
    common.add_argument("--format", choices=["human", "kv", "csv"], default="kv")
    common.add_argument("--workers", type=int, default=1, help="threads for grid sampling")

    parser = argparse.ArgumentParser(
        prog="hypisoptic",
        description="Conics and their isoptics in the Cayley-Klein model of the hyperbolic plane.",
        epilog="Negative pairs need the '=' form, e.g. --point=-0.5,2.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True
    helps = {
        "classify": "name the class of a conic",
        "dual": "parameters of the dual conic",
        "matrices": "point and line matrices (row-major)",
        "tangents": "tangent lines through --point",
        "angle": "generalized angle of lines --u and --v",
        "oracle": "isoptic quotient against the directly measured angle",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    iso = sub.add_parser("isoptic", help="isoptic equation at a point")
    iso_sub = iso.add_subparsers(dest="action", metavar="action")
    iso_sub.required = True
    iso_sub.add_parser("eval", parents=[common], help="branch, lhs, rhs and residual at --point")
    ren = sub.add_parser("render", parents=[common], help="trace a scene and write SVG to --out")
    ren.add_argument("--csv", action="store_true", help="also write polylines as CSV")
    ren.add_argument("--png", action="store_true", help="also write a matplotlib PNG")
    rep = sub.add_parser(
        "report", parents=[common], help="render every figure preset into directory --out"
    )
    rep.add_argument("--presets", nargs="+", metavar="name", help=f"subset of {', '.join(PRESETS)}")
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.resolution < 2:
        err.write(parser.format_usage())
        err.write("error: --resolution must be at least 2\n")
        return 2
    try:
        result = COMMANDS[args.command](args)
        if args.command == "report":
            for k, record in enumerate(result):
                emit(record, args.format, out, header=k == 0)
                out.flush()
        else:
            emit(result, args.format, out)
    except GeometryError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    except (UsageError, ValueError) as exc:
        err.write(parser.format_usage())
        err.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
