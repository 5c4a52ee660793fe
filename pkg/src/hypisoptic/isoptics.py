"""Compound isoptic curves of the generalized conics.

A point ``P`` outside a conic sees it under the generalized angle of the two
tangents through ``P``. Which trigonometric function measures that angle
depends on where ``P`` and the tangents sit relative to the absolute, so the
locus of constant angle is a compound curve with up to three branches:

* ``CosBranch``  - ``P`` inside the absolute, ordinary angle;
* ``CoshBranch`` - ``P`` outside, both tangents proper or both outer;
* ``SinhBranch`` - one tangent proper, the other outer.

`isoptic_lhs` evaluates the closed-form quotient for each family (the value
that equals cos^2, cosh^2 or sinh^2 of the angle). `isoptic_angle_direct`
recomputes the angle from the tangent lines, and `oracle_consistency`
compares the two.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .angles import AngleKind, GeneralizedAngle, generalized_angle
from .conics import ConicSpec, Family, affine, matrices, residual_xy
from .errors import (
    InvalidRegion,
    NotExternalPoint,
    SingularDenominator,
    UndefinedAngle,
)
from .projective import EPS_SIGN
from .tangents import _residual_scale, closed_form_arrays, generic_arrays, tangent_pair

log = logging.getLogger(__name__)

#: ``|den| <= SINGULAR_TOL * max(num, 1)`` is treated as a zero denominator.
SINGULAR_TOL = 1e-14


class IsopticBranch(enum.IntEnum):
    Invalid = 0
    CoshBranch = 1
    CosBranch = 2
    SinhBranch = 3


@dataclass(frozen=True)
class IsopticQuery:
    conic: ConicSpec
    alpha: float
    point: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if not 0.0 < self.alpha < math.pi:
            raise ValueError(f"alpha must lie in (0, pi), got {self.alpha}")


def quotient_parts(family: Family, a, b, x, y):
    """Unsquared numerator and signed denominator of the isoptic quotient.

    Plain arithmetic only, so it evaluates on floats, numpy arrays and
    `fractions.Fraction` alike.
    """
    if family is Family.Central:
        # squares taken once so the quotient is exactly even in x and in y
        x2, y2 = x * x, y * y
        num = a * ((b + 1) * x2 - 1) + (a + 1) * b * y2 - b
        den = (
            (a - 1) ** 2 * b**2 * (y2 * y2)
            + 2 * (a - 1) * b * (b + a * ((b - 1) * x2 - 1)) * y2
            + (a * (b - 1) * x2 + a - b) ** 2
        )
    elif family is Family.Parabola:
        num = a * (b * (2 * x**2 + y**2 - 1) + (y - 1) ** 2) + b**2 * (y**2 - 1)
        den = (y - 1) ** 2 * (
            (y + 1) ** 2 * b**4
            - 2 * a * (2 * x**2 + y**2 + b * (y + 1) ** 2 - 1) * b**2
            + a**2 * ((y - 1) ** 2 + b**2 * (y + 1) ** 2 + 2 * b * (2 * x**2 + y**2 - 1))
        )
    elif family is Family.SemiHyperbola:
        num = 2 * a * (b * (x**2 + y**2) - y) + y**2 - 1
        den = (
            y**4
            + 4 * a**2 * (x**2 + y**2) * ((b**2 - 1) * x**2 + (b * y - 1) ** 2)
            - 4 * a * (y - (2 * x**2 + y**2) * y + b * (y**4 + (x**2 - 1) * y**2 + x**2))
            - 2 * y**2
            + 1
        )
    else:
        num = -2 * (x**2 + y**2 - 1) + 2 * a * (x + 1) * y + a**2 * (x + 1) ** 2
        den = a**2 * (x + 1) ** 3 * (4 * (1 - x) + 4 * a * y + a**2 * (x + 1))
    return num, den


def lhs_parts(family: Family, a, b, x, y):
    """Squared numerator and signed denominator; the quotient is ``num / |den|``."""
    num, den = quotient_parts(family, a, b, x, y)
    return num**2, den


def lhs_arrays(spec: ConicSpec, x, y):
    """Quotient ``num / |den|`` elementwise; NaN where the denominator is singular."""
    num, den = lhs_parts(spec.family, spec.a, spec.b, np.asarray(x, float), np.asarray(y, float))
    singular = np.abs(den) <= SINGULAR_TOL * np.maximum(num, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(singular, np.nan, num / np.abs(den))


def isoptic_lhs(conic: ConicSpec, point) -> float:
    """Left side of the compound isoptic equation at `point`.

    Raises:
        SingularDenominator: on the loci where the quotient degenerates.
    """
    x, y = affine(point)
    num, den = lhs_parts(conic.family, conic.a, conic.b, x, y)
    if abs(den) <= SINGULAR_TOL * max(num, 1.0):
        raise SingularDenominator(f"isoptic quotient of {conic} is singular at ({x}, {y})")
    return num / abs(den)


def tangent_arrays(spec: ConicSpec, x, y):
    """Tangent lines through many points at once.

    Closed forms where they apply, the pencil solver elsewhere. Returns
    ``(U, V, exists)``; ``U`` and ``V`` have a trailing axis of length 3.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    u1, u2, v1, v2, disc, degenerate = closed_form_arrays(spec, x, y)
    one = np.ones_like(x)
    U = np.stack([u1, u2, one], axis=-1)
    V = np.stack([v1, v2, one], axis=-1)
    exists = disc >= 0
    if np.any(degenerate):
        A = matrices(spec).line_matrix
        gu, gv, gdisc = generic_arrays(A, x[degenerate], y[degenerate])
        U[degenerate] = gu
        V[degenerate] = gv
        exists = exists.copy()
        exists[degenerate] = gdisc >= 0
    return U, V, exists


def _form(W):
    return W[..., 0] ** 2 + W[..., 1] ** 2 - W[..., 2] ** 2


def branch_arrays(spec: ConicSpec, x, y):
    """Branch code per point, plus the tangent lines used to decide it."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    U, V, exists = tangent_arrays(spec, x, y)
    uu, vv = _form(U), _form(V)
    with np.errstate(invalid="ignore"):
        boundary = (np.abs(uu) <= EPS_SIGN * np.sum(U * U, axis=-1)) | (
            np.abs(vv) <= EPS_SIGN * np.sum(V * V, axis=-1)
        )
        # (1-u1^2-u2^2)(1-v1^2-v2^2) has the sign of <u,u><v,v> for any scaling
        prod = uu * vv
        ok = exists & ~boundary & np.isfinite(prod)
        r2 = x * x + y * y
        branch = np.full(x.shape, int(IsopticBranch.Invalid), dtype=np.int8)
        branch[ok & (prod > 0) & (r2 > 1)] = IsopticBranch.CoshBranch
        branch[ok & (r2 < 1)] = IsopticBranch.CosBranch
        branch[ok & (prod < 0)] = IsopticBranch.SinhBranch
    return branch, U, V


def classify_branch(conic: ConicSpec, point) -> IsopticBranch:
    """Which branch of the compound isoptic governs `point` (total function)."""
    x, y = affine(point)
    branch, U, V = branch_arrays(conic, np.array([x]), np.array([y]))
    result = IsopticBranch(int(branch[0]))
    if result is IsopticBranch.CoshBranch and _form(U[0]) < 0 and _form(V[0]) < 0:
        log.debug("both tangents from (%g, %g) are outer lines", x, y)
    return result


def common_tangents(conic: ConicSpec, samples: int = 4096) -> list:
    """Boundary lines that also touch the conic, as triples ``(c, s, -1)``.

    These are the lines along which the isoptic quotient blows up. A
    boundary line touches the absolute at ``(cos t, sin t)``; tangency to the
    conic is a trigonometric equation in ``t``, solved by a dense scan with
    root polishing. Double roots (the conic osculating the absolute) are
    caught as near-zero minima of ``|f|``.
    """
    A = matrices(conic).line_matrix
    scale = float(np.abs(A).max())

    def f(t):
        u = np.array([np.cos(t), np.sin(t), -np.ones_like(t)])
        return np.einsum("i...,ij,j...->...", u, A, u)

    ts = np.linspace(0.0, 2 * math.pi, samples + 1)
    fs = f(ts)
    roots = []
    for k in range(samples):
        f0, f1 = fs[k], fs[k + 1]
        if f0 == 0:
            roots.append(ts[k])
        elif f0 * f1 < 0:
            roots.append(brentq(f, ts[k], ts[k + 1], xtol=1e-15))
    af = np.abs(fs)
    for k in range(1, samples):
        if af[k] <= af[k - 1] and af[k] < af[k + 1] and af[k] < 1e-3 * scale:
            res = minimize_scalar(
                lambda t: abs(f(t)), bounds=(ts[k - 1], ts[k + 1]), method="bounded",
                options={"xatol": 1e-13},
            )
            if abs(f(res.x)) < 1e-10 * scale:
                roots.append(float(res.x))
    lines = []
    for t in sorted(r % (2 * math.pi) for r in roots):
        if lines and abs(t - lines[-1][0]) < 1e-4:
            continue
        lines.append((t, np.array([math.cos(t), math.sin(t), -1.0])))
    if len(lines) > 1 and abs(lines[0][0] + 2 * math.pi - lines[-1][0]) < 1e-4:
        lines.pop()
    return [u for _, u in lines]


def rhs(alpha: float, branch: IsopticBranch) -> float:
    if branch is IsopticBranch.CoshBranch:
        return math.cosh(alpha) ** 2
    if branch is IsopticBranch.CosBranch:
        return math.cos(alpha) ** 2
    if branch is IsopticBranch.SinhBranch:
        return math.sinh(alpha) ** 2
    raise InvalidRegion("no isoptic branch at this point")


def _rhs_table(alpha: float) -> np.ndarray:
    return np.array(
        [np.nan, math.cosh(alpha) ** 2, math.cos(alpha) ** 2, math.sinh(alpha) ** 2]
    )


def residual_arrays(spec: ConicSpec, alpha: float, x, y):
    """Isoptic residual ``lhs - rhs`` on arrays.

    Returns ``(residual, branch)``; residual is NaN at invalid or singular
    points.
    """
    branch, _, _ = branch_arrays(spec, x, y)
    lhs = lhs_arrays(spec, x, y)
    res = lhs - _rhs_table(alpha)[branch]
    return res, branch


def signed_root_arrays(spec: ConicSpec, x, y):
    """``num / sqrt|den|``, whose square is the isoptic quotient, with branch codes.

    ``lhs - rhs`` is a difference of squares and keeps its sign across the
    orthoptic (``cos(alpha) = 0``); the zero sets of this signed root minus
    ``+-sqrt(rhs)`` change sign properly and together give the same curve.
    NaN where the denominator is singular.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    branch, _, _ = branch_arrays(spec, x, y)
    num, den = quotient_parts(spec.family, spec.a, spec.b, x, y)
    singular = np.abs(den) <= SINGULAR_TOL * np.maximum(num * num, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.where(singular, np.nan, num / np.sqrt(np.abs(den)))
    return g, branch


def branch_level(alpha: float, branch: IsopticBranch) -> float:
    """``sqrt(rhs)``: |cosh|, |cos| or |sinh| of alpha."""
    return math.sqrt(rhs(alpha, branch))


def isoptic_residual(query: IsopticQuery) -> float:
    """``lhs - rhs`` at the query point; zero on the compound isoptic.

    Raises:
        InvalidRegion: if no branch applies (interior point, boundary tangent).
        SingularDenominator: on degenerate loci of the quotient.
    """
    if query.point is None:
        raise ValueError("query has no point")
    branch = classify_branch(query.conic, query.point)
    if branch is IsopticBranch.Invalid:
        raise InvalidRegion(f"{query.point} is not in any branch region of {query.conic}")
    return isoptic_lhs(query.conic, query.point) - rhs(query.alpha, branch)


def isoptic_angle_direct(conic: ConicSpec, point) -> GeneralizedAngle:
    """Generalized angle of the two tangents through `point`.

    Raises:
        NotExternalPoint: if there are no real tangents.
        UndefinedAngle: if a tangent touches the absolute.
    """
    pair = tangent_pair(conic, point)
    angle = generalized_angle(pair.u, pair.v)
    if angle.kind in (AngleKind.Undefined, AngleKind.Infinite):
        raise UndefinedAngle(f"a tangent through {point} is a boundary line")
    return angle


def squared_measure(angle: GeneralizedAngle, branch: IsopticBranch) -> float:
    """cos^2, cosh^2 or sinh^2 of the angle value, as the branch dictates."""
    if branch is IsopticBranch.Invalid:
        raise InvalidRegion("no isoptic branch at this point")
    return rhs(angle.value, branch)


def oracle_consistency(conic: ConicSpec, point) -> float:
    """``|lhs - f(angle)^2|`` with the angle measured directly from the tangents."""
    branch = classify_branch(conic, point)
    angle = isoptic_angle_direct(conic, point)
    return abs(isoptic_lhs(conic, point) - squared_measure(angle, branch))


def sample_mask(conic: ConicSpec, x, y, delta: float = 1e-3, avoid_axes: bool = True):
    """Valid points kept away from degenerate loci.

    Points within `delta` (relative) of the conic, the absolute, a boundary
    tangent or a vanishing quotient denominator are rejected, since the
    branch predicates jump there. With `avoid_axes`, points near the
    symmetry axes (where the closed forms divide by zero) are rejected too.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    branch, U, V = branch_arrays(conic, x, y)
    keep = branch != IsopticBranch.Invalid
    keep &= np.abs(x * x + y * y - 1) > delta
    keep &= np.abs(_form(U)) > delta * np.sum(U * U, axis=-1)
    keep &= np.abs(_form(V)) > delta * np.sum(V * V, axis=-1)
    keep &= np.abs(residual_xy(conic, x, y)) > delta * _residual_scale(conic, x, y)
    num, den = lhs_parts(conic.family, conic.a, conic.b, x, y)
    keep &= np.abs(den) > delta * np.maximum(num, 1.0)
    if avoid_axes:
        keep &= (np.abs(x) > delta) & (np.abs(y) > delta)
        _, _, _, _, _, degenerate = closed_form_arrays(conic, x, y)
        keep &= ~degenerate
    return keep


def sample_external_points(
    conic: ConicSpec,
    n: int,
    rng: np.random.Generator,
    window=(-3.0, 3.0, -3.0, 3.0),
    delta: float = 1e-3,
    batch: int = 4096,
) -> np.ndarray:
    """Uniform sample of ``n`` points passing :func:`sample_mask`."""
    xmin, xmax, ymin, ymax = window
    kept = []
    total = 0
    for _ in range(10_000):
        x = rng.uniform(xmin, xmax, batch)
        y = rng.uniform(ymin, ymax, batch)
        keep = sample_mask(conic, x, y, delta)
        pts = np.column_stack([x[keep], y[keep]])
        kept.append(pts)
        total += len(pts)
        if total >= n:
            break
    pts = np.concatenate(kept)
    if len(pts) < n:
        raise NotExternalPoint(f"could not sample {n} valid points for {conic}")
    return pts[:n]
