"""Cayley-Klein model of the extended hyperbolic plane.

Points and lines are homogeneous triples in a real vector space carrying the
Lorentz form of signature (2, 1)::

    <x, y> = x1*y1 + x2*y2 - x3*y3

The absolute conic is ``<x, x> = 0`` (the unit circle in the affine chart
``x3 = 1``). Proper points lie inside it, outer points outside. Lines are
classified by the same form evaluated on their coefficients, with the
opposite sign convention (a line is proper when it crosses the circle).

Triples are stored unnormalised as numpy arrays; any nonzero multiple
represents the same point or line.
"""

from __future__ import annotations

import enum
import math
from typing import Sequence, Union

import numpy as np

from .errors import NonProperPoint

#: Relative tolerance used for every "is this zero" sign test.
EPS_SIGN = 1e-12

Triple = Union[Sequence[float], np.ndarray]
HomPoint = np.ndarray
HomLine = np.ndarray


class PointClass(enum.Enum):
    Proper = "Proper"
    Boundary = "Boundary"
    Outer = "Outer"


class LineClass(enum.Enum):
    Proper = "Proper"
    Boundary = "Boundary"
    Outer = "Outer"


def as_triple(v: Triple) -> np.ndarray:
    """Return `v` as a float array of shape (3,), rejecting the zero vector."""
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"expected a homogeneous triple, got shape {arr.shape}")
    if not np.any(arr):
        raise ValueError("the zero vector does not represent a point or line")
    return arr


def bilinear_form(x: Triple, y: Triple) -> float:
    """Lorentz form ``x1*y1 + x2*y2 - x3*y3``."""
    x = as_triple(x)
    y = as_triple(y)
    return float(x[0] * y[0] + x[1] * y[1] - x[2] * y[2])


def _sign(v: np.ndarray) -> int:
    q = v[0] * v[0] + v[1] * v[1] - v[2] * v[2]
    if abs(q) <= EPS_SIGN * float(np.max(v * v)):
        return 0
    return 1 if q > 0 else -1


def classify_point(x: Triple) -> PointClass:
    s = _sign(as_triple(x))
    if s < 0:
        return PointClass.Proper
    if s == 0:
        return PointClass.Boundary
    return PointClass.Outer


def classify_line(u: Triple) -> LineClass:
    s = _sign(as_triple(u))
    if s > 0:
        return LineClass.Proper
    if s == 0:
        return LineClass.Boundary
    return LineClass.Outer


def pole_of_line(u: Triple) -> HomPoint:
    """Pole of the line `u` with respect to the absolute conic."""
    u = as_triple(u)
    return np.array([u[0], u[1], -u[2]])


def polar_line(x: Triple) -> HomLine:
    """Polar line of the point `x`: the set of points conjugate to it."""
    x = as_triple(x)
    return np.array([x[0], x[1], -x[2]])


def same_projective(p: Triple, q: Triple, tol: float = 1e-12) -> bool:
    """True if `p` and `q` are nonzero multiples of each other."""
    p = as_triple(p)
    q = as_triple(q)
    cross = np.cross(p, q)
    return bool(np.linalg.norm(cross) <= tol * np.linalg.norm(p) * np.linalg.norm(q))


def normalize(v: Triple, tol: float = 1e-10) -> np.ndarray:
    """Scale so the third coordinate is 1 when it is not (relatively) zero.

    Display helper only; stored values stay unnormalised.
    """
    v = as_triple(v)
    if abs(v[2]) > tol * np.linalg.norm(v):
        return v / v[2]
    return v.copy()


def distance(x: Triple, y: Triple) -> float:
    """Hyperbolic distance (curvature -1) between two proper points.

    Representatives are scaled to ``<X, X> = -1`` with positive third
    coordinate; then ``<X - Y, X - Y> = 4 sinh^2(d / 2)``, which stays
    accurate for nearby points where ``acosh`` of ``|<x, y>| / sqrt(...)``
    does not. The result does not depend on the representatives.

    Raises:
        NonProperPoint: if either point is not inside the absolute conic.
    """
    x = as_triple(x)
    y = as_triple(y)
    for p in (x, y):
        if classify_point(p) is not PointClass.Proper:
            raise NonProperPoint(f"{p.tolist()} is not a proper point")
    X = x / (math.copysign(1.0, x[2]) * math.sqrt(-bilinear_form(x, x)))
    Y = y / (math.copysign(1.0, y[2]) * math.sqrt(-bilinear_form(y, y)))
    D = X - Y
    q = float(D[0] * D[0] + D[1] * D[1] - D[2] * D[2])
    return 2.0 * math.asinh(math.sqrt(max(q, 0.0)) / 2.0)
