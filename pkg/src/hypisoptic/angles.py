"""Generalized angle between two lines of the extended hyperbolic plane.

Depending on how the lines meet the absolute conic, the "angle" is one of

* an ordinary angle (proper lines meeting at a proper point), via cos;
* the length of the common perpendicular (proper lines meeting outside),
  or the distance of the poles (two outer lines), via cosh;
* the distance of the outer line's pole from the proper line, via sinh;
* zero, undefined or infinite in the degenerate boundary cases.

The sign ambiguity of the defining formulas is resolved by taking the
absolute value of the numerator, so elliptic angles are reported in
``[0, pi/2]``; callers wanting the supplementary angle use ``pi - value``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionViolated
from .projective import (
    EPS_SIGN,
    LineClass,
    Triple,
    as_triple,
    bilinear_form,
    classify_line,
    pole_of_line,
)


class AngleKind(enum.Enum):
    EllipticAngle = "EllipticAngle"
    DistanceType = "DistanceType"
    Zero = "Zero"
    Undefined = "Undefined"
    Infinite = "Infinite"


class AngleFormula(enum.Enum):
    CosForm = "CosForm"
    CoshForm = "CoshForm"
    SinhForm = "SinhForm"
    NoFormula = "None"


@dataclass(frozen=True)
class GeneralizedAngle:
    kind: AngleKind
    value: float | None
    which_formula: AngleFormula = AngleFormula.NoFormula

    def __post_init__(self):
        if self.kind is AngleKind.EllipticAngle:
            if self.value is None or not 0.0 <= self.value <= math.pi / 2:
                raise ValueError(f"elliptic angle out of range: {self.value}")
        elif self.kind is AngleKind.DistanceType:
            if self.value is None or self.value < 0.0:
                raise ValueError(f"distance-type value must be >= 0: {self.value}")
        elif self.kind is AngleKind.Zero and self.value != 0.0:
            raise ValueError("Zero angle must carry value 0")


def gram(u: Triple, v: Triple) -> float:
    """``<u,u><v,v> - <u,v>^2``; positive iff proper lines meet at a proper point."""
    return bilinear_form(u, u) * bilinear_form(v, v) - bilinear_form(u, v) ** 2


def _gram_sign(u: np.ndarray, v: np.ndarray) -> int:
    uu = bilinear_form(u, u)
    vv = bilinear_form(v, v)
    uv = bilinear_form(u, v)
    g = uu * vv - uv * uv
    if abs(g) <= EPS_SIGN * max(abs(uu * vv), uv * uv):
        return 0
    return 1 if g > 0 else -1


def cos_angle(u: Triple, v: Triple) -> float:
    """Cosine of the angle between two proper lines meeting at a proper point.

    Lines meeting on the absolute (or coinciding) give 1.
    """
    u = as_triple(u)
    v = as_triple(v)
    if classify_line(u) is not LineClass.Proper or classify_line(v) is not LineClass.Proper:
        raise PreconditionViolated("cos_angle needs two proper lines")
    if _gram_sign(u, v) < 0:
        raise PreconditionViolated("lines do not meet at a proper point")
    c = abs(bilinear_form(u, v)) / math.sqrt(bilinear_form(u, u) * bilinear_form(v, v))
    return min(c, 1.0)


def cosh_angle(u: Triple, v: Triple) -> float:
    """Hyperbolic cosine of the normal-transverse length or pole distance.

    Valid for two proper lines meeting outside the absolute, or for two
    outer lines. Evaluated on the poles.
    """
    u = as_triple(u)
    v = as_triple(v)
    cu, cv = classify_line(u), classify_line(v)
    if cu is LineClass.Proper and cv is LineClass.Proper:
        if _gram_sign(u, v) >= 0:
            raise PreconditionViolated("proper lines do not meet outside the absolute")
    elif not (cu is LineClass.Outer and cv is LineClass.Outer):
        raise PreconditionViolated(f"cosh_angle undefined for ({cu.value}, {cv.value})")
    pu, pv = pole_of_line(u), pole_of_line(v)
    c = abs(bilinear_form(pu, pv)) / math.sqrt(bilinear_form(pu, pu) * bilinear_form(pv, pv))
    return max(c, 1.0)


def sinh_angle(u: Triple, v: Triple) -> float:
    """Hyperbolic sine of the distance from an outer line's pole to a proper line.

    Argument order does not matter.
    """
    u = as_triple(u)
    v = as_triple(v)
    cu, cv = classify_line(u), classify_line(v)
    if cu is LineClass.Outer and cv is LineClass.Proper:
        u, v = v, u
    elif not (cu is LineClass.Proper and cv is LineClass.Outer):
        raise PreconditionViolated(f"sinh_angle undefined for ({cu.value}, {cv.value})")
    pu, pv = pole_of_line(u), pole_of_line(v)
    return abs(bilinear_form(pu, pv)) / math.sqrt(
        -bilinear_form(pu, pu) * bilinear_form(pv, pv)
    )


def _half_measure(u: np.ndarray, v: np.ndarray) -> float:
    """``<U - V, U - V>`` for unit representatives with ``|<U, V>|`` oriented.

    For two proper lines this is ``4 sin^2(a/2)`` (meeting inside) or
    ``-4 sinh^2(d/2)`` (ultraparallel); for two outer lines it is
    ``4 sinh^2(d/2)``. Unlike ``acos``/``acosh`` of the quotient it stays
    accurate for nearly equal lines.
    """
    U = u / math.sqrt(abs(bilinear_form(u, u)))
    V = v / math.sqrt(abs(bilinear_form(v, v)))
    uv = bilinear_form(U, V)
    # proper lines: make <U,V> >= 0; outer lines (timelike): make <U,V> <= 0
    if (bilinear_form(u, u) > 0) == (uv < 0):
        V = -V
    D = U - V
    return float(D[0] * D[0] + D[1] * D[1] - D[2] * D[2])


def _incident(line: np.ndarray, point: np.ndarray) -> bool:
    return abs(float(line @ point)) <= EPS_SIGN * np.linalg.norm(line) * np.linalg.norm(point)


def generalized_angle(u: Triple, v: Triple) -> GeneralizedAngle:
    """Angle of two lines in any relative position; never raises on valid input."""
    u = as_triple(u)
    v = as_triple(v)
    cu, cv = classify_line(u), classify_line(v)

    if cu is LineClass.Boundary or cv is LineClass.Boundary:
        # a boundary line's pole is its point of contact with the absolute
        hits = (cu is LineClass.Boundary and _incident(v, pole_of_line(u))) or (
            cv is LineClass.Boundary and _incident(u, pole_of_line(v))
        )
        return GeneralizedAngle(AngleKind.Undefined if hits else AngleKind.Infinite, None)

    if cu is LineClass.Proper and cv is LineClass.Proper:
        g = _gram_sign(u, v)
        if g == 0:
            return GeneralizedAngle(AngleKind.Zero, 0.0)
        q = _half_measure(u, v)
        if g > 0:
            value = min(2 * math.asin(min(math.sqrt(max(q, 0.0)) / 2, 1.0)), math.pi / 2)
            return GeneralizedAngle(AngleKind.EllipticAngle, value, AngleFormula.CosForm)
        value = 2 * math.asinh(math.sqrt(max(-q, 0.0)) / 2)
        return GeneralizedAngle(AngleKind.DistanceType, value, AngleFormula.CoshForm)

    if cu is LineClass.Outer and cv is LineClass.Outer:
        value = 2 * math.asinh(math.sqrt(max(_half_measure(u, v), 0.0)) / 2)
        return GeneralizedAngle(AngleKind.DistanceType, value, AngleFormula.CoshForm)

    return GeneralizedAngle(
        AngleKind.DistanceType, math.asinh(sinh_angle(u, v)), AngleFormula.SinhForm
    )
