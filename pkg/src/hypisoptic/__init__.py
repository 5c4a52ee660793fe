"""Conics, generalized angles and isoptic curves in the Cayley-Klein model.

Points and lines are homogeneous triples; the absolute is the unit circle,
with the Lorentz form ``<x, y> = x1 y1 + x2 y2 - x3 y3``.
"""

from .angles import AngleFormula, AngleKind, GeneralizedAngle, generalized_angle
from .conics import (
    ConicClass,
    ConicSpec,
    Family,
    central,
    classify,
    dual,
    matrices,
    osculating_parabola,
    parabola,
    semi_hyperbola,
)
from .contours import ScalarField, extract_contours, isoptic_contours, sample_field
from .errors import GeometryError
from .isoptics import (
    IsopticBranch,
    IsopticQuery,
    classify_branch,
    isoptic_angle_direct,
    isoptic_lhs,
    isoptic_residual,
    oracle_consistency,
)
from .projective import LineClass, PointClass, bilinear_form, classify_line, classify_point
from .render import Scene, render_scene
from .tangents import TangentPair, tangent_pair

__version__ = "0.1.0"

__all__ = [
    "AngleFormula",
    "AngleKind",
    "ConicClass",
    "ConicSpec",
    "Family",
    "GeneralizedAngle",
    "GeometryError",
    "IsopticBranch",
    "IsopticQuery",
    "LineClass",
    "PointClass",
    "ScalarField",
    "Scene",
    "TangentPair",
    "bilinear_form",
    "central",
    "classify",
    "classify_branch",
    "classify_line",
    "classify_point",
    "dual",
    "extract_contours",
    "generalized_angle",
    "isoptic_angle_direct",
    "isoptic_contours",
    "isoptic_lhs",
    "isoptic_residual",
    "matrices",
    "oracle_consistency",
    "osculating_parabola",
    "parabola",
    "render_scene",
    "sample_field",
    "semi_hyperbola",
    "tangent_pair",
]
