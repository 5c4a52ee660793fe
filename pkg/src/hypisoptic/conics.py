"""Normal forms of generalized conics in the hyperbolic plane.

Four families are supported, each given directly in normal form (reducing an
arbitrary quadratic form to one of these is not attempted):

=====================  ==========================================
family                 affine equation
=====================  ==========================================
central                a x^2 + b y^2 = 1
parabola               a x^2 + (b+1) y^2 - 2 y = b - 1
semi-hyperbola         a x^2 + 2 b y^2 - 2 y = 0,   |b| < 1
osculating parabola    (1 - x^2 - y^2) + 2 a y (x + 1) = 0,   a > 0
=====================  ==========================================

Central conics are stored with the parameters as given; classification
first swaps them so that ``a <= b`` (an exchange of the coordinate axes).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DivisionByZeroParameter,
    IdealPoint,
    SingularConic,
    UnclassifiableParameters,
)


class Family(enum.Enum):
    Central = "central"
    Parabola = "parabola"
    SemiHyperbola = "semihyperbola"
    OsculatingParabola = "osculating"


class ConicClass(enum.Enum):
    # central
    AbsoluteConic = "AbsoluteConic"
    Circle = "Circle"
    CircleEnclosingAbsolute = "CircleEnclosingAbsolute"
    Hypercycle = "Hypercycle"
    HypercycleEnclosingAbsolute = "HypercycleEnclosingAbsolute"
    HypercycleExcludingAbsolute = "HypercycleExcludingAbsolute"
    ConcaveHyperbola = "ConcaveHyperbola"
    ConvexHyperbola = "ConvexHyperbola"
    HyperbolaExcludingAbsolute = "HyperbolaExcludingAbsolute"
    Ellipse = "Ellipse"
    EllipseEnclosingAbsolute = "EllipseEnclosingAbsolute"
    Empty = "Empty"
    # parabola
    Horocycle = "Horocycle"
    HorocycleEnclosingAbsolute = "HorocycleEnclosingAbsolute"
    EllipticParabola = "EllipticParabola"
    ParabolaEnclosingAbsolute = "ParabolaEnclosingAbsolute"
    TwoSidedParabola = "TwoSidedParabola"
    ConcaveHyperbolicParabola = "ConcaveHyperbolicParabola"
    ConvexHyperbolicParabola = "ConvexHyperbolicParabola"
    ParabolaExcludingAbsolute = "ParabolaExcludingAbsolute"
    # the two families without subclasses
    SemiHyperbola = "SemiHyperbola"
    OsculatingParabola = "OsculatingParabola"


@dataclass(frozen=True)
class ConicSpec:
    family: Family
    a: float
    b: Optional[float] = None

    def __post_init__(self):
        if not isinstance(self.family, Family):
            object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "a", float(self.a))
        if self.family is Family.OsculatingParabola:
            if self.b is not None:
                raise ValueError("the osculating parabola has a single parameter")
        else:
            if self.b is None:
                raise ValueError(f"{self.family.value} conics need both a and b")
            object.__setattr__(self, "b", float(self.b))
        if not all(math.isfinite(p) for p in self.params):
            raise ValueError("conic parameters must be finite")

    @property
    def params(self) -> tuple:
        return (self.a,) if self.b is None else (self.a, self.b)

    def canonical(self) -> "ConicSpec":
        """Central conics with ``a > b`` get their parameters swapped."""
        if self.family is Family.Central and self.a > self.b:
            return ConicSpec(self.family, self.b, self.a)
        return self

    def __str__(self):
        return f"{self.family.value}(" + ", ".join(f"{p:g}" for p in self.params) + ")"


def central(a: float, b: float) -> ConicSpec:
    return ConicSpec(Family.Central, a, b)


def parabola(a: float, b: float) -> ConicSpec:
    return ConicSpec(Family.Parabola, a, b)


def semi_hyperbola(a: float, b: float) -> ConicSpec:
    return ConicSpec(Family.SemiHyperbola, a, b)


def osculating_parabola(a: float) -> ConicSpec:
    return ConicSpec(Family.OsculatingParabola, a)


def _classify_central(a: float, b: float) -> ConicClass:
    if a == 0 or b == 0:
        raise UnclassifiableParameters(f"central conic with a zero parameter: a={a}, b={b}")
    if b < 0:
        return ConicClass.Empty
    if a < 0:
        if b < 1:
            return ConicClass.HyperbolaExcludingAbsolute
        if b == 1:
            return ConicClass.HypercycleExcludingAbsolute
        return ConicClass.ConvexHyperbola
    if a < 1:
        if a == b:
            return ConicClass.CircleEnclosingAbsolute
        if b < 1:
            return ConicClass.EllipseEnclosingAbsolute
        if b == 1:
            return ConicClass.HypercycleEnclosingAbsolute
        return ConicClass.ConcaveHyperbola
    if a == 1:
        return ConicClass.AbsoluteConic if b == 1 else ConicClass.Hypercycle
    return ConicClass.Circle if a == b else ConicClass.Ellipse


def _classify_parabola(a: float, b: float) -> ConicClass:
    if a == 0 or b == 0:
        raise UnclassifiableParameters(f"parabola with a zero parameter: a={a}, b={b}")
    if a == b:
        return ConicClass.Horocycle if a > 0 else ConicClass.HorocycleEnclosingAbsolute
    if 0 < b < a:
        return ConicClass.EllipticParabola
    if b < a < 0:
        return ConicClass.ParabolaEnclosingAbsolute
    if a < b < 0:
        return ConicClass.TwoSidedParabola
    if 0 < a < b:
        return ConicClass.ConcaveHyperbolicParabola
    if a < 0 < b:
        return ConicClass.ConvexHyperbolicParabola
    return ConicClass.ParabolaExcludingAbsolute  # b < 0 < a


def classify(spec: ConicSpec) -> ConicClass:
    """Name the class of a conic given in normal form.

    Raises:
        UnclassifiableParameters: for parameter values outside every listed
            case (zero parameters, a semi-hyperbola with ``|b| >= 1``, an
            osculating parabola with ``a <= 0``).
    """
    spec = spec.canonical()
    if spec.family is Family.Central:
        return _classify_central(spec.a, spec.b)
    if spec.family is Family.Parabola:
        return _classify_parabola(spec.a, spec.b)
    if spec.family is Family.SemiHyperbola:
        if spec.a == 0 or not abs(spec.b) < 1:
            raise UnclassifiableParameters(f"semi-hyperbola needs a != 0 and |b| < 1: {spec}")
        return ConicClass.SemiHyperbola
    if not spec.a > 0:
        raise UnclassifiableParameters(f"osculating parabola needs a > 0: {spec}")
    return ConicClass.OsculatingParabola


def dual(spec: ConicSpec) -> ConicSpec:
    """Parameters of the dual conic under the absolute polarity.

    Central conics keep their axis assignment, so applying `dual` twice is
    exactly the identity; call `ConicSpec.canonical` for the ``a <= b`` form.
    """
    a, b = spec.a, spec.b
    fam = spec.family
    if fam is Family.OsculatingParabola:
        return spec
    if fam is Family.Central:
        if a == 0 or b == 0:
            raise DivisionByZeroParameter(f"dual of {spec}")
        return ConicSpec(fam, 1.0 / a, 1.0 / b)
    if a == 0:
        raise DivisionByZeroParameter(f"dual of {spec}")
    if fam is Family.Parabola:
        return ConicSpec(fam, -b * b / a, -b)
    return ConicSpec(fam, 1.0 / a, -b)


@dataclass(frozen=True)
class ConicMatrices:
    point_matrix: np.ndarray
    line_matrix: np.ndarray


def point_matrix(spec: ConicSpec) -> np.ndarray:
    """Symmetric matrix of the homogenised normal form."""
    a, b = spec.a, spec.b
    fam = spec.family
    if fam is Family.Central:
        m = [[a, 0, 0], [0, b, 0], [0, 0, -1]]
    elif fam is Family.Parabola:
        m = [[a, 0, 0], [0, b + 1, -1], [0, -1, -(b - 1)]]
    elif fam is Family.SemiHyperbola:
        m = [[a, 0, 0], [0, 2 * b, -1], [0, -1, 0]]
    else:
        m = [[-1, a, 0], [a, -1, a], [0, a, 1]]
    return np.array(m, dtype=float)


def matrices(spec: ConicSpec) -> ConicMatrices:
    """Point-conic matrix and its inverse, the line-conic matrix.

    Raises:
        SingularConic: if the point matrix is singular at these parameters.
    """
    m = point_matrix(spec)
    det = np.linalg.det(m)
    if abs(det) <= 1e-14 * max(1.0, float(np.abs(m).max()) ** 3):
        raise SingularConic(f"{spec} is degenerate (det = {det:g})")
    return ConicMatrices(m, np.linalg.inv(m))


def residual_xy(spec: ConicSpec, x, y):
    """Normal-form left side minus right side at affine ``(x, y)``.

    Works elementwise on numpy arrays.
    """
    a, b = spec.a, spec.b
    fam = spec.family
    if fam is Family.Central:
        return a * x * x + b * y * y - 1
    if fam is Family.Parabola:
        return a * x * x + (b + 1) * y * y - 2 * y - (b - 1)
    if fam is Family.SemiHyperbola:
        return a * x * x + 2 * b * y * y - 2 * y
    return (1 - x * x - y * y) + 2 * a * y * (x + 1)


def affine(P: Sequence[float], tol: float = 1e-12) -> tuple:
    """Affine ``(x, y)`` from a 2-tuple or a homogeneous triple."""
    if len(P) == 2:
        return float(P[0]), float(P[1])
    x, y, w = (float(c) for c in P)
    if abs(w) <= tol * max(abs(x), abs(y), abs(w)):
        raise IdealPoint(f"{tuple(P)} has no affine representative")
    return x / w, y / w


def conic_residual(spec: ConicSpec, P: Sequence[float]) -> float:
    """Signed residual of the normal form at `P`; zero iff `P` is on the conic."""
    x, y = affine(P)
    return float(residual_xy(spec, x, y))
