import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypisoptic.conics import (
    ConicClass as C,
    ConicSpec,
    Family,
    affine,
    central,
    classify,
    conic_residual,
    dual,
    matrices,
    osculating_parabola,
    parabola,
    point_matrix,
    residual_xy,
    semi_hyperbola,
)
from hypisoptic.errors import (
    DivisionByZeroParameter,
    IdealPoint,
    SingularConic,
    UnclassifiableParameters,
)
from hypisoptic.figures import PRESETS

# three parameter pairs per class cell (only one exists for the absolute)
CENTRAL_CELLS = {
    C.AbsoluteConic: [(1, 1)],
    C.Circle: [(1.5, 1.5), (2, 2), (7, 7)],
    C.CircleEnclosingAbsolute: [(0.2, 0.2), (0.5, 0.5), (0.9, 0.9)],
    C.Hypercycle: [(1, 1.5), (1, 3), (1, 10)],
    C.HypercycleEnclosingAbsolute: [(0.2, 1), (0.5, 1), (0.99, 1)],
    C.HypercycleExcludingAbsolute: [(-0.5, 1), (-2, 1), (-10, 1)],
    C.ConcaveHyperbola: [(0.3, 2), (0.5, 1.5), (0.9, 5)],
    C.ConvexHyperbola: [(-1, 2), (-0.3, 1.5), (-5, 3)],
    C.HyperbolaExcludingAbsolute: [(-2, 0.5), (-0.5, 0.9), (-1, 0.1)],
    C.Ellipse: [(2, 3), (1.5, 4), (1.1, 1.2)],
    C.EllipseEnclosingAbsolute: [(0.45, 0.8), (0.1, 0.2), (0.5, 0.9)],
    C.Empty: [(-2, -1), (-1, -1), (-5, -0.5)],
}
PARABOLA_CELLS = {
    C.Horocycle: [(1, 1), (2, 2), (0.5, 0.5)],
    C.HorocycleEnclosingAbsolute: [(-1, -1), (-2, -2), (-0.5, -0.5)],
    C.EllipticParabola: [(2, 1.5), (1, 0.5), (5, 0.1)],
    C.ParabolaEnclosingAbsolute: [(-1.125, -1.5), (-1, -2), (-0.1, -5)],
    C.TwoSidedParabola: [(-5, -2.7), (-3, -1), (-1, -0.5)],
    C.ConcaveHyperbolicParabola: [(1, 2), (0.5, 3), (0.1, 0.2)],
    C.ConvexHyperbolicParabola: [(-2, 1.5), (-1, 1), (-0.5, 3)],
    C.ParabolaExcludingAbsolute: [(0.8, -0.4), (2, -1), (0.1, -5)],
}
CENTRAL_DUAL = {
    C.Circle: C.CircleEnclosingAbsolute,
    C.Hypercycle: C.HypercycleEnclosingAbsolute,
    C.ConvexHyperbola: C.HyperbolaExcludingAbsolute,
    C.Ellipse: C.EllipseEnclosingAbsolute,
}
PARABOLA_DUAL = {
    C.Horocycle: C.HorocycleEnclosingAbsolute,
    C.EllipticParabola: C.ParabolaEnclosingAbsolute,
    C.TwoSidedParabola: C.ConcaveHyperbolicParabola,
    C.ConvexHyperbolicParabola: C.ParabolaExcludingAbsolute,
}
FIGURE_CLASSES = {
    "fig01": C.ConcaveHyperbola,
    "fig02": C.HyperbolaExcludingAbsolute,
    "fig03": C.ConvexHyperbola,
    "fig04": C.Ellipse,
    "fig05": C.EllipseEnclosingAbsolute,
    "fig06": C.EllipticParabola,
    "fig07": C.ParabolaEnclosingAbsolute,
    "fig08": C.TwoSidedParabola,
    "fig09": C.ConcaveHyperbolicParabola,
    "fig10": C.ConvexHyperbolicParabola,
    "fig11": C.ParabolaExcludingAbsolute,
    "fig12a": C.SemiHyperbola,
    "fig13a": C.OsculatingParabola,
}


def _pairing(table):
    both = dict(table)
    both.update({v: k for k, v in table.items()})
    return both


def dual_class(cls, table):
    return _pairing(table).get(cls, cls)


@pytest.mark.parametrize(
    "a, b, cls", [(a, b, c) for c, pairs in CENTRAL_CELLS.items() for a, b in pairs]
)
def test_central_cells(a, b, cls):
    assert classify(central(a, b)) is cls
    assert classify(central(b, a)) is cls  # axis exchange


@pytest.mark.parametrize(
    "a, b, cls", [(a, b, c) for c, pairs in PARABOLA_CELLS.items() for a, b in pairs]
)
def test_parabola_cells(a, b, cls):
    assert classify(parabola(a, b)) is cls


@pytest.mark.parametrize("name, cls", FIGURE_CLASSES.items())
def test_figure_classes(name, cls):
    assert classify(PRESETS[name].conic) is cls


def test_single_class_families():
    assert classify(semi_hyperbola(1.4, 0.5)) is C.SemiHyperbola
    assert classify(osculating_parabola(0.4)) is C.OsculatingParabola


@pytest.mark.parametrize(
    "spec",
    [
        central(0, 2),
        central(0.5, 0),
        parabola(0, 1),
        parabola(1, 0),
        semi_hyperbola(1, 1),
        semi_hyperbola(1, -1.5),
        semi_hyperbola(0, 0.5),
        osculating_parabola(0),
        osculating_parabola(-1),
    ],
)
def test_unclassifiable(spec):
    with pytest.raises(UnclassifiableParameters):
        classify(spec)


def test_spec_needs_parameters():
    with pytest.raises(ValueError):
        ConicSpec(Family.Central, 1.0)
    with pytest.raises(ValueError):
        ConicSpec(Family.OsculatingParabola, 1.0, 2.0)
    with pytest.raises(ValueError):
        central(float("nan"), 1)


def test_canonical_swaps_central_only():
    assert central(0.5, -2).canonical() == central(-2, 0.5)
    assert central(-2, 0.5).canonical() == central(-2, 0.5)
    assert parabola(2, 1).canonical() == parabola(2, 1)


def test_dual_examples():
    d = dual(central(0.3, 2))
    assert math.isclose(d.a, 1 / 0.3) and d.b == 0.5
    assert d.canonical() == central(0.5, 1 / 0.3)
    assert classify(d) is C.ConcaveHyperbola
    p = dual(parabola(2, 1.5))
    assert (p.a, p.b) == (-1.125, -1.5)
    assert classify(p) is C.ParabolaEnclosingAbsolute
    assert dual(central(1, 1)) == central(1, 1)
    s = dual(semi_hyperbola(1.4, 0.5))
    assert s == semi_hyperbola(1 / 1.4, -0.5)
    assert dual(osculating_parabola(0.4)) == osculating_parabola(0.4)


def test_dual_rejects_zero():
    for spec in (central(0, 1), parabola(0, 1), semi_hyperbola(0, 0.5)):
        with pytest.raises(DivisionByZeroParameter):
            dual(spec)


@pytest.mark.parametrize(
    "a, b, cls", [(a, b, c) for c, pairs in CENTRAL_CELLS.items() for a, b in pairs]
)
def test_central_dual_pairing(a, b, cls):
    spec = central(a, b)
    if cls is C.Empty:
        assert classify(dual(spec)) is C.Empty
        return
    assert classify(dual(spec)) is dual_class(cls, CENTRAL_DUAL)


@pytest.mark.parametrize(
    "a, b, cls", [(a, b, c) for c, pairs in PARABOLA_CELLS.items() for a, b in pairs]
)
def test_parabola_dual_pairing(a, b, cls):
    assert classify(dual(parabola(a, b))) is dual_class(cls, PARABOLA_DUAL)


nonzero = st.floats(-50, 50).filter(lambda v: abs(v) > 1e-2)
small_b = st.floats(-0.99, 0.99)


@given(nonzero, nonzero)
def test_dual_involution_central_and_parabola(a, b):
    for spec in (central(a, b), parabola(a, b)):
        back = dual(dual(spec))
        assert math.isclose(back.a, spec.a, rel_tol=1e-12)
        assert math.isclose(back.b, spec.b, rel_tol=1e-12)


@given(nonzero, small_b)
def test_dual_involution_semi_hyperbola(a, b):
    back = dual(dual(semi_hyperbola(a, b)))
    assert math.isclose(back.a, a, rel_tol=1e-12) and back.b == b


def test_semi_hyperbola_dual_by_arithmetic():
    for a, b in [(1.4, 0.5), (-2, 0.1), (0.25, -0.75)]:
        d = dual(semi_hyperbola(a, b))
        assert d.a == 1 / a and d.b == -b


def test_parabola_dual_by_arithmetic():
    for a, b in [(2, 1.5), (-5, -2.7), (0.8, -0.4)]:
        d = dual(parabola(a, b))
        assert d.a == -b * b / a and d.b == -b


@given(nonzero, nonzero)
def test_classification_symmetric_under_axis_exchange(a, b):
    try:
        cls = classify(central(a, b))
    except UnclassifiableParameters:
        return
    assert classify(central(b, a)) is cls


def test_matrices_examples():
    m = matrices(central(2, 2))
    assert np.array_equal(m.point_matrix, np.diag([2.0, 2.0, -1.0]))
    assert np.allclose(m.line_matrix, np.diag([0.5, 0.5, -1.0]), atol=1e-15)
    assert math.isclose(np.linalg.det(point_matrix(semi_hyperbola(1.4, 0.5))), -1.4)
    P = np.array([0.0, 1.0, 1.0])
    assert P @ point_matrix(parabola(2, 1.5)) @ P == 0.0


def test_osculating_matrix_homogenizes_normal_form():
    a = 0.4
    M = point_matrix(osculating_parabola(a))
    rng = np.random.default_rng(3)
    for x, y in rng.uniform(-2, 2, (20, 2)):
        p = np.array([x, y, 1.0])
        assert math.isclose(p @ M @ p, residual_xy(osculating_parabola(a), x, y), abs_tol=1e-12)


def test_singular_conic():
    # the parabola's point matrix has determinant -a b^2
    with pytest.raises(SingularConic):
        matrices(parabola(1, 0))
    assert math.isclose(np.linalg.det(point_matrix(parabola(2, 1.5))), -2 * 1.5**2)


ALL_SPECS = [
    central(0.3, 2),
    central(2, 3),
    central(0.5, -2),
    parabola(2, 1.5),
    parabola(-5, -2.7),
    semi_hyperbola(1.4, 0.5),
    osculating_parabola(0.4),
]


@pytest.mark.parametrize("spec", ALL_SPECS, ids=str)
def test_line_matrix_inverts_point_matrix(spec):
    m = matrices(spec)
    assert np.allclose(m.point_matrix @ m.line_matrix, np.eye(3), atol=1e-10)
    assert np.array_equal(m.point_matrix, m.point_matrix.T)


@pytest.mark.parametrize("spec", ALL_SPECS, ids=str)
def test_homogeneous_form_matches_residual(spec):
    rng = np.random.default_rng(7)
    M = point_matrix(spec)
    for x, y in rng.uniform(-3, 3, (50, 2)):
        p = np.array([x, y, 1.0])
        assert math.isclose(p @ M @ p, residual_xy(spec, x, y), rel_tol=1e-12, abs_tol=1e-12)


def test_conic_residual_examples():
    assert conic_residual(central(2, 3), (1 / math.sqrt(2), 0)) == pytest.approx(0, abs=1e-15)
    assert conic_residual(parabola(2, 1.5), (0, 1)) == 0.0
    assert conic_residual(parabola(2, 1.5), (0, -0.2)) == pytest.approx(0, abs=1e-15)
    for y in (0.5, -1.0, 2.0):
        assert conic_residual(osculating_parabola(0.4), (-1, y)) == pytest.approx(-y * y)
    assert conic_residual(osculating_parabola(0.4), (-1, 0)) == 0.0


def test_conic_residual_homogeneous_and_ideal():
    assert conic_residual(central(2, 3), (2, 0, 2 * math.sqrt(2))) == pytest.approx(0, abs=1e-15)
    assert affine((2.0, 4.0, 2.0)) == (1.0, 2.0)
    with pytest.raises(IdealPoint):
        conic_residual(central(2, 3), (1, 1, 0))
