import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hypisoptic.angles import (
    AngleFormula,
    AngleKind,
    GeneralizedAngle,
    cos_angle,
    cosh_angle,
    generalized_angle,
    gram,
    sinh_angle,
)
from hypisoptic.errors import PreconditionViolated
from hypisoptic.projective import LineClass, classify_line, distance, pole_of_line

S7 = math.sqrt(7) / 2
CIRCLE_TANGENTS = ((-S7, -0.5, 1.0), (S7, -0.5, 1.0))  # circle a=b=2 seen from (0, 2)

coord = st.floats(-5, 5, allow_nan=False)
lines = st.tuples(coord, coord, coord).filter(lambda t: max(map(abs, t)) > 1e-2)
scales = st.floats(-100, 100).filter(lambda s: abs(s) > 1e-2)


def _line_with_radius(lo, hi):
    # (r cos t, r sin t, 1) scaled: proper for r > 1, outer for r < 1
    return st.builds(
        lambda r, t, w: (w * r * math.cos(t), w * r * math.sin(t), w),
        st.floats(lo, hi),
        st.floats(0, 2 * math.pi),
        scales,
    )


outer_lines = _line_with_radius(0.0, 0.99)
proper_lines = _line_with_radius(1.01, 20.0)


def well_separated(u, v):
    """Keep away from class and Gram boundaries, where kinds may flip under roundoff."""
    uu = u[0] ** 2 + u[1] ** 2 - u[2] ** 2
    vv = v[0] ** 2 + v[1] ** 2 - v[2] ** 2
    nu, nv = np.dot(u, u), np.dot(v, v)
    return abs(uu) > 1e-6 * nu and abs(vv) > 1e-6 * nv and abs(gram(u, v)) > 1e-6 * nu * nv


def test_cos_angle_examples():
    assert cos_angle((1, 0, 0), (0, 1, 0)) == 0.0
    assert cos_angle((1, 0, 0), (1, 0, 0)) == 1.0


def test_cos_angle_rejects_ultraparallel():
    with pytest.raises(PreconditionViolated):
        cos_angle(*CIRCLE_TANGENTS)


def test_cosh_angle_examples():
    assert math.isclose(cosh_angle(*CIRCLE_TANGENTS), 2.5, rel_tol=1e-14)
    assert math.isclose(cosh_angle((1, 0, 0.5), (1, 0, -0.5)), 5 / 3, rel_tol=1e-14)


def test_cosh_angle_preconditions():
    with pytest.raises(PreconditionViolated):
        cosh_angle((1, 0, 0), (0, 1, 0))  # meet at a proper point
    with pytest.raises(PreconditionViolated):
        cosh_angle((1, 0, 0), (0, 1, 2))  # proper + outer


def test_outer_line_routes_to_sinh():
    assert classify_line((0, 1, 2)) is LineClass.Outer
    ang = generalized_angle((1, 0, 0), (0, 1, 2))
    assert ang.which_formula is AngleFormula.SinhForm


def test_sinh_angle_examples():
    assert sinh_angle((1, 0, 0), (0, 0, 1)) == 0.0
    assert sinh_angle((1, 0, 0), (0, 1, 2)) == 0.0
    s = sinh_angle((0, 1, 0), (0, 1, 2))
    assert math.isclose(s, 1 / math.sqrt(3), rel_tol=1e-14)
    # the outer line's pole (0, -0.5) lies artanh(0.5) away from y = 0
    assert math.isclose(math.asinh(s), distance((0, -0.5, 1), (0, 0, 1)), rel_tol=1e-12)


def test_sinh_angle_order_free_and_checked():
    assert sinh_angle((0, 1, 2), (0, 1, 0)) == sinh_angle((0, 1, 0), (0, 1, 2))
    with pytest.raises(PreconditionViolated):
        sinh_angle((1, 0, 0), (0, 1, 0))


def test_generalized_angle_examples():
    a = generalized_angle((1, 0, 0), (0, 1, 0))
    assert a.kind is AngleKind.EllipticAngle and a.which_formula is AngleFormula.CosForm
    assert math.isclose(a.value, math.pi / 2)
    b = generalized_angle((1, 0, 0.5), (1, 0, -0.5))
    assert b.kind is AngleKind.DistanceType and b.which_formula is AngleFormula.CoshForm
    assert math.isclose(b.value, 2 * math.atanh(0.5), rel_tol=1e-12)
    c = generalized_angle(*CIRCLE_TANGENTS)
    assert c.kind is AngleKind.DistanceType and math.isclose(c.value, math.acosh(2.5))


def test_boundary_line_undefined_when_other_line_hits_contact_point():
    # x = -1 touches the absolute at (-1, 0); y = 0 passes through that point
    ang = generalized_angle((1, 0, 1), (0, 1, 0))
    assert ang.kind is AngleKind.Undefined and ang.value is None
    assert generalized_angle((0, 1, 0), (1, 0, 1)).kind is AngleKind.Undefined


def test_boundary_line_infinite_otherwise():
    ang = generalized_angle((1, 0, 1), (1, 0, 0))
    assert ang.kind is AngleKind.Infinite and ang.which_formula is AngleFormula.NoFormula


def test_two_boundary_lines():
    # x = -1 and y = -1 touch at (-1, 0) and (0, -1); neither passes the other's contact
    assert generalized_angle((1, 0, 1), (0, 1, 1)).kind is AngleKind.Infinite
    # the same boundary line twice
    assert generalized_angle((1, 0, 1), (2, 0, 2)).kind is AngleKind.Undefined


def test_parallel_proper_lines_zero():
    # x = -1 + t and the chord through (-1, 0) and (0, 1): both pass (-1, 0)
    ang = generalized_angle((1, -1, 1), (0, 1, 0))
    assert ang.kind is AngleKind.Zero and ang.value == 0.0


def test_outer_pair_is_pole_distance():
    u, v = (0, 1, 2), (1, 0, 3)
    ang = generalized_angle(u, v)
    assert ang.kind is AngleKind.DistanceType and ang.which_formula is AngleFormula.CoshForm
    assert math.isclose(ang.value, distance(pole_of_line(u), pole_of_line(v)), rel_tol=1e-12)


def test_generalized_angle_invariants_enforced():
    with pytest.raises(ValueError):
        GeneralizedAngle(AngleKind.EllipticAngle, 2.0, AngleFormula.CosForm)
    with pytest.raises(ValueError):
        GeneralizedAngle(AngleKind.DistanceType, -0.1, AngleFormula.CoshForm)


@given(lines, lines, scales, scales)
def test_projective_invariance(u, v, s, t):
    assume(well_separated(u, v))
    a = generalized_angle(u, v)
    b = generalized_angle(np.multiply(s, u), np.multiply(t, v))
    assert a.kind is b.kind
    assert a.which_formula is b.which_formula
    if a.value is not None:
        assert math.isclose(a.value, b.value, rel_tol=1e-9, abs_tol=1e-9)


@given(lines, lines)
def test_symmetry(u, v):
    assume(well_separated(u, v))
    a, b = generalized_angle(u, v), generalized_angle(v, u)
    assert a.kind is b.kind
    if a.value is not None:
        assert math.isclose(a.value, b.value, rel_tol=1e-12, abs_tol=1e-12)


@given(lines, lines)
def test_elliptic_principal_value(u, v):
    assume(well_separated(u, v))
    a = generalized_angle(u, v)
    if a.kind is AngleKind.EllipticAngle:
        assert 0 <= a.value <= math.pi / 2
        assert math.isclose(math.cos(a.value), cos_angle(u, v), abs_tol=1e-12)


@given(outer_lines, outer_lines)
def test_outer_pairs_match_pole_distance(u, v):
    a = generalized_angle(u, v)
    d = distance(pole_of_line(u), pole_of_line(v))
    assert math.isclose(a.value, d, rel_tol=1e-9, abs_tol=1e-9)


@st.composite
def ultraparallel_pairs(draw):
    # chords x = d rotated by t; two such chords on the same side of the
    # centre with nearly equal directions do not meet inside the disk
    t = draw(st.floats(0, 2 * math.pi))
    dt = draw(st.floats(0.01, 0.4))
    d1 = draw(st.floats(0.6, 0.95))
    d2 = draw(st.floats(0.6, 0.95))
    w1, w2 = draw(scales), draw(scales)
    u = (w1 * math.cos(t), w1 * math.sin(t), -w1 * d1)
    v = (w2 * math.cos(t + dt), w2 * math.sin(t + dt), w2 * d2)
    return u, v


@given(ultraparallel_pairs())
def test_cosh_on_poles_equals_cosh_on_coefficients(pair):
    u, v = pair
    assume(well_separated(u, v) and gram(u, v) < 0)
    uu = u[0] ** 2 + u[1] ** 2 - u[2] ** 2
    vv = v[0] ** 2 + v[1] ** 2 - v[2] ** 2
    uv = u[0] * v[0] + u[1] * v[1] - u[2] * v[2]
    assert math.isclose(cosh_angle(u, v), abs(uv) / math.sqrt(uu * vv), rel_tol=1e-12)
