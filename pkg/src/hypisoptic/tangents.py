"""Tangent lines from an external point to a conic in normal form.

Two routes are provided:

* closed-form coordinates of the two tangents ``(u1, u2, 1)``, ``(v1, v2, 1)``
  for each family, singular on the conic's symmetry axis;
* `tangents_generic`, which intersects the pencil of lines through the
  point with the line conic ``u A u^T = 0`` and solves the resulting binary
  quadratic. It has no axis singularity and serves as the oracle.

The family-specific functions fall back to the generic solver where their
denominators vanish, unless ``fallback=False``.

Two printed formulas do not produce tangent lines as written and are
corrected here, each behind a switch that restores the printed version:

* parabola: the printed second coordinates of ``u`` and ``v`` belong to the
  opposite root (``printed_pairing=True`` restores them);
* semi-hyperbola: the printed second coordinates use ``b y + 1`` inside the
  root where the first coordinates use ``b y - 1`` (``inner_sign=+1``
  restores the printed form).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .conics import ConicMatrices, ConicSpec, Family, affine, matrices, residual_xy
from .errors import DegenerateDenominator, NoRealTangent, NotExternalPoint

#: Relative size below which a closed-form denominator counts as zero.
DENOM_GUARD = 1e-10
#: Relative size below which a slightly negative discriminant is clamped to 0.
DISC_TOL = 1e-12


@dataclass(frozen=True)
class TangentPair:
    u: np.ndarray
    v: np.ndarray
    coincident: bool
    method: str = "closed"

    def lines(self):
        return self.u, self.v


def _normalize_line(u: np.ndarray) -> np.ndarray:
    if abs(u[2]) > DENOM_GUARD * np.linalg.norm(u):
        return u / u[2]
    return u


def _residual_scale(spec: ConicSpec, x, y):
    """Sum of absolute monomials of the normal form; scales the clamp tolerance."""
    a, b = spec.a, spec.b
    ax, ay = np.abs(x), np.abs(y)
    fam = spec.family
    if fam is Family.Central:
        return abs(a) * x * x + abs(b) * y * y + 1
    if fam is Family.Parabola:
        return abs(a) * x * x + abs(b + 1) * y * y + 2 * ay + abs(b - 1)
    if fam is Family.SemiHyperbola:
        return abs(a) * x * x + 2 * abs(b) * y * y + 2 * ay
    return 1 + x * x + y * y + 2 * abs(a) * ay * (ax + 1)


def discriminant_xy(spec: ConicSpec, x, y):
    """The radicand of the closed-form tangent coordinates.

    Nonnegative off the symmetry axis exactly when real tangents exist.
    """
    a, b = spec.a, spec.b
    fam = spec.family
    if fam is Family.Central:
        return a * b * y * y * (a * x * x + b * y * y - 1)
    if fam is Family.Parabola:
        return a * b * b * x * x * (a * x * x + b * (y * y - 1) + (y - 1) ** 2)
    if fam is Family.SemiHyperbola:
        return a * (a * x * x + 2 * y * (b * y - 1))
    return y * y * (x * x + y * y - 1 - 2 * a * (x + 1) * y)


def _disc_prefactor(spec: ConicSpec, x, y):
    a, b = spec.a, spec.b
    fam = spec.family
    if fam is Family.Central:
        return a * b * y * y
    if fam is Family.Parabola:
        return a * b * b * x * x
    if fam is Family.SemiHyperbola:
        return a + 0 * x
    return y * y + 0 * x


def closed_form_arrays(
    spec: ConicSpec,
    x,
    y,
    root_sign: int = 1,
    inner_sign: int = -1,
    printed_pairing: bool = False,
):
    """Closed-form tangent coordinates, elementwise over arrays.

    Returns ``(u1, u2, v1, v2, disc, degenerate)``. ``disc`` is the radicand
    after clamping tiny negatives to zero (still negative for points with no
    real tangents); ``degenerate`` flags points where a denominator vanishes
    and the formulas must not be used.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a, b = spec.a, spec.b
    fam = spec.family

    disc = discriminant_xy(spec, x, y)
    tol = DISC_TOL * np.abs(_disc_prefactor(spec, x, y)) * _residual_scale(spec, x, y)
    disc = np.where((disc < 0) & (-disc <= tol), 0.0, disc)
    r = root_sign * np.sqrt(np.where(disc >= 0, disc, np.nan))
    mag = np.maximum(1.0, np.maximum(np.abs(x), np.abs(y)))

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if fam is Family.Central:
            d1 = a * x * x + b * y * y
            degenerate = (np.abs(d1) <= DENOM_GUARD * (abs(a) * x * x + abs(b) * y * y)) | (
                np.abs(y) <= DENOM_GUARD * mag
            )
            d2 = a * x * x * y + b * y**3
            u1 = -(a * x + r) / d1
            u2 = (-b * y * y + x * r) / d2
            v1 = (-a * x + r) / d1
            v2 = -(b * y * y + x * r) / d2
        elif fam is Family.Parabola:
            d2 = a * (b - 1) * x * x + b * b * y * y
            degenerate = (
                np.abs(d2) <= DENOM_GUARD * (abs(a * (b - 1)) * x * x + b * b * y * y)
            ) | (np.abs(x) <= DENOM_GUARD * mag)
            d1 = a * (b - 1) * x**3 + b * b * x * y * y
            p = a * x * x * (b + y - 1)
            q = a * x * x - b * b * y
            u1 = -(p + y * r) / d1
            v1 = (-p + y * r) / d1
            if printed_pairing:
                u2, v2 = (q - r) / d2, (q + r) / d2
            else:
                u2, v2 = (q + r) / d2, (q - r) / d2
        elif fam is Family.SemiHyperbola:
            degenerate = np.abs(y) <= DENOM_GUARD * mag
            if inner_sign == -1:
                r2 = r
            else:
                rad2 = a * (a * x * x + 2 * y * (b * y + 1))
                r2 = root_sign * np.sqrt(np.where(rad2 >= 0, rad2, np.nan))
            u1 = -(a * x + r) / y
            u2 = (a * x * x - y + x * r2) / (y * y)
            v1 = (-a * x + r) / y
            v2 = (a * x * x - y - x * r2) / (y * y)
        else:
            den = x * x + y * y - 2 * a * x * y + a * a * y * y
            degenerate = (np.abs(y) <= DENOM_GUARD * mag) | (
                np.abs(den) <= DENOM_GUARD * (x * x + y * y + 2 * a * np.abs(x * y) + a * a * y * y)
            )
            s = (1 + a * y) * (x - a * y)
            t = y * y - a * x * (x + 1) * y + a * a * (x + 1) * y * y
            u1 = (-s + r) / den
            u2 = -(t + x * r) / (y * den)
            v1 = -(s + r) / den
            v2 = -(t - x * r) / (y * den)

    finite = np.isfinite(u1) & np.isfinite(u2) & np.isfinite(v1) & np.isfinite(v2)
    degenerate = degenerate | ((disc >= 0) & ~finite)
    return u1, u2, v1, v2, disc, degenerate


def generic_arrays(line_matrix: np.ndarray, x, y):
    """Tangents through affine points via the pencil quadratic.

    Lines through ``P = (x, y, 1)`` are ``s*(0, 1, -y) + t*(-1, 0, x)``.
    Returns ``(U, V, disc)`` with ``U``, ``V`` of shape ``x.shape + (3,)``;
    rows where ``disc < 0`` are NaN.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    zero = np.zeros_like(x)
    one = np.ones_like(x)
    l1 = np.stack([zero, one, -y], axis=-1)
    l2 = np.stack([-one, zero, x], axis=-1)
    return _pencil(line_matrix, l1, l2)


def _pencil(A: np.ndarray, l1: np.ndarray, l2: np.ndarray):
    al = np.einsum("...i,ij,...j->...", l1, A, l1)
    be = np.einsum("...i,ij,...j->...", l1, A, l2)
    ga = np.einsum("...i,ij,...j->...", l2, A, l2)
    disc = be * be - al * ga
    # roundoff in al, be, ga is relative to |A| |l|^2, not to their values
    n1 = np.sum(l1 * l1, axis=-1)
    n2 = np.sum(l2 * l2, axis=-1)
    tol = DISC_TOL * np.abs(A).max() ** 2 * n1 * n2
    disc = np.where((disc < 0) & (-disc <= tol), 0.0, disc)
    sq = np.sqrt(np.where(disc >= 0, disc, np.nan))
    sgn = np.where(be >= 0, 1.0, -1.0)
    q = -(be + sgn * sq)
    # roots of al*s^2 + 2*be*s*t + ga*t^2 as homogeneous pairs (s, t)
    r1 = q[..., None] * l1 + al[..., None] * l2
    r2 = ga[..., None] * l1 + q[..., None] * l2
    # with a double root one representative can collapse to roundoff
    m1 = np.linalg.norm(r1, axis=-1)
    m2 = np.linalg.norm(r2, axis=-1)
    tiny1 = m1 <= 1e-8 * m2
    tiny2 = m2 <= 1e-8 * m1
    r1, r2 = np.where(tiny1[..., None], r2, r1), np.where(tiny2[..., None], r1, r2)
    return r1, r2, disc


def tangents_generic(M: ConicMatrices, P: Sequence[float]) -> TangentPair:
    """Tangents from `P` found by solving the pencil quadratic.

    `P` may be affine ``(x, y)`` or homogeneous ``(x, y, w)``.

    Raises:
        NoRealTangent: if `P` is interior (complex tangents).
    """
    p = np.asarray(P, dtype=float)
    if p.shape == (2,):
        p = np.array([p[0], p[1], 1.0])
    k = int(np.argmax(np.abs(p)))
    i, j = [m for m in range(3) if m != k]
    e = np.eye(3)
    l1, l2 = np.cross(p, e[i]), np.cross(p, e[j])
    u, v, disc = _pencil(M.line_matrix, l1, l2)
    if not disc >= 0:
        raise NoRealTangent(f"no real tangent through {p.tolist()}")
    return TangentPair(_normalize_line(u), _normalize_line(v), bool(disc == 0), "generic")


def _closed(
    spec: ConicSpec,
    P,
    fallback: bool,
    root_sign: int = 1,
    inner_sign: int = -1,
    printed_pairing: bool = False,
) -> TangentPair:
    x, y = affine(P)
    u1, u2, v1, v2, disc, degenerate = closed_form_arrays(
        spec, x, y, root_sign=root_sign, inner_sign=inner_sign, printed_pairing=printed_pairing
    )
    if bool(degenerate):
        if not fallback:
            raise DegenerateDenominator(f"closed form is singular at ({x}, {y}) for {spec}")
        try:
            return tangents_generic(matrices(spec), (x, y))
        except NoRealTangent as exc:
            raise NotExternalPoint(str(exc)) from None
    if not disc >= 0:
        raise NotExternalPoint(f"({x}, {y}) is not an external point of {spec}")
    u = np.array([float(u1), float(u2), 1.0])
    v = np.array([float(v1), float(v2), 1.0])
    return TangentPair(u, v, bool(disc == 0), "closed")


def tangents_central(a: float, b: float, P, fallback: bool = True, root_sign: int = 1) -> TangentPair:
    """Tangents to ``a x^2 + b y^2 = 1`` through the affine point `P`."""
    return _closed(ConicSpec(Family.Central, a, b), P, fallback, root_sign)


def tangents_parabola(
    a: float,
    b: float,
    P,
    fallback: bool = True,
    root_sign: int = 1,
    printed_pairing: bool = False,
) -> TangentPair:
    """Tangents to ``a x^2 + (b+1) y^2 - 2y = b - 1`` through `P`."""
    return _closed(
        ConicSpec(Family.Parabola, a, b), P, fallback, root_sign, printed_pairing=printed_pairing
    )


def tangents_semi_hyperbola(
    a: float,
    b: float,
    P,
    fallback: bool = True,
    root_sign: int = 1,
    inner_sign: int = -1,
) -> TangentPair:
    """Tangents to ``a x^2 + 2 b y^2 - 2 y = 0`` through `P`."""
    return _closed(
        ConicSpec(Family.SemiHyperbola, a, b), P, fallback, root_sign, inner_sign=inner_sign
    )


def tangents_osculating(a: float, P, fallback: bool = True, root_sign: int = 1) -> TangentPair:
    """Tangents to ``(1 - x^2 - y^2) + 2 a y (x + 1) = 0`` through `P`."""
    return _closed(ConicSpec(Family.OsculatingParabola, a), P, fallback, root_sign)


def tangent_pair(spec: ConicSpec, P, fallback: bool = True) -> TangentPair:
    """Dispatch to the closed form of the conic's family."""
    return _closed(spec, P, fallback)


def same_line(p: np.ndarray, q: np.ndarray) -> float:
    """Deviation between two lines up to scale (0 means identical)."""
    p = p / np.linalg.norm(p)
    q = q / np.linalg.norm(q)
    return float(min(np.linalg.norm(p - q), np.linalg.norm(p + q)))


def pair_deviation(first: TangentPair, second: TangentPair) -> float:
    """Deviation between two tangent pairs, ignoring order and scale."""
    straight = max(same_line(first.u, second.u), same_line(first.v, second.v))
    swapped = max(same_line(first.u, second.v), same_line(first.v, second.u))
    return min(straight, swapped)


def incidence_residual(u: np.ndarray, P) -> float:
    x, y = affine(P)
    p = np.array([x, y, 1.0])
    return float(abs(u @ p) / (np.linalg.norm(u) * np.linalg.norm(p)))


def tangency_residual(u: np.ndarray, M: ConicMatrices) -> float:
    A = M.line_matrix
    return float(abs(u @ A @ u) / (np.abs(A).max() * (u @ u)))


def closed_form_residuals(spec: ConicSpec, pair: TangentPair, P, M: Optional[ConicMatrices] = None):
    """Largest relative incidence and tangency residuals of a pair."""
    M = M or matrices(spec)
    inc = max(incidence_residual(pair.u, P), incidence_residual(pair.v, P))
    tan = max(tangency_residual(pair.u, M), tangency_residual(pair.v, M))
    return inc, tan
