"""Closed-form hit distributions for particular bodies.

These formulas are written out term by term and serve as references for
the numerical engine.  The ellipse integrals go through
``scipy.integrate.quad`` so the check does not share the engine's
quadrature code.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad

from .body import ellipse_E, make_half_disc, make_needle, make_rectangle, make_ellipse
from .engine import (
    DEFAULT_TOL,
    HitDistribution,
    check_fit,
    expectation,
    probabilities_from_integrals,
    _fits,
)
from .errors import BodyTooLarge, NeedleTooLong, ObtuseLatticeUnsupported, QuadratureFailure
from .lattice import TriangleLattice, lattice_from_sides

_RIGHT_TOL = 1e-12


def _require_fit(body, lat: TriangleLattice) -> float:
    margin = check_fit(body, lat)
    if not _fits(margin, lat):
        raise BodyTooLarge(margin)
    return margin


def _lattice_sums(lat: TriangleLattice):
    a, b, c = lat.sides
    al, be, ga = lat.angles
    return (
        a * a + b * b + c * c,          # sum of squared sides
        al * a * a + be * b * b + ga * c * c,  # angle-weighted squares
        a * b + b * c + c * a,
        al * b * c + be * c * a + ga * a * b,
    )


def _dist(p, lat, u, F, margin) -> HitDistribution:
    return HitDistribution(
        p=tuple(float(v) for v in p),
        expectation=expectation(lat, u, F),
        method="closed_form",
        condition_margin=margin,
    )


# ---------------------------------------------------------------------------
# needles


def markov_p1(ell: float, lat: TriangleLattice) -> float:
    """Markov's probability that a needle stays inside one triangle."""
    a, b, c = lat.sides
    Q = lat.Q
    _, weighted, _, _ = _lattice_sums(lat)
    return (
        1.0
        + ell * ell * weighted / (2.0 * math.pi * Q * Q)
        - ell * (4 * a + 4 * b + 4 * c - 3 * ell) / (2.0 * math.pi * Q)
    )


def needle_distribution(ell: float, lat: TriangleLattice) -> HitDistribution:
    margin = _require_fit(make_needle(ell), lat)
    a, b, c = lat.sides
    Q = lat.Q
    sum_sq, weighted, _, _ = _lattice_sums(lat)
    l2 = ell * ell
    line = 2.0 * (a + b + c) * ell / (math.pi * Q)
    wt = weighted * l2 / (2.0 * math.pi * Q * Q)
    cross = 3.0 * l2 / (2.0 * math.pi * Q)
    sq = sum_sq * l2 / (4.0 * Q * Q)
    p = (
        1.0 - line + wt + cross,
        line - sq - wt - cross,
        2.0 * sq - wt - cross,
        cross - sq + wt,
        0.0,
        0.0,
    )
    return _dist(p, lat, 2.0 * ell, 0.0, margin)


def santalo_equilateral(ell: float, a: float) -> HitDistribution:
    """Needle of length ``ell <= sqrt(3) a / 2`` on the equilateral lattice of side ``a``."""
    if ell < 0:
        raise ValueError("ell must be non-negative")
    if ell > math.sqrt(3.0) * a / 2.0 * (1.0 + 1e-12):
        raise NeedleTooLong(f"needle {ell} longer than the altitude {math.sqrt(3.0) * a / 2.0}")
    t = ell / a
    r3pi = math.sqrt(3.0) / math.pi
    p = (
        1.0 - 4.0 * r3pi * t + (r3pi + 2.0 / 3.0) * t * t,
        4.0 * r3pi * t - (r3pi + 5.0 / 3.0) * t * t,
        (4.0 / 3.0 - r3pi) * t * t,
        (r3pi - 1.0 / 3.0) * t * t,
        0.0,
        0.0,
    )
    lat = lattice_from_sides(a, a, a)
    return _dist(p, lat, 2.0 * ell, 0.0, lat.c - 2.0 * ell / math.sqrt(3.0))


# ---------------------------------------------------------------------------
# rectangles


def rectangle_acute(g: float, h: float, lat: TriangleLattice, margin: float | None = None) -> HitDistribution:
    """Rectangle ``g x h`` on a lattice of acute or right triangles."""
    if not lat.is_acute_or_right:
        raise ValueError("lattice has an obtuse angle; use rectangle_obtuse")
    if margin is None:
        margin = _require_fit(make_rectangle(g, h), lat)
    Q = lat.Q
    a, b, c = lat.sides
    sum_sq, weighted, _, _ = _lattice_sums(lat)
    u, F = 2.0 * (g + h), g * h
    d2 = g * g + h * h
    line = (a + b + c) * u / (math.pi * Q)
    wt = weighted * d2 / (2.0 * math.pi * Q * Q)
    cross = 3.0 * d2 / (2.0 * math.pi * Q)
    sq = sum_sq * d2 / (4.0 * Q * Q)
    fq2 = sum_sq * F / (math.pi * Q * Q)
    p = (
        1.0 - line + wt + cross + fq2 + F / Q,
        line - sq - wt - cross - 2.0 * fq2 - F / Q,
        2.0 * sq - wt - cross + fq2 - F / Q,
        cross - sq + wt,
        0.0,
        F / Q,
    )
    return _dist(p, lat, u, F, margin)


def rectangle_obtuse(g: float, h: float, lat: TriangleLattice, margin: float | None = None) -> HitDistribution:
    """Rectangle on a lattice whose angle ``alpha`` satisfies ``pi/2 <= alpha < pi``."""
    if lat.alpha < math.pi / 2 - _RIGHT_TOL:
        raise ValueError("rectangle_obtuse needs alpha >= pi/2; relabel the sides first")
    if margin is None:
        margin = _require_fit(make_rectangle(g, h), lat)
    Q = lat.Q
    a, b, c = lat.sides
    al = lat.alpha
    sum_sq, weighted, _, _ = _lattice_sums(lat)
    u, F = 2.0 * (g + h), g * h
    d2 = g * g + h * h
    pq2 = math.pi * Q * Q
    line = (a + b + c) * u / (math.pi * Q)
    wt = weighted * d2 / (2.0 * pq2)
    cross = 3.0 * d2 / (2.0 * math.pi * Q)
    sq = sum_sq * d2 / (4.0 * Q * Q)
    ang = 2.0 * al * F / (math.pi * Q)
    p = (
        1.0 - line + wt + cross + 2.0 * a * a * F / pq2 + 2.0 * F / Q - ang,
        line - sq - wt - cross - (3.0 * a * a + b * b + c * c) * F / pq2 - 2.0 * F / Q + ang,
        2.0 * sq - wt - cross + 2.0 * (b * b + c * c) * F / pq2 - 2.0 * F / Q + ang,
        cross - sq + wt - (b * b + c * c - a * a) * F / pq2 + F / Q - ang,
        0.0,
        F / Q,
    )
    return _dist(p, lat, u, F, margin)


def obtuse_first(lat: TriangleLattice) -> TriangleLattice:
    """Relabel the sides so that the largest angle is ``alpha``."""
    k = int(np.argmax(lat.angles))
    order = (k, (k + 1) % 3, (k + 2) % 3)
    return lat.relabeled(order)


def rectangle_distribution(g: float, h: float, lat: TriangleLattice) -> HitDistribution:
    margin = _require_fit(make_rectangle(g, h), lat)
    if lat.is_acute_or_right:
        return rectangle_acute(g, h, lat, margin)
    return rectangle_obtuse(g, h, obtuse_first(lat), margin)


# ---------------------------------------------------------------------------
# ellipses


def ellipse_I(g: float, h: float, x: float, abs_tol: float = DEFAULT_TOL) -> float:
    """``g^2 int_0^pi sqrt((1 - mu^2 sin^2 phi)(1 - mu^2 sin^2(phi + x)))`` with ``mu^2 = 1 - (h/g)^2``."""
    if g == 0:
        return 0.0
    m = 1.0 - (h / g) ** 2

    def integrand(t):
        return math.sqrt(max(0.0, (1.0 - m * math.sin(t) ** 2) * (1.0 - m * math.sin(t + x) ** 2)))

    points = sorted({math.pi / 2, math.fmod(math.pi / 2 - x + 2 * math.pi, math.pi)} - {0.0})
    val, err = quad(integrand, 0.0, math.pi, points=points, epsabs=abs_tol / (g * g), epsrel=0.0, limit=500)
    if err > abs_tol / (g * g) * 10:
        raise QuadratureFailure(f"ellipse integral error {err:.3g}")
    return g * g * val


def ellipse_distribution(g: float, h: float, lat: TriangleLattice, abs_tol: float = DEFAULT_TOL) -> HitDistribution:
    margin = _require_fit(make_ellipse(g, h), lat)
    mu = math.sqrt(max(0.0, 1.0 - (h / g) ** 2)) if g > 0 else 0.0
    u = 2.0 * g * ellipse_E(mu)
    F = math.pi * g * h / 4.0
    I = tuple(ellipse_I(g, h, x, abs_tol) for x in (0.0, *lat.angles))
    p = probabilities_from_integrals(lat, u, F, I, None)
    return _dist(p, lat, u, F, margin)


# ---------------------------------------------------------------------------
# half disc


def half_disc_I(r: float, x: float) -> float:
    """Width correlation of the half disc, valid for ``0 <= x <= pi/2``."""
    return (math.pi + 4.0) * r * r + 0.5 * (math.pi - 2.0 * x) * r * r * math.cos(x) + r * r * math.sin(x)


def half_disc_J(r: float, x: float) -> float:
    """Support correlation of the half disc, valid for ``0 <= x <= pi/2``."""
    return (math.pi - x) * r * r + 0.5 * (math.pi - 3.0 * x) * r * r * math.cos(x) + 2.5 * r * r * math.sin(x)


def half_disc_distribution(r: float, lat: TriangleLattice) -> HitDistribution:
    if not lat.is_acute_or_right:
        raise ObtuseLatticeUnsupported("the half-disc closed form needs an acute or right lattice")
    margin = _require_fit(make_half_disc(r), lat)
    Q = lat.Q
    a, b, c = lat.sides
    sum_sq, weighted, pair, pair_w = _lattice_sums(lat)
    r2 = r * r
    q2 = Q * Q
    pq2 = math.pi * q2
    u = (math.pi + 2.0) * r
    F = math.pi * r2 / 2.0
    line = (a + b + c) * u / (math.pi * Q)
    p = (
        1.0 - line + sum_sq * r2 / q2 + 4.0 * pair * r2 / pq2
        - weighted * r2 / (2.0 * pq2) + pair_w * r2 / pq2 - 9.0 * r2 / (2.0 * math.pi * Q),
        line - 13.0 * sum_sq * r2 / (4.0 * q2) - (8.0 - math.pi) * pair * r2 / pq2
        + 5.0 * weighted * r2 / (2.0 * pq2) - 3.0 * pair_w * r2 / pq2 + 33.0 * r2 / (2.0 * math.pi * Q),
        7.0 * sum_sq * r2 / (2.0 * q2) + (4.0 - 2.0 * math.pi) * pair * r2 / pq2
        - 7.0 * weighted * r2 / (2.0 * pq2) + 3.0 * pair_w * r2 / pq2 - 39.0 * r2 / (2.0 * math.pi * Q),
        pair * r2 / q2 - 5.0 * sum_sq * r2 / (4.0 * q2) + 3.0 * weighted * r2 / (2.0 * pq2)
        - pair_w * r2 / pq2 + 15.0 * r2 / (2.0 * math.pi * Q) - F / Q,
        0.0,
        F / Q,
    )
    return _dist(p, lat, u, F, margin)
