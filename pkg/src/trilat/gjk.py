"""Intersection of two convex sets from their support maps (2-D GJK distance loop)."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import NonConvergence

SupportMap = Callable[[np.ndarray], np.ndarray]
MAX_ITER = 128


def _closest_on_segment(a, b):
    ab = b - a
    denom = ab @ ab
    if denom == 0.0:
        return a, [a]
    t = -(a @ ab) / denom
    if t <= 0.0:
        return a, [a]
    if t >= 1.0:
        return b, [b]
    return a + t * ab, [a, b]


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def closest_on_simplex(simplex: list[np.ndarray]) -> tuple[np.ndarray, list[np.ndarray]]:
    """Point of the simplex hull nearest the origin and the face that carries it."""
    if len(simplex) == 1:
        return simplex[0], simplex
    if len(simplex) == 2:
        return _closest_on_segment(*simplex)
    a, b, c = simplex
    area = _cross(b - a, c - a)
    if area != 0.0:
        s1 = _cross(b, c) / area
        s2 = _cross(c, a) / area
        s3 = _cross(a, b) / area
        if s1 >= 0 and s2 >= 0 and s3 >= 0:
            return np.zeros(2), simplex
    best = None
    for p, q in ((a, b), (b, c), (c, a)):
        v, face = _closest_on_segment(p, q)
        d = v @ v
        if best is None or d < best[0]:
            best = (d, v, face)
    return best[1], best[2]


def intersects(support_a: SupportMap, support_b: SupportMap, eps: float = 1e-12) -> bool:
    """True iff the two closed convex sets share a point (distance ``<= eps``).

    ``support_x(d)`` must return a point of the set maximising ``d . p``.
    Runs the GJK distance iteration on the Minkowski difference ``A - B``.
    """

    def support(d):
        return np.asarray(support_a(d), dtype=float) - np.asarray(support_b(-d), dtype=float)

    v = support(np.array([1.0, 0.0]))
    simplex = [v]
    for _ in range(MAX_ITER):
        vv = v @ v
        if vv <= eps * eps:
            return True
        norm = math.sqrt(vv)
        w = support(-v)
        lower = (v @ w) / norm  # distance lower bound from the separating line
        if lower > eps:
            return False
        if norm - lower <= max(eps, 1e-14 * norm):
            return lower <= eps
        simplex.append(w)
        v_new, simplex = closest_on_simplex(simplex)
        if v_new @ v_new >= vv * (1.0 - 1e-15):
            # no progress: the iteration has stalled at the current distance
            return lower <= eps
        v = v_new
    raise NonConvergence("support-map intersection search did not converge")


def polygon_support(vertices) -> SupportMap:
    verts = np.asarray(vertices, dtype=float)

    def support(d):
        return verts[int(np.argmax(verts @ d))]

    return support


def placed_support(placed) -> SupportMap:
    """Support map of a :class:`trilat.body.PlacedBody` for direction vectors."""

    def support(d):
        return placed.support_point(math.atan2(d[1], d[0]))

    return support
