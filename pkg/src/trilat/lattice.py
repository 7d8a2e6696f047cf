"""Lattice of congruent triangles.

The reference triangle has side ``c`` on the x-axis, vertex ``A`` (angle
``alpha``) at the origin and vertex ``B`` at ``(c, 0)``.  The lattice is
generated by the translations

    e1 = (c, 0)                       (column direction)
    e2 = (b cos(alpha), b sin(alpha)) (row direction)

so the three line families are ``y = k h_c`` and the lines parallel to
the sides ``b`` and ``a`` through the lattice points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import DegenerateTriangle

Parity = Literal["lower", "upper"]


@dataclass(frozen=True)
class TriangleLattice:
    a: float
    b: float
    c: float
    alpha: float
    beta: float
    gamma: float
    Q: float
    h_a: float
    h_b: float
    h_c: float
    rho: float
    _basis: np.ndarray = field(repr=False, compare=False)
    _inverse: np.ndarray = field(repr=False, compare=False)

    @property
    def sides(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

    @property
    def angles(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)

    @property
    def e1(self) -> np.ndarray:
        return self._basis[:, 0].copy()

    @property
    def e2(self) -> np.ndarray:
        return self._basis[:, 1].copy()

    @property
    def is_acute_or_right(self) -> bool:
        return max(self.angles) <= math.pi / 2 + 1e-12

    def to_cell_coords(self, points) -> np.ndarray:
        """Coordinates ``(u, v)`` with ``p = u e1 + v e2``."""
        pts = np.asarray(points, dtype=float)
        return pts @ self._inverse.T

    def relabeled(self, order: tuple[int, int, int]) -> "TriangleLattice":
        """Same triangle with sides taken in a different order."""
        s = self.sides
        return lattice_from_sides(*(s[i] for i in order))


@dataclass(frozen=True, order=True)
class CellIndex:
    k_row: int
    k_col: int
    parity: Parity = "lower"


def _angle_from_sides(opp: float, s1: float, s2: float) -> float:
    cos_val = (s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2)
    return math.acos(min(1.0, max(-1.0, cos_val)))


def lattice_from_sides(a: float, b: float, c: float) -> TriangleLattice:
    """Build the lattice from the three side lengths.

    Angles come from the law of cosines; ``gamma`` is taken as
    ``pi - alpha - beta`` so the angle sum is exact.
    """
    a, b, c = float(a), float(b), float(c)
    if not (a > 0 and b > 0 and c > 0) or not all(map(math.isfinite, (a, b, c))):
        raise DegenerateTriangle(f"sides must be positive and finite, got {(a, b, c)}")
    if a + b <= c or a + c <= b or b + c <= a:
        raise DegenerateTriangle(f"triangle inequality fails for {(a, b, c)}")
    # Heron with the numerically stable ordering (Kahan)
    x, y, z = sorted((a, b, c), reverse=True)
    area = 0.25 * math.sqrt((x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z)))
    if area <= 1e-14 * x * x:
        raise DegenerateTriangle(f"triangle {(a, b, c)} is numerically flat")

    alpha = _angle_from_sides(a, b, c)
    beta = _angle_from_sides(b, a, c)
    gamma = math.pi - alpha - beta
    Q = 2.0 * area
    basis = np.array([[c, b * math.cos(alpha)], [0.0, b * math.sin(alpha)]])
    return TriangleLattice(
        a=a, b=b, c=c,
        alpha=alpha, beta=beta, gamma=gamma,
        Q=Q,
        h_a=Q / a, h_b=Q / b, h_c=Q / c,
        rho=Q / (a + b + c),
        _basis=basis,
        _inverse=np.linalg.inv(basis),
    )


def cell_vertices(lat: TriangleLattice, idx: CellIndex) -> np.ndarray:
    """Vertices of the indexed triangle as a ``(3, 2)`` array, counterclockwise."""
    e1, e2 = lat._basis[:, 0], lat._basis[:, 1]
    origin = idx.k_col * e1 + idx.k_row * e2
    if idx.parity == "lower":
        return np.array([origin, origin + e1, origin + e2])
    if idx.parity == "upper":
        return np.array([origin + e1, origin + e1 + e2, origin + e2])
    raise ValueError(f"unknown parity {idx.parity!r}")


def cells_near(lat: TriangleLattice, center, radius: float) -> list[CellIndex]:
    """Every cell whose triangle meets the closed disc; a superset is returned.

    Uses the bounding box of the disc in parallelogram coordinates,
    widened by one cell on each side.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    u, v = lat.to_cell_coords(center)
    ru = radius * np.hypot(*lat._inverse[0])
    rv = radius * np.hypot(*lat._inverse[1])
    cols = range(math.floor(u - ru) - 1, math.floor(u + ru) + 2)
    rows = range(math.floor(v - rv) - 1, math.floor(v + rv) + 2)
    return [CellIndex(r, k, p) for r in rows for k in cols for p in ("lower", "upper")]
