"""Convex bodies described by their support function.

Convention: ``support(phi) = max over body points p of p . (cos phi, sin phi)``
with the reference point ``O`` at the origin of the body frame.  This is the
support function of the body at rest.  The function used for a body that
rotates under a fixed support line is its mirror image ``s(-phi)``; every
quantity computed in this package (the angular correlation integrals, the
fit condition, the hit probabilities) is invariant under that reflection.

All ``support``/``width``/``support_point`` methods accept scalars or numpy
arrays of angles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import AxisOrder, EmptyInput, NegativeLength, NotConvex

TWO_PI = 2.0 * math.pi


def _unit(phi):
    phi = np.asarray(phi, dtype=float)
    return np.cos(phi), np.sin(phi)


def _check_length(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise NegativeLength(f"{name} must be a non-negative length, got {value}")
    return value


@dataclass(frozen=True, kw_only=True)
class ConvexBody:
    kind: str
    perimeter: float
    area: float
    kink_angles: tuple[float, ...]
    centrally_symmetric: bool
    outer_radius: float  # max |p| over the body, i.e. max of the support function
    diameter: float

    @property
    def u(self) -> float:
        return self.perimeter

    @property
    def F(self) -> float:
        return self.area

    def support(self, phi):
        raise NotImplementedError

    def support_point(self, phi):
        """Boundary point(s) attaining the support value; shape ``(..., 2)``."""
        raise NotImplementedError

    def width(self, phi):
        phi = np.asarray(phi, dtype=float)
        return self.support(phi) + self.support(phi + math.pi)

    def _kernel_spec(self) -> tuple[int, np.ndarray, np.ndarray]:
        """Flat encoding used by the compiled hit counter: (code, vertices, params)."""
        raise NotImplementedError


@dataclass(frozen=True, kw_only=True)
class PolygonBody(ConvexBody):
    """Convex polygon (or segment) given by its vertices relative to ``O``."""

    vertices: np.ndarray

    def support(self, phi):
        cx, cy = _unit(phi)
        proj = np.multiply.outer(cx, self.vertices[:, 0]) + np.multiply.outer(cy, self.vertices[:, 1])
        return proj.max(axis=-1)

    def support_point(self, phi):
        cx, cy = _unit(phi)
        proj = np.multiply.outer(cx, self.vertices[:, 0]) + np.multiply.outer(cy, self.vertices[:, 1])
        return self.vertices[proj.argmax(axis=-1)]

    def _kernel_spec(self):
        return 0, np.ascontiguousarray(self.vertices, dtype=float), np.zeros(2)


@dataclass(frozen=True, kw_only=True)
class EllipseBody(ConvexBody):
    """Ellipse centred at ``O`` with semi-axes along x and y."""

    semi_x: float
    semi_y: float

    def support(self, phi):
        cx, cy = _unit(phi)
        return np.sqrt((self.semi_x * cx) ** 2 + (self.semi_y * cy) ** 2)

    def support_point(self, phi):
        cx, cy = _unit(phi)
        A2, B2 = self.semi_x**2, self.semi_y**2
        h = np.sqrt(A2 * cx**2 + B2 * cy**2)
        safe = np.where(h > 0, h, 1.0)
        px = np.where(h > 0, A2 * cx / safe, 0.0)
        py = np.where(h > 0, B2 * cy / safe, 0.0)
        return np.stack([px, py], axis=-1)

    def _kernel_spec(self):
        return 1, np.zeros((1, 2)), np.array([self.semi_x, self.semi_y])


@dataclass(frozen=True, kw_only=True)
class HalfDiscBody(ConvexBody):
    """Half disc ``{|p| <= r, p_y <= 0}``; ``O`` is the midpoint of the flat edge.

    In this placement the support function is ``r|cos phi|`` on ``[0, pi)``
    and ``r`` on ``[pi, 2 pi)``.
    """

    radius: float

    def support(self, phi):
        phi = np.mod(np.asarray(phi, dtype=float), TWO_PI)
        return np.where(phi < math.pi, self.radius * np.abs(np.cos(phi)), self.radius)

    def support_point(self, phi):
        cx, cy = _unit(phi)
        r = self.radius
        arc = cy < 0
        px = np.where(arc, r * cx, np.where(cx >= 0, r, -r))
        py = np.where(arc, r * cy, 0.0)
        return np.stack([px, py], axis=-1)

    def _kernel_spec(self):
        return 2, np.zeros((1, 2)), np.array([self.radius, 0.0])


def make_needle(ell: float) -> PolygonBody:
    """Segment of length ``ell`` along the x-axis, referenced at its midpoint."""
    ell = _check_length("ell", ell)
    half = ell / 2.0
    return PolygonBody(
        kind="needle",
        perimeter=2.0 * ell,
        area=0.0,
        kink_angles=(math.pi / 2, 3 * math.pi / 2),
        centrally_symmetric=True,
        outer_radius=half,
        diameter=ell,
        vertices=np.array([[-half, 0.0], [half, 0.0]]),
    )


def make_rectangle(g: float, h: float) -> PolygonBody:
    """Rectangle with side ``g`` along x and ``h`` along y, centred at ``O``."""
    g = _check_length("g", g)
    h = _check_length("h", h)
    gx, hy = g / 2.0, h / 2.0
    return PolygonBody(
        kind="rectangle",
        perimeter=2.0 * (g + h),
        area=g * h,
        kink_angles=(0.0, math.pi / 2, math.pi, 3 * math.pi / 2),
        centrally_symmetric=True,
        outer_radius=math.hypot(gx, hy),
        diameter=math.hypot(g, h),
        vertices=np.array([[-gx, -hy], [gx, -hy], [gx, hy], [-gx, hy]]),
    )


def ellipse_E(mu: float, rtol: float = 1e-15) -> float:
    """Complete elliptic integral of the second kind, modulus ``mu``.

    ``E(mu) = int_0^{pi/2} sqrt(1 - mu^2 sin^2 t) dt`` evaluated with the
    arithmetic-geometric mean.
    """
    mu = abs(float(mu))
    if mu > 1.0:
        raise ValueError("modulus must satisfy |mu| <= 1")
    if mu == 1.0:
        return 1.0
    a, b = 1.0, math.sqrt((1.0 - mu) * (1.0 + mu))
    c = mu
    total = 0.5 * c * c
    weight = 0.5
    while abs(a - b) > rtol * a:
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        weight *= 2.0
        total += weight * c * c
    K = math.pi / (2.0 * a)
    return K * (1.0 - total)


def make_ellipse(g: float, h: float) -> EllipseBody:
    """Ellipse with full major axis ``g`` (along x) and minor axis ``h``."""
    g = _check_length("g", g)
    h = _check_length("h", h)
    if h > g:
        raise AxisOrder(f"minor axis h={h} exceeds major axis g={g}")
    mu = math.sqrt(max(0.0, 1.0 - (h / g) ** 2)) if g > 0 else 0.0
    return EllipseBody(
        kind="ellipse",
        perimeter=2.0 * g * ellipse_E(mu) if g > 0 else 0.0,
        area=math.pi * g * h / 4.0,
        kink_angles=() if h > 0 or g == 0 else (math.pi / 2, 3 * math.pi / 2),
        centrally_symmetric=True,
        outer_radius=g / 2.0,
        diameter=g,
        semi_x=g / 2.0,
        semi_y=h / 2.0,
    )


def make_disc(r: float) -> EllipseBody:
    r = _check_length("r", r)
    return EllipseBody(
        kind="disc",
        perimeter=TWO_PI * r,
        area=math.pi * r * r,
        kink_angles=(),
        centrally_symmetric=True,
        outer_radius=r,
        diameter=2.0 * r,
        semi_x=r,
        semi_y=r,
    )


def make_half_disc(r: float) -> HalfDiscBody:
    r = _check_length("r", r)
    return HalfDiscBody(
        kind="half_disc",
        perimeter=(math.pi + 2.0) * r,
        area=math.pi * r * r / 2.0,
        kink_angles=(0.0, math.pi / 2, math.pi),
        centrally_symmetric=False,
        outer_radius=r,
        diameter=2.0 * r,
        radius=r,
    )


def _hull(points: np.ndarray) -> np.ndarray:
    """Counterclockwise hull vertices; collinear points are dropped."""
    try:
        hull = ConvexHull(points)
    except QhullError:
        # all points collinear (or coincident): keep the two extremes
        direction = points[np.argmax(np.linalg.norm(points - points[0], axis=1))] - points[0]
        if not np.any(direction):
            return points[:1]
        t = points @ direction
        return np.array([points[np.argmin(t)], points[np.argmax(t)]])
    return points[hull.vertices]


def make_polygon(vertices) -> PolygonBody:
    """Convex hull of the given points, referenced at its area centroid."""
    pts = np.asarray(vertices, dtype=float)
    if pts.size == 0:
        raise EmptyInput("polygon needs at least two vertices")
    pts = pts.reshape(-1, 2)
    if len(pts) < 2:
        raise EmptyInput("polygon needs at least two vertices")
    if not np.all(np.isfinite(pts)):
        raise NotConvex("vertex coordinates must be finite")
    hull = _hull(pts)
    if len(hull) == 1:
        raise NotConvex("all vertices coincide")

    if len(hull) == 2:
        centre = hull.mean(axis=0)
        area = 0.0
    else:
        x, y = hull[:, 0], hull[:, 1]
        xn, yn = np.roll(x, -1), np.roll(y, -1)
        cross = x * yn - xn * y
        area = 0.5 * cross.sum()
        centre = np.array([((x + xn) * cross).sum(), ((y + yn) * cross).sum()]) / (6.0 * area)
    local = hull - centre

    edges = np.roll(local, -1, axis=0) - local
    lengths = np.hypot(edges[:, 0], edges[:, 1])
    if len(hull) == 2:
        perimeter = 2.0 * lengths[0]
    else:
        perimeter = float(lengths.sum())
    # outward normal of a ccw edge (dx, dy) is (dy, -dx)
    normals = np.mod(np.arctan2(-edges[:, 0], edges[:, 1]), TWO_PI)
    if len(hull) == 2:
        normals = normals[:1]
        normals = np.concatenate([normals, np.mod(normals + math.pi, TWO_PI)])

    radius = float(np.hypot(local[:, 0], local[:, 1]).max())
    scale = max(radius, 1e-300)
    symmetric = all(
        np.min(np.hypot(*(local + v).T)) <= 1e-12 * scale for v in local
    )
    diffs = local[:, None, :] - local[None, :, :]
    diameter = float(np.hypot(diffs[..., 0], diffs[..., 1]).max())
    return PolygonBody(
        kind="polygon",
        perimeter=perimeter,
        area=float(abs(area)),
        kink_angles=tuple(sorted(float(t) for t in normals)),
        centrally_symmetric=symmetric,
        outer_radius=radius,
        diameter=diameter,
        vertices=local,
    )


def read_polygon_file(path) -> np.ndarray:
    """Read ``x y`` pairs, one per line; ``#`` starts a comment."""
    text = Path(path).read_text()
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'x y', got {line!r}")
        rows.append((float(parts[0]), float(parts[1])))
    if not rows:
        raise EmptyInput(f"{path}: no vertices")
    return np.array(rows)


@dataclass(frozen=True)
class PlacedBody:
    """A body rotated by ``phi`` about ``O`` and then translated by ``t``."""

    body: ConvexBody
    phi: float
    t: tuple[float, float]

    def support(self, theta):
        theta = np.asarray(theta, dtype=float)
        cx, cy = _unit(theta)
        return self.body.support(theta - self.phi) + self.t[0] * cx + self.t[1] * cy

    def width(self, theta):
        theta = np.asarray(theta, dtype=float)
        return self.support(theta) + self.support(theta + math.pi)

    def support_point(self, theta):
        local = self.body.support_point(np.asarray(theta, dtype=float) - self.phi)
        c, s = math.cos(self.phi), math.sin(self.phi)
        x = c * local[..., 0] - s * local[..., 1] + self.t[0]
        y = s * local[..., 0] + c * local[..., 1] + self.t[1]
        return np.stack([x, y], axis=-1)

    def support_vector(self, d) -> np.ndarray:
        """Support point for a (not necessarily unit) direction vector."""
        return self.support_point(math.atan2(d[1], d[0]))


def rotate_translate(body: ConvexBody, phi: float, t=(0.0, 0.0)) -> PlacedBody:
    return PlacedBody(body, float(phi), (float(t[0]), float(t[1])))
