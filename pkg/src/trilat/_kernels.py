"""Compiled hit counter used by the Monte Carlo simulator.

Body encoding (see ``ConvexBody._kernel_spec``):
    0  polygon / segment, vertices relative to O
    1  ellipse, params = (semi_x, semi_y)
    2  half disc {|p| <= r, p_y <= 0}, params = (r, 0)

The intersection loop mirrors :func:`trilat.gjk.intersects`.
"""

from __future__ import annotations

import math

import numba
import numpy as np

MAX_ITER = 128
NONCONVERGED = -1


@numba.njit(cache=True, nogil=True)
def _local_support(kind, verts, params, dx, dy):
    if kind == 0:
        best = -np.inf
        bx = 0.0
        by = 0.0
        for i in range(verts.shape[0]):
            t = verts[i, 0] * dx + verts[i, 1] * dy
            if t > best:
                best = t
                bx = verts[i, 0]
                by = verts[i, 1]
        return bx, by
    if kind == 1:
        A2 = params[0] * params[0]
        B2 = params[1] * params[1]
        h = math.sqrt(A2 * dx * dx + B2 * dy * dy)
        if h == 0.0:
            return 0.0, 0.0
        return A2 * dx / h, B2 * dy / h
    r = params[0]
    if dy < 0.0:
        n = math.sqrt(dx * dx + dy * dy)
        return r * dx / n, r * dy / n
    if dx >= 0.0:
        return r, 0.0
    return -r, 0.0


@numba.njit(cache=True, nogil=True)
def _body_support(kind, verts, params, cphi, sphi, tx, ty, dx, dy):
    # rotate the direction into the body frame, then the point back out
    lx = cphi * dx + sphi * dy
    ly = -sphi * dx + cphi * dy
    px, py = _local_support(kind, verts, params, lx, ly)
    return cphi * px - sphi * py + tx, sphi * px + cphi * py + ty


@numba.njit(cache=True, nogil=True)
def _tri_support(tri, dx, dy):
    best = -np.inf
    bx = 0.0
    by = 0.0
    for i in range(3):
        t = tri[i, 0] * dx + tri[i, 1] * dy
        if t > best:
            best = t
            bx = tri[i, 0]
            by = tri[i, 1]
    return bx, by


@numba.njit(cache=True, nogil=True)
def _segment_closest(ax, ay, bx, by):
    # returns (vx, vy, keep) with keep: 0 -> a only, 1 -> b only, 2 -> both
    ex = bx - ax
    ey = by - ay
    den = ex * ex + ey * ey
    if den == 0.0:
        return ax, ay, 0
    t = -(ax * ex + ay * ey) / den
    if t <= 0.0:
        return ax, ay, 0
    if t >= 1.0:
        return bx, by, 1
    return ax + t * ex, ay + t * ey, 2


@numba.njit(cache=True, nogil=True)
def gjk_intersects(kind, verts, params, phi, tx, ty, tri, eps):
    """1 if the placed body meets the triangle, 0 if not, -1 on non-convergence."""
    cphi = math.cos(phi)
    sphi = math.sin(phi)
    sx = np.empty(3)
    sy = np.empty(3)

    px, py = _body_support(kind, verts, params, cphi, sphi, tx, ty, 1.0, 0.0)
    qx, qy = _tri_support(tri, -1.0, 0.0)
    vx = px - qx
    vy = py - qy
    sx[0] = vx
    sy[0] = vy
    n = 1
    for _ in range(MAX_ITER):
        vv = vx * vx + vy * vy
        if vv <= eps * eps:
            return 1
        norm = math.sqrt(vv)
        px, py = _body_support(kind, verts, params, cphi, sphi, tx, ty, -vx, -vy)
        qx, qy = _tri_support(tri, vx, vy)
        wx = px - qx
        wy = py - qy
        lower = (vx * wx + vy * wy) / norm
        if lower > eps:
            return 0
        if norm - lower <= max(eps, 1e-14 * norm):
            return 1
        sx[n] = wx
        sy[n] = wy
        n += 1
        if n == 2:
            nx, ny, keep = _segment_closest(sx[0], sy[0], sx[1], sy[1])
            if keep == 0:
                n = 1
            elif keep == 1:
                sx[0] = sx[1]
                sy[0] = sy[1]
                n = 1
        else:
            ax, ay, bx, by, cx, cy = sx[0], sy[0], sx[1], sy[1], sx[2], sy[2]
            area = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
            inside = False
            if area != 0.0:
                s1 = (bx * cy - by * cx) / area
                s2 = (cx * ay - cy * ax) / area
                s3 = (ax * by - ay * bx) / area
                inside = s1 >= 0.0 and s2 >= 0.0 and s3 >= 0.0
            if inside:
                return 1
            best = np.inf
            nx = 0.0
            ny = 0.0
            f0x = f0y = f1x = f1y = 0.0
            fn = 1
            for e in range(3):
                i = e
                j = (e + 1) % 3
                cxx, cyy, keep = _segment_closest(sx[i], sy[i], sx[j], sy[j])
                d = cxx * cxx + cyy * cyy
                if d < best:
                    best = d
                    nx = cxx
                    ny = cyy
                    if keep == 0:
                        f0x, f0y, fn = sx[i], sy[i], 1
                    elif keep == 1:
                        f0x, f0y, fn = sx[j], sy[j], 1
                    else:
                        f0x, f0y, f1x, f1y, fn = sx[i], sy[i], sx[j], sy[j], 2
            sx[0] = f0x
            sy[0] = f0y
            sx[1] = f1x
            sy[1] = f1y
            n = fn
        if nx * nx + ny * ny >= vv * (1.0 - 1e-15):
            return 1
        vx = nx
        vy = ny
    return NONCONVERGED


@numba.njit(cache=True, nogil=True)
def _point_triangle_dist2(x, y, tri):
    # 0 inside (ccw triangle), else squared distance to the nearest edge
    inside = True
    for i in range(3):
        j = (i + 1) % 3
        ex = tri[j, 0] - tri[i, 0]
        ey = tri[j, 1] - tri[i, 1]
        if ex * (y - tri[i, 1]) - ey * (x - tri[i, 0]) < 0.0:
            inside = False
    if inside:
        return 0.0
    best = np.inf
    for i in range(3):
        j = (i + 1) % 3
        ax = tri[i, 0] - x
        ay = tri[i, 1] - y
        vx, vy, _ = _segment_closest(ax, ay, tri[j, 0] - x, tri[j, 1] - y)
        d = vx * vx + vy * vy
        if d < best:
            best = d
    return best


@numba.njit(cache=True, nogil=True)
def count_hits_batch(kind, verts, params, radius, e1, e2, inv, xs, ys, phis, eps, out):
    """Fill ``out[k]`` with the number of triangles met by throw ``k``.

    Returns the index of a throw whose intersection search failed, or -1.
    """
    ru = radius * math.sqrt(inv[0, 0] ** 2 + inv[0, 1] ** 2)
    rv = radius * math.sqrt(inv[1, 0] ** 2 + inv[1, 1] ** 2)
    reach = (radius + eps) * (radius + eps)
    tri = np.empty((3, 2))
    for k in range(xs.shape[0]):
        x = xs[k]
        y = ys[k]
        u = inv[0, 0] * x + inv[0, 1] * y
        v = inv[1, 0] * x + inv[1, 1] * y
        c0 = math.floor(u - ru) - 1
        c1 = math.floor(u + ru) + 1
        r0 = math.floor(v - rv) - 1
        r1 = math.floor(v + rv) + 1
        hits = 0
        for row in range(r0, r1 + 1):
            for col in range(c0, c1 + 1):
                ox = col * e1[0] + row * e2[0]
                oy = col * e1[1] + row * e2[1]
                for parity in range(2):
                    if parity == 0:
                        tri[0, 0] = ox
                        tri[0, 1] = oy
                        tri[1, 0] = ox + e1[0]
                        tri[1, 1] = oy + e1[1]
                        tri[2, 0] = ox + e2[0]
                        tri[2, 1] = oy + e2[1]
                    else:
                        tri[0, 0] = ox + e1[0]
                        tri[0, 1] = oy + e1[1]
                        tri[1, 0] = ox + e1[0] + e2[0]
                        tri[1, 1] = oy + e1[1] + e2[1]
                        tri[2, 0] = ox + e2[0]
                        tri[2, 1] = oy + e2[1]
                    d2 = _point_triangle_dist2(x, y, tri)
                    if d2 == 0.0:
                        hits += 1
                        continue
                    if d2 > reach:
                        continue
                    res = gjk_intersects(kind, verts, params, phis[k], x, y, tri, eps)
                    if res < 0:
                        return k
                    hits += res
        out[k] = hits
    return -1
