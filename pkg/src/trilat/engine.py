"""Hit-count distribution of a randomly thrown convex body.

The only body-dependent inputs are the perimeter ``u``, the area ``F`` and
the angular correlation integrals

    I(x) = int_0^pi  w(phi) w(phi + x) dphi
    J(x) = int_0^2pi s(phi) s(phi + x) dphi

at ``x in {0, alpha, beta, gamma}``.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass
from typing import Literal

import numpy as np
from scipy.optimize import minimize_scalar

from .body import ConvexBody
from .errors import BodyTooLarge
from .lattice import TriangleLattice
from .quadrature import integrate, periodic_breakpoints

Method = Literal["theorem1", "symmetric_fastpath", "closed_form", "simulation"]

DEFAULT_TOL = 1e-10
N_FIT = 4096
# relative slack on c - max c*; equality in the fit condition is harmless
FIT_RTOL = 1e-12
EXTRAPOLATED = "extrapolated, not a theorem guarantee"


@dataclass(frozen=True)
class AutocorrelationIntegrals:
    I0: float
    Ialpha: float
    Ibeta: float
    Igamma: float
    J0: float
    Jalpha: float
    Jbeta: float
    Jgamma: float
    tol: float

    def I(self) -> tuple[float, float, float, float]:
        return (self.I0, self.Ialpha, self.Ibeta, self.Igamma)

    def J(self) -> tuple[float, float, float, float]:
        return (self.J0, self.Jalpha, self.Jbeta, self.Jgamma)


@dataclass(frozen=True)
class HitDistribution:
    """Probabilities ``p[i-1]`` of hitting exactly ``i`` triangles, ``i = 1..6``.

    Values are stored as computed; :meth:`clamped` gives the presentation
    form with tiny negative round-off set to zero.
    """

    p: tuple[float, float, float, float, float, float]
    expectation: float
    method: Method
    condition_margin: float
    extrapolated: bool = False
    note: str = ""

    def __post_init__(self):
        if len(self.p) != 6:
            raise ValueError("need exactly six probabilities")

    def clamped(self) -> tuple[float, ...]:
        return tuple(min(1.0, max(0.0, v)) for v in self.p)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["p"] = list(self.p)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "HitDistribution":
        d = dict(d)
        d["p"] = tuple(float(v) for v in d["p"])
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


# ---------------------------------------------------------------------------
# fit condition


def _cstar_coefficients(lat: TriangleLattice) -> tuple[float, float, float]:
    sa, sb = math.sin(lat.alpha), math.sin(lat.beta)
    return 1.0 / sa, 1.0 / sb, math.cos(lat.alpha) / sa + math.cos(lat.beta) / sb


def c_star(body: ConvexBody, lat: TriangleLattice, phi):
    """Side ``c`` of the smallest triangle similar to the lattice cell around the body.

    ``phi`` is the direction of the outward normal of side ``b`` of the
    circumscribed triangle, measured in the body frame.  The normals of
    sides ``a`` and ``c`` then point along ``phi - alpha - beta`` and
    ``phi - alpha + pi``.
    """
    ka, kb, kc = _cstar_coefficients(lat)
    phi = np.asarray(phi, dtype=float)
    return (
        body.support(phi) * ka
        + body.support(phi - lat.alpha - lat.beta) * kb
        + body.support(phi - lat.alpha + math.pi) * kc
    )


@dataclass(frozen=True)
class FitCheck:
    margin: float          # c - max c*(phi), best estimate
    certified_margin: float    # certified lower bound on the margin
    fast_accept: bool


def fit_check(body: ConvexBody, lat: TriangleLattice, n_grid: int = N_FIT) -> FitCheck:
    """Evaluate the fit condition ``max c*(phi) <= c``.

    ``c*`` is sampled on ``n_grid`` angles; ``|s'| <= outer_radius`` bounds
    its Lipschitz constant, and cells whose bound can exceed the best value
    are refined with a bounded scalar search.

    Fast accept: a body inside a disc of radius ``r_c <= rho`` fits in the
    incircle.  ``r_c`` is ``outer_radius`` or the Jung bound
    ``diameter / sqrt 3``, whichever is smaller; for centrally symmetric
    bodies this is exactly ``max w <= 2 rho``.  When it applies the
    certified bound is at least ``c (1 - r_c / rho)``.
    """
    c = lat.c
    r_c = min(body.outer_radius, body.diameter / math.sqrt(3.0))
    fast = r_c <= lat.rho

    ka, kb, kc = _cstar_coefficients(lat)
    lip = body.outer_radius * (ka + kb + abs(kc))
    step = 2.0 * math.pi / n_grid
    grid = np.arange(n_grid + 1) * step
    vals = c_star(body, lat, grid)
    cell_hi = np.maximum(vals[:-1], vals[1:])
    bound = cell_hi + 0.5 * lip * step
    best = float(vals.max())

    order = np.argsort(-cell_hi)
    refined = np.zeros(n_grid, dtype=bool)
    for k in order[:16]:
        if bound[k] <= best:
            break
        res = minimize_scalar(
            lambda t: -float(c_star(body, lat, t)),
            bounds=(grid[k], grid[k + 1]),
            method="bounded",
            options={"xatol": 1e-13},
        )
        best = max(best, -float(res.fun))
        refined[k] = True
    open_bound = bound[~refined].max() if (~refined).any() else best
    certified = c - max(best, float(open_bound))
    if fast:
        certified = max(certified, c * (1.0 - r_c / lat.rho))
    certified = min(certified, c - best)
    return FitCheck(margin=c - best, certified_margin=certified, fast_accept=fast)


def check_fit(body: ConvexBody, lat: TriangleLattice) -> float:
    """``c - max c*(phi)``; non-negative when the body fits at every orientation."""
    return fit_check(body, lat).margin


def _fits(margin: float, lat: TriangleLattice) -> bool:
    return margin >= -FIT_RTOL * lat.c


# ---------------------------------------------------------------------------
# correlation integrals


def _w_kinks(body: ConvexBody) -> list[float]:
    return periodic_breakpoints(body.kink_angles, (0.0, math.pi), math.pi)


def I_integral(body: ConvexBody, x: float, abs_tol: float = DEFAULT_TOL, full_period: bool = False):
    """``int w(phi) w(phi + x)`` over ``[0, pi]`` (or ``[0, 2 pi]``); returns (value, err)."""
    period = 2.0 * math.pi if full_period else math.pi
    kinks = _w_kinks(body)
    points = periodic_breakpoints(kinks, (0.0, x), math.pi)
    if full_period:
        points = points + [p + math.pi for p in points] + [math.pi]
    return integrate(lambda t: body.width(t) * body.width(t + x), 0.0, period, points, abs_tol)


def J_integral(body: ConvexBody, x: float, abs_tol: float = DEFAULT_TOL):
    """``int_0^{2 pi} s(phi) s(phi + x)``; returns (value, err)."""
    points = periodic_breakpoints(body.kink_angles, (0.0, x), 2.0 * math.pi)
    return integrate(lambda t: body.support(t) * body.support(t + x), 0.0, 2.0 * math.pi, points, abs_tol)


def autocorrelation(body: ConvexBody, lat: TriangleLattice, abs_tol: float = DEFAULT_TOL,
                    need_J: bool = True) -> AutocorrelationIntegrals:
    shifts = (0.0, lat.alpha, lat.beta, lat.gamma)
    Is, errs = [], []
    for x in shifts:
        v, e = I_integral(body, x, abs_tol)
        Is.append(v)
        errs.append(e)
    if need_J:
        Js = []
        for x in shifts:
            v, e = J_integral(body, x, abs_tol)
            Js.append(v)
            errs.append(e)
    else:
        Js = [0.5 * v for v in Is]
    return AutocorrelationIntegrals(*Is, *Js, tol=max(errs))


# ---------------------------------------------------------------------------
# probabilities


def expectation(lat: TriangleLattice, perimeter: float, area: float) -> float:
    a, b, c = lat.sides
    return 1.0 + (a + b + c) * perimeter / (math.pi * lat.Q) + 2.0 * area / lat.Q


def probabilities_from_integrals(
    lat: TriangleLattice,
    perimeter: float,
    area: float,
    I: tuple[float, float, float, float],
    J: tuple[float, float, float, float] | None,
) -> tuple[float, ...]:
    """Assemble ``p(1..6)``.  With ``J=None`` the ``w = 2s`` form (``J = I/2``) is used."""
    a, b, c = lat.sides
    Q = lat.Q
    pq2 = math.pi * Q * Q
    sum_sq = a * a + b * b + c * c
    line = (a + b + c) * perimeter / (math.pi * Q)
    _, Ia, Ib, Ig = I
    M = (b * c * Ia + c * a * Ib + a * b * Ig) / pq2
    if J is None:
        L = sum_sq * I[0] / (2.0 * pq2) / 2.0
        N = M / 2.0
    else:
        J0, Ja, Jb, Jg = J
        L = sum_sq * J0 / (2.0 * pq2)
        N = (b * c * Ja + c * a * Jb + a * b * Jg) / pq2
    p6 = area / Q
    return (
        1.0 - line + L + M - N,
        line - 3.0 * L - 2.0 * M + 3.0 * N,
        3.0 * L + M - 3.0 * N,
        N - L - p6,
        0.0,
        p6,
    )


def hit_probabilities(
    body: ConvexBody,
    lat: TriangleLattice,
    abs_tol: float = DEFAULT_TOL,
    force: bool = False,
    method: Literal["auto", "theorem1", "symmetric_fastpath"] = "auto",
) -> HitDistribution:
    """Hit-count distribution by numerical correlation integrals.

    ``method="auto"`` uses the ``w = 2s`` form for centrally symmetric bodies.
    Raises :class:`BodyTooLarge` when the fit condition fails, unless
    ``force`` is set; forced results are flagged ``extrapolated``.
    """
    margin = check_fit(body, lat)
    extrapolated = not _fits(margin, lat)
    if extrapolated and not force:
        raise BodyTooLarge(margin)
    if method == "auto":
        method = "symmetric_fastpath" if body.centrally_symmetric else "theorem1"
    if method == "symmetric_fastpath" and not body.centrally_symmetric:
        raise ValueError("symmetric fast path needs a centrally symmetric body")
    if method not in ("theorem1", "symmetric_fastpath"):
        raise ValueError(f"unknown method {method!r}")

    ints = autocorrelation(body, lat, abs_tol, need_J=(method == "theorem1"))
    p = probabilities_from_integrals(
        lat, body.perimeter, body.area, ints.I(),
        ints.J() if method == "theorem1" else None,
    )
    if extrapolated:
        warnings.warn(f"fit condition fails (margin {margin:.3g}); {EXTRAPOLATED}", stacklevel=2)
    return HitDistribution(
        p=p,
        expectation=expectation(lat, body.perimeter, body.area),
        method=method,
        condition_margin=margin,
        extrapolated=extrapolated,
        note=EXTRAPOLATED if extrapolated else "",
    )
