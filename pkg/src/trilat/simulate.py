"""Monte Carlo throws of a convex body onto the triangle lattice.

A throw places the reference point ``O`` uniformly in the fundamental
parallelogram,

    y ~ U[0, h_c],   x ~ U[y cot(alpha), c + y cot(alpha)],   phi ~ U[0, 2 pi),

all independent, and counts every closed triangle the rotated body meets.

Random numbers come from the counter-based Philox generator.  Throw ``k``
lives in block ``k // BLOCK`` whose stream is keyed by the seed with the
block number in the counter, so results do not depend on how blocks are
spread over workers.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .body import ConvexBody, rotate_translate
from .engine import HitDistribution, check_fit
from .errors import NonConvergence, SimulationError
from .gjk import intersects, placed_support, polygon_support
from .lattice import TriangleLattice, cell_vertices, cells_near

BLOCK = 1 << 16
EPS_REL = 1e-12


@dataclass(frozen=True)
class ThrowSample:
    x: float
    y: float
    phi: float
    hits: int | None = None


@dataclass
class SimReport:
    n: int
    seed: int
    counts: list[int]          # counts[i - 1] = throws that hit exactly i triangles
    elapsed: float = 0.0

    @property
    def p_hat(self) -> list[float]:
        return [k / self.n for k in self.counts]

    @property
    def stderr(self) -> list[float]:
        return [math.sqrt(p * (1.0 - p) / self.n) for p in self.p_hat]

    @property
    def max_hits(self) -> int:
        return len(self.counts)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "seed": self.seed,
            "counts": list(self.counts),
            "p_hat": self.p_hat,
            "stderr": self.stderr,
            "elapsed_seconds": self.elapsed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "SimReport":
        return cls(n=int(d["n"]), seed=int(d["seed"]), counts=[int(k) for k in d["counts"]],
                   elapsed=float(d.get("elapsed_seconds", 0.0)))

    def as_distribution(self, margin: float = math.nan) -> HitDistribution:
        p = (self.p_hat + [0.0] * 6)[:6]
        mean = sum(i * c for i, c in enumerate(self.counts, 1)) / self.n
        return HitDistribution(p=tuple(p), expectation=mean, method="simulation", condition_margin=margin)


def _block_uniforms(seed: int, block: int, size: int) -> np.ndarray:
    bitgen = np.random.Philox(key=seed & ((1 << 64) - 1), counter=[0, 0, block, 0])
    return np.random.Generator(bitgen).random((size, 3))


def draw_throws(lat: TriangleLattice, n: int, seed: int, start: int = 0):
    """Arrays ``(x, y, phi)`` for throws ``start .. start + n - 1``."""
    if n < 0 or start < 0:
        raise ValueError("n and start must be non-negative")
    cot_a = math.cos(lat.alpha) / math.sin(lat.alpha)
    out = np.empty((n, 3))
    k = start
    filled = 0
    while filled < n:
        block, offset = divmod(k, BLOCK)
        take = min(BLOCK - offset, n - filled)
        uni = _block_uniforms(seed, block, offset + take)[offset:]
        out[filled:filled + take] = uni
        filled += take
        k += take
    y = out[:, 0] * lat.h_c
    x = y * cot_a + out[:, 1] * lat.c
    phi = out[:, 2] * (2.0 * math.pi)
    return x, y, phi


def _eps(body: ConvexBody, lat: TriangleLattice) -> float:
    return EPS_REL * max(body.outer_radius, max(lat.sides))


def count_hits(body: ConvexBody, lat: TriangleLattice, sample: ThrowSample) -> int:
    """Exact hit count for one throw using the pure-Python intersection test."""
    placed = rotate_translate(body, sample.phi, (sample.x, sample.y))
    radius = body.outer_radius + max(lat.sides)
    eps = _eps(body, lat)
    sup = placed_support(placed)
    hits = 0
    for idx in cells_near(lat, (sample.x, sample.y), radius):
        if intersects(sup, polygon_support(cell_vertices(lat, idx)), eps):
            hits += 1
    return hits


def count_hits_array(body: ConvexBody, lat: TriangleLattice, x, y, phi) -> np.ndarray:
    """Vectorised hit counts through the compiled kernel."""
    kind, verts, params = body._kernel_spec()
    xs = np.ascontiguousarray(x, dtype=float)
    ys = np.ascontiguousarray(y, dtype=float)
    ps = np.ascontiguousarray(phi, dtype=float)
    out = np.zeros(xs.shape[0], dtype=np.int64)
    bad = _kernels.count_hits_batch(
        kind, verts, params, float(body.outer_radius),
        np.ascontiguousarray(lat.e1), np.ascontiguousarray(lat.e2),
        np.ascontiguousarray(lat._inverse), xs, ys, ps, _eps(body, lat), out,
    )
    if bad >= 0:
        raise NonConvergence(f"intersection search failed at throw ({xs[bad]}, {ys[bad]}, {ps[bad]})")
    return out


def _run_block(body, lat, seed, block, n):
    start = block * BLOCK
    size = min(BLOCK, n - start)
    x, y, phi = draw_throws(lat, size, seed, start)
    hits = count_hits_array(body, lat, x, y, phi)
    return block, hits


def run_simulation(
    body: ConvexBody,
    lat: TriangleLattice,
    n: int,
    seed: int,
    workers: int = 1,
) -> SimReport:
    """Throw the body ``n`` times and tabulate the hit counts."""
    if n < 1:
        raise ValueError("n must be at least 1")
    t0 = time.perf_counter()
    fits = check_fit(body, lat) > 0
    n_blocks = -(-n // BLOCK)
    counts = np.zeros(1, dtype=np.int64)

    def absorb(block, hits):
        nonlocal counts
        if hits.size and hits.min() < 1:
            k = int(np.argmin(hits))
            raise SimulationError(f"throw {block * BLOCK + k} hit no triangle")
        if fits and hits.size and hits.max() > 6:
            k = int(np.argmax(hits))
            x, y, phi = draw_throws(lat, 1, seed, block * BLOCK + k)
            raise SimulationError(
                f"throw {block * BLOCK + k} at x={x[0]!r}, y={y[0]!r}, phi={phi[0]!r} "
                f"hit {int(hits[k])} triangles although the body fits"
            )
        binned = np.bincount(hits)
        if binned.size > counts.size:
            counts = np.concatenate([counts, np.zeros(binned.size - counts.size, dtype=np.int64)])
        counts[: binned.size] += binned

    if workers <= 1:
        for b in range(n_blocks):
            absorb(*_run_block(body, lat, seed, b, n))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for b, hits in pool.map(lambda b: _run_block(body, lat, seed, b, n), range(n_blocks)):
                absorb(b, hits)

    return SimReport(n=n, seed=seed, counts=[int(v) for v in counts[1:]], elapsed=time.perf_counter() - t0)
