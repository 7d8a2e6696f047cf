"""Command line interface: ``trilat compute | compare | sweep``.

Exit codes: 0 success, 1 comparison failed, 2 fit condition violated,
3 numerical failure, 4 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import closedform, engine
from .body import (
    ConvexBody,
    make_disc,
    make_ellipse,
    make_half_disc,
    make_needle,
    make_polygon,
    make_rectangle,
    read_polygon_file,
)
from .engine import HitDistribution
from .errors import BodyTooLarge, NonConvergence, QuadratureFailure, SimulationError, TrilatError
from .lattice import TriangleLattice, lattice_from_sides
from .simulate import SimReport, run_simulation

EXIT_OK, EXIT_COMPARE, EXIT_FIT, EXIT_NUMERIC, EXIT_INPUT = 0, 1, 2, 3, 4
Z_LIMIT = 4.0
P_FLOOR = 1e-4

SHAPE_PARAMS = {
    "needle": ("ell",),
    "rect": ("g", "h"),
    "ellipse": ("g", "h"),
    "halfdisc": ("r",),
    "disc": ("r",),
    "polygon": (),
}


class InputError(TrilatError, ValueError):
    pass


@dataclass
class RunConfig:
    lattice: tuple[float, float, float]
    shape: str
    params: tuple[float, ...] = ()
    polygon_file: str | None = None
    method: str = "auto"
    n: int = 2_000_000
    seed: int = 0
    tol: float = engine.DEFAULT_TOL
    force: bool = False
    output: str | None = None
    fmt: str | None = None
    workers: int = 1

    def __post_init__(self):
        if any(p < 0 or not math.isfinite(p) for p in self.params):
            raise InputError("shape parameters must be non-negative")
        if self.tol <= 0:
            raise InputError("--tol must be positive")
        if self.n < 1:
            raise InputError("--n must be at least 1")

    def body(self) -> ConvexBody:
        p = self.params
        if self.shape == "needle":
            return make_needle(*p)
        if self.shape == "rect":
            return make_rectangle(*p)
        if self.shape == "ellipse":
            return make_ellipse(*p)
        if self.shape == "halfdisc":
            return make_half_disc(*p)
        if self.shape == "disc":
            return make_disc(*p)
        if self.shape == "polygon":
            return make_polygon(read_polygon_file(self.polygon_file))
        raise InputError(f"unknown shape {self.shape!r}")

    def lat(self) -> TriangleLattice:
        return lattice_from_sides(*self.lattice)

    def describe(self) -> dict:
        d = {"lattice": list(self.lattice), "shape": self.shape, "params": list(self.params)}
        if self.polygon_file:
            d["polygon_file"] = self.polygon_file
        return d


def closed_form(cfg: RunConfig, lat: TriangleLattice) -> HitDistribution | None:
    """Closed-form distribution for the configured shape, or ``None``."""
    p = cfg.params
    if cfg.shape == "needle":
        return closedform.needle_distribution(p[0], lat)
    if cfg.shape == "rect":
        return closedform.rectangle_distribution(p[0], p[1], lat)
    if cfg.shape == "ellipse":
        return closedform.ellipse_distribution(p[0], p[1], lat, cfg.tol)
    if cfg.shape == "disc":
        return closedform.ellipse_distribution(2 * p[0], 2 * p[0], lat, cfg.tol)
    if cfg.shape == "halfdisc" and lat.is_acute_or_right:
        return closedform.half_disc_distribution(p[0], lat)
    return None


def analytic(cfg: RunConfig) -> HitDistribution:
    lat = cfg.lat()
    body = cfg.body()
    method = cfg.method if cfg.method in ("theorem1", "closed") else "auto"
    if method == "theorem1":
        return engine.hit_probabilities(body, lat, cfg.tol, cfg.force, method="theorem1")
    try:
        dist = closed_form(cfg, lat)
    except BodyTooLarge:
        if not cfg.force:
            raise
        dist = None
    if dist is not None:
        return dist
    if method == "closed":
        if not cfg.force:
            raise InputError(f"no closed form for {cfg.shape} on this lattice")
    return engine.hit_probabilities(body, lat, cfg.tol, cfg.force)


# ---------------------------------------------------------------------------
# output


def _g17(x) -> str:
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return ""
    return format(float(x), ".17g")


def render_distribution(dist: HitDistribution) -> str:
    lines = [f"method: {dist.method}", f"condition margin: {dist.condition_margin:.10g}"]
    if dist.extrapolated:
        lines.append(f"WARNING: {dist.note}")
    for i, v in enumerate(dist.clamped(), 1):
        lines.append(f"p({i}) = {v:.9f}")
    lines.append(f"E[Z] = {dist.expectation:.9f}")
    return "\n".join(lines)


def _output_format(cfg: RunConfig) -> str:
    if cfg.fmt:
        return cfg.fmt
    if cfg.output and cfg.output.lower().endswith(".csv"):
        return "csv"
    return "json"


def _write(cfg: RunConfig, payload: dict, rows: list[dict], header: list[str]) -> None:
    if not cfg.output:
        return
    if _output_format(cfg) == "json":
        Path(cfg.output).write_text(json.dumps(payload, indent=2) + "\n")
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_g17(row[h]) if isinstance(row[h], float) else row[h] for h in header])
    Path(cfg.output).write_text(buf.getvalue())


def _dist_row(dist: HitDistribution) -> dict:
    row = {f"p{i}": float(v) for i, v in enumerate(dist.p, 1)}
    row.update(expectation=float(dist.expectation), margin=float(dist.condition_margin), method=dist.method)
    return row


# ---------------------------------------------------------------------------
# commands


def cmd_compute(cfg: RunConfig, out=None) -> HitDistribution:
    out = out or sys.stdout
    if cfg.method == "simulate":
        report = run_simulation(cfg.body(), cfg.lat(), cfg.n, cfg.seed, cfg.workers)
        dist = report.as_distribution(engine.check_fit(cfg.body(), cfg.lat()))
        print(render_distribution(dist), file=out)
        print(f"n = {report.n}, seed = {report.seed}, elapsed = {report.elapsed:.2f} s", file=out)
        payload = {"config": cfg.describe(), "distribution": dist.to_dict(), "simulation": report.to_dict()}
        _write(cfg, payload, [_dist_row(dist)], [f"p{i}" for i in range(1, 7)] + ["expectation", "margin", "method"])
        return dist
    dist = analytic(cfg)
    print(render_distribution(dist), file=out)
    payload = {"config": cfg.describe(), "distribution": dist.to_dict()}
    _write(cfg, payload, [_dist_row(dist)], [f"p{i}" for i in range(1, 7)] + ["expectation", "margin", "method"])
    return dist


@dataclass
class Comparison:
    analytic: HitDistribution
    simulation: SimReport
    rows: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(abs(r["z"]) <= Z_LIMIT for r in self.rows if r["p"] >= P_FLOOR)


def compare(cfg: RunConfig, perturb: dict[int, float] | None = None) -> Comparison:
    """Analytic distribution against a simulation; ``perturb`` shifts analytic p(i) (harness self-test)."""
    dist = analytic(cfg)
    if perturb:
        p = list(dist.p)
        for i, delta in perturb.items():
            p[i - 1] += delta
        dist = replace(dist, p=tuple(p))
    report = run_simulation(cfg.body(), cfg.lat(), cfg.n, cfg.seed, cfg.workers)
    p_hat = report.p_hat + [0.0] * max(0, 6 - report.max_hits)
    err = report.stderr + [0.0] * max(0, 6 - report.max_hits)
    rows = []
    for i in range(1, max(6, report.max_hits) + 1):
        p = dist.p[i - 1] if i <= 6 else 0.0
        ph, se = p_hat[i - 1], err[i - 1]
        if se > 0:
            z = (ph - p) / se
        else:
            z = 0.0 if ph == p else math.copysign(math.inf, ph - p)
        rows.append({"i": i, "p": float(p), "p_hat": float(ph), "stderr": float(se), "z": float(z)})
    return Comparison(dist, report, rows)


def cmd_compare(cfg: RunConfig, out=None, perturb: dict[int, float] | None = None) -> int:
    out = out or sys.stdout
    if cfg.n < 10_000:
        raise InputError("compare needs --n >= 10000")
    cmp = compare(cfg, perturb)
    print(f"analytic method: {cmp.analytic.method}; n = {cfg.n}; seed = {cfg.seed}", file=out)
    print(f"{'i':>2} {'p':>12} {'p_hat':>12} {'stderr':>10} {'z':>8}", file=out)
    for r in cmp.rows:
        flag = "" if r["p"] < P_FLOOR or abs(r["z"]) <= Z_LIMIT else "  <-- outside 4 sigma"
        print(f"{r['i']:>2} {r['p']:12.8f} {r['p_hat']:12.8f} {r['stderr']:10.3g} {r['z']:8.3f}{flag}", file=out)
    print("PASS" if cmp.passed else "FAIL", file=out)
    payload = {
        "config": cfg.describe(),
        "seed": cfg.seed,
        "analytic": cmp.analytic.to_dict(),
        "simulation": cmp.simulation.to_dict(),
        "rows": cmp.rows,
        "passed": cmp.passed,
    }
    _write(cfg, payload, cmp.rows, ["i", "p", "p_hat", "stderr", "z"])
    return EXIT_OK if cmp.passed else EXIT_COMPARE


SWEEP_HEADER = ["param", "p1", "p2", "p3", "p4", "p5", "p6", "expectation", "margin"]


def sweep_rows(cfg: RunConfig, param: str, lo: float, hi: float, steps: int) -> list[dict]:
    if steps < 2:
        raise InputError("--steps must be at least 2")
    names = SHAPE_PARAMS[cfg.shape]
    rows = []
    for value in np.linspace(lo, hi, steps):
        value = float(value)
        if param in ("a", "b", "c"):
            sides = list(cfg.lattice)
            sides["abc".index(param)] = value
            point = replace(cfg, lattice=tuple(sides))
        elif param in names:
            params = list(cfg.params)
            params[names.index(param)] = value
            point = replace(cfg, params=tuple(params))
        else:
            raise InputError(f"cannot sweep {param!r} for shape {cfg.shape}; choose from {names + ('a', 'b', 'c')}")
        margin = engine.check_fit(point.body(), point.lat())
        row = {"param": value, "margin": margin}
        if engine._fits(margin, point.lat()) or cfg.force:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                dist = analytic(replace(point, force=True))
            row.update({f"p{i}": float(v) for i, v in enumerate(dist.p, 1)})
            row["expectation"] = float(dist.expectation)
        else:
            row.update({h: None for h in SWEEP_HEADER[1:-1]})
        rows.append(row)
    return rows


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow([_g17(row[h]) for h in SWEEP_HEADER])
    return buf.getvalue()


def cmd_sweep(cfg: RunConfig, param: str, lo: float, hi: float, steps: int, out=None) -> list[dict]:
    out = out or sys.stdout
    rows = sweep_rows(cfg, param, lo, hi, steps)
    text = sweep_csv(rows)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        out.write(text)
    return rows


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _floats(n: int):
    def parse(text: str) -> tuple[float, ...]:
        try:
            vals = tuple(float(v) for v in text.split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {text!r}")
        if len(vals) != n:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {text!r}")
        return vals

    return parse


def _range(text: str) -> tuple[float, float]:
    for sep in (":", ".."):
        if sep in text:
            lo, hi = text.split(sep, 1)
            return float(lo), float(hi)
    raise argparse.ArgumentTypeError(f"range must look like lo:hi, got {text!r}")


def _perturb(text: str) -> tuple[int, float]:
    i, delta = text.split(":")
    return int(i), float(delta)


def _default_seed() -> int:
    env = os.environ.get("TRILAT_SEED")
    return int(env) if env else 0


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--lattice", type=_floats(3), required=True, metavar="A,B,C",
                        help="side lengths of the lattice triangle")
    shape = common.add_mutually_exclusive_group(required=True)
    shape.add_argument("--needle", type=_floats(1), metavar="L")
    shape.add_argument("--rect", type=_floats(2), metavar="G,H")
    shape.add_argument("--ellipse", type=_floats(2), metavar="G,H", help="full major and minor axes")
    shape.add_argument("--halfdisc", type=_floats(1), metavar="R")
    shape.add_argument("--disc", type=_floats(1), metavar="R")
    shape.add_argument("--polygon", metavar="FILE", help="text file with one 'x y' vertex per line")
    common.add_argument("--n", type=int, default=2_000_000, help="number of throws")
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: $TRILAT_SEED or 0)")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--tol", type=float, default=engine.DEFAULT_TOL, help="quadrature tolerance")
    common.add_argument("--force", action="store_true", help="evaluate even if the body does not fit")
    common.add_argument("--output", "-o", metavar="PATH")
    common.add_argument("--format", choices=("json", "csv"), dest="fmt")

    parser = _Parser(prog="trilat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("compute", parents=[common], help="hit probabilities")
    p.add_argument("--method", choices=("auto", "theorem1", "closed", "simulate", "compare"), default="auto")
    p = sub.add_parser("compare", parents=[common], help="analytic values against simulation")
    p.add_argument("--perturb", type=_perturb, action="append", default=[], help=argparse.SUPPRESS)
    p = sub.add_parser("sweep", parents=[common], help="CSV table over a parameter range")
    p.add_argument("--param", required=True)
    p.add_argument("--range", type=_range, required=True, dest="span", metavar="LO:HI")
    p.add_argument("--steps", type=int, default=20)
    return parser


def config_from_args(args) -> RunConfig:
    for name in SHAPE_PARAMS:
        value = getattr(args, name)
        if value is not None:
            shape = name
            break
    params = () if shape == "polygon" else getattr(args, shape)
    return RunConfig(
        lattice=args.lattice,
        shape=shape,
        params=params,
        polygon_file=args.polygon,
        method=getattr(args, "method", "auto"),
        n=args.n,
        seed=args.seed if args.seed is not None else _default_seed(),
        tol=args.tol,
        force=args.force,
        output=args.output,
        fmt=args.fmt,
        workers=args.workers,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        if args.command == "compute":
            if cfg.method == "compare":
                return cmd_compare(cfg)
            cmd_compute(cfg)
            return EXIT_OK
        if args.command == "compare":
            return cmd_compare(cfg, perturb=dict(args.perturb))
        lo, hi = args.span
        cmd_sweep(cfg, args.param, lo, hi, args.steps)
        return EXIT_OK
    except BodyTooLarge as exc:
        print(f"error: {exc}; use --force to extrapolate", file=sys.stderr)
        return EXIT_FIT
    except (QuadratureFailure, NonConvergence, SimulationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (TrilatError, ValueError, OSError) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
