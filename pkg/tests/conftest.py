import math

import numpy as np
import pytest

from trilat import lattice_from_sides

# criterion number -> (passed, detail), filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def record():
    def _record(k: int, ok: bool, detail: str = ""):
        ACCEPTANCE[k] = (bool(ok), detail)
        return ok

    return _record


def random_lattice(rng: np.random.Generator, acute: bool | None = None, min_angle: float = 0.25):
    """Lattice with angles bounded away from 0, scaled so that c is in [0.5, 3]."""
    while True:
        al, be = rng.uniform(min_angle, math.pi - 2 * min_angle, size=2)
        ga = math.pi - al - be
        if ga < min_angle:
            continue
        biggest = max(al, be, ga)
        if acute is True and biggest > math.pi / 2:
            continue
        if acute is False and biggest <= math.pi / 2 + 0.05:
            continue
        scale = rng.uniform(0.5, 3.0) / math.sin(ga)
        return lattice_from_sides(scale * math.sin(al), scale * math.sin(be), scale * math.sin(ga))


@pytest.fixture
def equilateral():
    return lattice_from_sides(1.0, 1.0, 1.0)


@pytest.fixture
def lat345():
    return lattice_from_sides(3.0, 4.0, 5.0)


def random_body(rng: np.random.Generator, lat, kinds=None):
    """Random body that satisfies the fit condition on ``lat``."""
    from trilat import check_fit, make_disc, make_ellipse, make_half_disc, make_needle, make_polygon, make_rectangle

    kinds = kinds or ("needle", "rectangle", "ellipse", "disc", "half_disc", "polygon")
    while True:
        kind = kinds[rng.integers(len(kinds))]
        size = rng.uniform(0.05, 1.3) * lat.rho
        if kind == "needle":
            body = make_needle(2 * size)
        elif kind == "rectangle":
            t = rng.uniform(0, math.pi / 2)
            body = make_rectangle(2 * size * math.cos(t), 2 * size * math.sin(t))
        elif kind == "ellipse":
            body = make_ellipse(2 * size, 2 * size * rng.uniform(0, 1))
        elif kind == "disc":
            body = make_disc(size)
        elif kind == "half_disc":
            body = make_half_disc(size)
        else:
            k = rng.integers(3, 8)
            ang = np.sort(rng.uniform(0, 2 * math.pi, size=k))
            rad = size * rng.uniform(0.5, 1.0, size=k)
            body = make_polygon(np.column_stack([rad * np.cos(ang), rad * np.sin(ang)]))
        if check_fit(body, lat) > 0:
            return body
