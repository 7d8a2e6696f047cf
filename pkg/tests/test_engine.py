import json
import math
import warnings

import numpy as np
import pytest

from conftest import random_body, random_lattice
from trilat import (
    BodyTooLarge,
    HitDistribution,
    autocorrelation,
    c_star,
    check_fit,
    fit_check,
    hit_probabilities,
    lattice_from_sides,
    make_disc,
    make_ellipse,
    make_half_disc,
    make_needle,
    make_polygon,
    make_rectangle,
    santalo_equilateral,
)
from trilat.engine import I_integral, J_integral, probabilities_from_integrals

LATTICES = [(1, 1, 1), (3, 4, 5), (2, 3, 4), (3 * math.sqrt(7), 3, 6), (1.0, 0.7, 1.4)]
PHI = np.linspace(0, 2 * math.pi, 997)


def rect_I(g, h, x):
    """Width correlation of a g x h rectangle, hand-integrated piece by piece."""
    s2 = g * g + h * h
    if x <= math.pi / 2:
        return 0.5 * (((math.pi - 2 * x) * s2 + 4 * g * h) * math.cos(x) + 2 * (s2 + 2 * x * g * h) * math.sin(x))
    return 0.5 * (((math.pi - 2 * x) * s2 - 4 * g * h) * math.cos(x) + 2 * (s2 + 2 * (math.pi - x) * g * h) * math.sin(x))


def enclosing_side(body, lat, phi):
    """Side c of the circumscribed similar triangle, from its three support lines."""
    normals = {"b": phi, "a": phi - lat.alpha - lat.beta, "c": phi - lat.alpha + math.pi}
    lines = {k: (np.array([math.cos(t), math.sin(t)]), float(body.support(t))) for k, t in normals.items()}

    def meet(p, q):
        (n1, d1), (n2, d2) = lines[p], lines[q]
        return np.linalg.solve(np.array([n1, n2]), np.array([d1, d2]))

    return float(np.linalg.norm(meet("c", "a") - meet("c", "b")))


# ---------------------------------------------------------------------------
# c* and the fit condition


@pytest.mark.parametrize("sides", LATTICES)
def test_cstar_point_and_incircle(sides):
    lat = lattice_from_sides(*sides)
    assert np.all(c_star(make_needle(0.0), lat, PHI) == 0.0)
    np.testing.assert_allclose(c_star(make_disc(lat.rho), lat, PHI), lat.c, rtol=1e-14)


@pytest.mark.parametrize("seed", range(5))
def test_cstar_matches_line_intersection(seed):
    rng = np.random.default_rng(seed)
    lat = random_lattice(rng)
    body = random_body(rng, lat)
    for phi in rng.uniform(0, 2 * math.pi, size=25):
        assert float(c_star(body, lat, phi)) == pytest.approx(enclosing_side(body, lat, phi), rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("ell", [0.2, 0.5, 0.8])
def test_needle_fit_against_rotating_supports(ell, equilateral):
    # for an equilateral cell the circumscribed side is (2/sqrt3) * sum of the three supports
    theta = np.linspace(0, 2 * math.pi, 10_000, endpoint=False)
    needle = make_needle(ell)
    total = sum(needle.support(theta + k * 2 * math.pi / 3) for k in range(3))
    brute = (2 / math.sqrt(3)) * total.max()
    assert 1.0 - check_fit(needle, equilateral) == pytest.approx(brute, abs=1e-7)


def test_fit_examples(equilateral, lat345):
    for lat in (equilateral, lat345, lattice_from_sides(2, 3, 4)):
        assert check_fit(make_disc(0.9 * lat.rho), lat) > 0
        assert abs(check_fit(make_disc(lat.rho), lat)) <= 1e-10
        assert check_fit(make_disc(1.01 * lat.rho), lat) < 0
    assert check_fit(make_needle(2.0), equilateral) < 0


def test_needle_fit_boundary(equilateral):
    # the longest needle that fits an equilateral cell is its altitude
    alt = math.sqrt(3) / 2
    assert abs(check_fit(make_needle(alt), equilateral)) < 1e-10
    assert check_fit(make_needle(alt * 1.001), equilateral) < 0


def test_literal_width_rule_is_unsound(equilateral):
    side = 2 * equilateral.rho
    tri = make_polygon([(0, 0), (side, 0), (side / 2, side * math.sqrt(3) / 2)])
    theta = np.linspace(0, math.pi, 4001)
    assert tri.width(theta).max() <= 2 * equilateral.rho * (1 + 1e-12)
    fc = fit_check(tri, equilateral)
    assert not fc.fast_accept
    assert fc.margin < -0.1


@pytest.mark.parametrize("seed", range(40))
def test_fast_accept_is_sound(seed):
    rng = np.random.default_rng(100 + seed)
    lat = random_lattice(rng)
    body = random_body(rng, lat)
    fc = fit_check(body, lat)
    grid = np.linspace(0, 2 * math.pi, 20_000, endpoint=False)
    dense_max = float(c_star(body, lat, grid).max())
    # the refined maximum is at least the dense sample, the certified bound sits below it
    assert lat.c - fc.margin >= dense_max - 1e-12
    assert fc.certified_margin <= fc.margin + 1e-15
    if fc.fast_accept:
        assert dense_max <= lat.c * (1 + 1e-12)
        assert fc.certified_margin >= 0


# ---------------------------------------------------------------------------
# correlation integrals


def test_disc_integrals(lat345):
    r = 0.4
    ints = autocorrelation(make_disc(r), lat345)
    np.testing.assert_allclose(ints.I(), 4 * math.pi * r * r, rtol=1e-13)
    np.testing.assert_allclose(ints.J(), 2 * math.pi * r * r, rtol=1e-13)


@pytest.mark.parametrize("x", [0.0, 0.3, 1.0, math.pi / 2, 2.0, 2.8])
def test_rectangle_integrals(x):
    g, h = 0.7, 0.3
    val, err = I_integral(make_rectangle(g, h), x)
    assert val == pytest.approx(rect_I(g, h, x), abs=1e-10)
    assert err <= 1e-10


@pytest.mark.parametrize("x", [0.0, 0.4, 1.2, 2.1])
def test_needle_integral(x):
    ell = 0.9
    val, _ = I_integral(make_needle(ell), x)
    xr = min(x, math.pi - x)  # I(x) = I(pi - x) for the needle
    assert val == pytest.approx(ell * ell * (0.5 * (math.pi - 2 * xr) * math.cos(xr) + math.sin(xr)), abs=1e-10)


def test_half_disc_J0():
    r = 0.7
    val, _ = J_integral(make_half_disc(r), 0.0)
    assert val == pytest.approx(1.5 * math.pi * r * r, abs=1e-11)


@pytest.mark.parametrize("seed", range(6))
def test_I_half_of_full_period(seed):
    rng = np.random.default_rng(seed)
    lat = random_lattice(rng)
    body = random_body(rng, lat)
    for x in (0.0, *lat.angles):
        half, e1 = I_integral(body, x, 1e-11)
        full, e2 = I_integral(body, x, 1e-11, full_period=True)
        assert half == pytest.approx(full / 2, abs=2 * (e1 + e2) + 1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_integrals_nonnegative_and_symmetric(seed):
    rng = np.random.default_rng(50 + seed)
    lat = random_lattice(rng)
    body = random_body(rng, lat)
    ints = autocorrelation(body, lat)
    assert min(ints.I() + ints.J()) >= 0
    if body.centrally_symmetric:
        np.testing.assert_allclose(ints.I(), 2 * np.array(ints.J()), atol=10 * max(ints.tol, 1e-12))


def test_f_identities():
    # p(2) and p(3) written through f_1, f_2, f_3 agree with the L/M/N assembly
    lat = lattice_from_sides(2, 3, 4)
    body = make_half_disc(0.3)
    ints = autocorrelation(body, lat)
    a, b, c = lat.sides
    Q, u, F = lat.Q, body.u, body.F
    I0, Ia, Ib, Ig = ints.I()
    J0, Ja, Jb, Jg = ints.J()
    f1 = lambda i, j: i - j
    f2 = lambda i, j: 2 * i - 3 * j
    f3 = lambda i, j: i - 3 * j
    s2 = a * a + b * b + c * c
    p1 = 1 - (a + b + c) * u / (math.pi * Q) + s2 * J0 / (2 * math.pi * Q * Q) \
        + (b * c * f1(Ia, Ja) + c * a * f1(Ib, Jb) + a * b * f1(Ig, Jg)) / (math.pi * Q * Q)
    p2 = (a + b + c) * u / (math.pi * Q) - 3 * s2 * J0 / (2 * math.pi * Q * Q) \
        - (b * c * f2(Ia, Ja) + c * a * f2(Ib, Jb) + a * b * f2(Ig, Jg)) / (math.pi * Q * Q)
    p3 = 3 * s2 * J0 / (2 * math.pi * Q * Q) \
        + (b * c * f3(Ia, Ja) + c * a * f3(Ib, Jb) + a * b * f3(Ig, Jg)) / (math.pi * Q * Q)
    p = probabilities_from_integrals(lat, u, F, ints.I(), ints.J())
    assert p[0] == pytest.approx(p1, abs=1e-14)
    assert p[1] == pytest.approx(p2, abs=1e-14)
    assert p[2] == pytest.approx(p3, abs=1e-14)


# ---------------------------------------------------------------------------
# probabilities


def test_point_body():
    for sides in LATTICES:
        d = hit_probabilities(make_needle(0.0), lattice_from_sides(*sides))
        assert d.p == pytest.approx((1, 0, 0, 0, 0, 0), abs=1e-15)
        assert d.expectation == 1.0


def test_santalo_through_both_engine_paths(equilateral):
    ref = santalo_equilateral(0.5, 1.0)
    for method in ("theorem1", "symmetric_fastpath"):
        d = hit_probabilities(make_needle(0.5), equilateral, method=method)
        np.testing.assert_allclose(d.p, ref.p, atol=1e-10)
        assert d.method == method
    assert ref.p[2] == pytest.approx((4 / 3 - math.sqrt(3) / math.pi) / 4, rel=1e-15)


@pytest.mark.parametrize("seed", range(12))
def test_fastpath_matches_full(seed):
    rng = np.random.default_rng(200 + seed)
    lat = random_lattice(rng)
    body = random_body(rng, lat, kinds=("needle", "rectangle", "ellipse", "disc"))
    fast = hit_probabilities(body, lat, method="symmetric_fastpath")
    full = hit_probabilities(body, lat, method="theorem1")
    np.testing.assert_allclose(fast.p, full.p, atol=1e-9)


@pytest.mark.parametrize("seed", range(8))
def test_scale_covariance(seed):
    rng = np.random.default_rng(300 + seed)
    lat = random_lattice(rng)
    body = random_body(rng, lat, kinds=("rectangle", "half_disc", "ellipse"))
    k = rng.uniform(0.2, 5.0)
    scaled_lat = lattice_from_sides(*(k * s for s in lat.sides))
    if body.kind == "rectangle":
        v = body.vertices
        scaled = make_rectangle(k * np.ptp(v[:, 0]), k * np.ptp(v[:, 1]))
    elif body.kind == "half_disc":
        scaled = make_half_disc(k * body.radius)
    else:
        scaled = make_ellipse(2 * k * body.semi_x, 2 * k * body.semi_y)
    np.testing.assert_allclose(hit_probabilities(scaled, scaled_lat).p, hit_probabilities(body, lat).p, atol=1e-9)


@pytest.mark.parametrize("seed", range(8))
def test_side_relabel_symmetry(seed):
    rng = np.random.default_rng(400 + seed)
    lat = random_lattice(rng)
    body = random_body(rng, lat)
    base = hit_probabilities(body, lat).p
    for order in ((1, 2, 0), (2, 0, 1), (1, 0, 2)):
        other = lat.relabeled(order)
        if check_fit(body, other) <= 0:
            continue
        np.testing.assert_allclose(hit_probabilities(body, other).p, base, atol=1e-9)


def test_too_large_and_force(equilateral):
    big = make_disc(0.4)
    with pytest.raises(BodyTooLarge) as exc:
        hit_probabilities(big, equilateral)
    assert exc.value.margin < 0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        d = hit_probabilities(big, equilateral, force=True)
    assert d.extrapolated and "extrapolated" in d.note
    assert any("extrapolated" in str(w.message) for w in caught)
    assert d.condition_margin < 0


def test_method_errors(equilateral):
    with pytest.raises(ValueError):
        hit_probabilities(make_half_disc(0.1), equilateral, method="symmetric_fastpath")
    with pytest.raises(ValueError):
        hit_probabilities(make_disc(0.1), equilateral, method="nonsense")


def test_distribution_json_roundtrip(lat345):
    d = hit_probabilities(make_half_disc(0.25), lat345)
    back = HitDistribution.from_dict(json.loads(d.to_json()))
    assert back == d
    assert min(d.clamped()) >= 0.0
    with pytest.raises(ValueError):
        HitDistribution(p=(1.0,), expectation=1.0, method="theorem1", condition_margin=0.0)
