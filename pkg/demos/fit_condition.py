"""When does a body fit inside one lattice triangle?

A body fits when, for every orientation, the smallest triangle similar to
the lattice cell that encloses it is no larger than the cell. fit_check
reports the worst-case slack along with a cheap sufficient test.
"""

import math

import numpy as np

from trilat import BodyTooLarge, fit_check, hit_probabilities, lattice_from_sides, make_disc, make_needle, make_polygon

lat = lattice_from_sides(3, 4, 5)
print(f"(3,4,5) lattice: inradius {lat.rho:.4f}, shortest altitude {min(lat.h_a, lat.h_b, lat.h_c):.4f}")

# a disc of the inradius is the tightest disc that fits
for r in (0.9, 1.0, 1.01):
    fc = fit_check(make_disc(r * lat.rho), lat)
    print(f"disc {r:.2f} rho: margin {fc.margin:+.3e}")

# a needle has to fit at every angle, so the shortest altitude (12/5 here) is its limit
for ell in (2.3, 2.4, 2.5):
    print(f"needle {ell}: margin {fit_check(make_needle(ell), lat).margin:+.4f}")

# a thin triangle has small width in every direction yet does not fit a triangle of the same width
eq = lattice_from_sides(1, 1, 1)
side = 2 * eq.rho
tri = make_polygon([(0, 0), (side, 0), (side / 2, side * math.sqrt(3) / 2)])
theta = np.linspace(0, math.pi, 2001)
fc = fit_check(tri, eq)
print(f"\ntriangle of side 2 rho: max width {tri.width(theta).max():.4f} <= 2 rho = {side:.4f}, "
      f"margin {fc.margin:+.4f}, fast accept {fc.fast_accept}")

try:
    hit_probabilities(make_needle(3.0), lat)
except BodyTooLarge as exc:
    print(f"\nrefused: {exc}")
d = hit_probabilities(make_needle(3.0), lat, force=True)
print(f"forced anyway, extrapolated={d.extrapolated}, p = {np.round(d.p, 4)}")
