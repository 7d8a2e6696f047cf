"""Closed forms for the standard shapes, and how they collapse onto each other.

A rectangle or ellipse with zero height is a needle; a half disc and a
disc share the same p(6) per unit area. The acute and obtuse lattices
use different rectangle formulas, which agree on right lattices.
"""

import math

import numpy as np

from trilat import (
    ellipse_distribution,
    half_disc_distribution,
    hit_probabilities,
    lattice_from_sides,
    make_half_disc,
    make_rectangle,
    needle_distribution,
    rectangle_distribution,
)
from trilat.closedform import obtuse_first, rectangle_acute, rectangle_obtuse

lattices = {
    "equilateral": lattice_from_sides(1, 1, 1),
    "(3,4,5)": lattice_from_sides(3, 4, 5),
    "obtuse 3(sqrt7,1,2)": lattice_from_sides(3 * math.sqrt(7), 3, 6),
}

np.set_printoptions(precision=6, suppress=True)
for name, lat in lattices.items():
    g = 0.8 * lat.rho
    print(f"\n{name}: rho = {lat.rho:.4f}, angles {np.degrees(lat.angles).round(1)}")
    print("  rectangle g x g/2", np.array(rectangle_distribution(g, g / 2, lat).p))
    print("  ellipse   g x g/2", np.array(ellipse_distribution(g, g / 2, lat).p))
    print("  rect h=0 - needle", np.array(rectangle_distribution(g, 0, lat).p) - needle_distribution(g, lat).p)
    print("  ellipse h=0 - needle", np.array(ellipse_distribution(g, 0, lat).p) - needle_distribution(g, lat).p)

# half disc: closed form on acute lattices, general engine everywhere
lat = lattices["(3,4,5)"]
hd = make_half_disc(0.25)
print("\nhalf disc r=0.25 on (3,4,5)")
print("  closed form", np.array(half_disc_distribution(0.25, lat).p))
print("  engine     ", np.array(hit_probabilities(hd, lat, method="theorem1").p))
print("  obtuse lattice, engine only:", np.array(hit_probabilities(hd, lattices["obtuse 3(sqrt7,1,2)"]).p))

right = obtuse_first(lattice_from_sides(5, 12, 13))
g, h = 0.4 * right.rho, 0.2 * right.rho
diff = np.array(rectangle_acute(g, h, right).p) - rectangle_obtuse(g, h, right).p
print(f"\n(5,12,13): acute and obtuse rectangle formulas differ by at most {np.abs(diff).max():.1e}")
