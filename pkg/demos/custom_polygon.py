"""Any convex polygon, through the general engine.

There is no closed form for an arbitrary shape, so the distribution
comes from the autocorrelation integrals. Two identities hold for every
body and make a quick sanity check: p(6) is the body's area over the
cell area, and the mean number of cells hit depends only on perimeter
and area.
"""

import math

import numpy as np

from trilat import autocorrelation, hit_probabilities, lattice_from_sides, make_polygon, run_simulation

lat = lattice_from_sides(3, 4, 5)
kite = make_polygon([(0, 0), (0.5, 0.1), (0.6, 0.35), (0.1, 0.3)])
print(f"kite: area {kite.F:.4f}, perimeter {kite.u:.4f}, centrally symmetric {kite.centrally_symmetric}")

ints = autocorrelation(kite, lat)
print("I at 0, alpha, beta, gamma:", np.round(ints.I(), 6))
print("J at 0, alpha, beta, gamma:", np.round(ints.J(), 6))

d = hit_probabilities(kite, lat)
print(f"\nmethod {d.method}, fit margin {d.condition_margin:.4f}")
print("p =", np.round(d.p, 6))
print(f"p(6) = {d.p[5]:.10f}, F/Q = {kite.F / lat.Q:.10f}")
mean = 1 + sum(lat.sides) * kite.u / (math.pi * lat.Q) + 2 * kite.F / lat.Q
print(f"E[Z] = {d.expectation:.10f}, from perimeter and area {mean:.10f}")

sim = run_simulation(kite, lat, n=400_000, seed=3)
print("simulated p =", np.round(sim.p_hat, 6))
