"""Buffon-style needle on the unit equilateral lattice.

Three independent routes to the same six numbers: the classical
polynomial formulas, the general integral engine, and brute-force
throwing.
"""

import math

from trilat import hit_probabilities, lattice_from_sides, make_needle, run_simulation, santalo_equilateral

lat = lattice_from_sides(1, 1, 1)
needle = make_needle(0.5)

closed = santalo_equilateral(0.5, 1.0)
engine = hit_probabilities(needle, lat, method="theorem1")
sim = run_simulation(needle, lat, n=500_000, seed=42)

print(f"{'k':>2} {'closed form':>12} {'engine':>12} {'simulated':>12} {'z':>6}")
for k in range(6):
    p = closed.p[k]
    ph = sim.p_hat[k] if k < len(sim.p_hat) else 0.0
    z = (ph - p) / math.sqrt(p * (1 - p) / sim.n) if p > 0 else 0.0
    print(f"{k + 1:>2} {p:12.7f} {engine.p[k]:12.7f} {ph:12.7f} {z:6.2f}")

print(f"\nE[Z] = {closed.expectation:.7f}, simulated mean {sum((i + 1) * c for i, c in enumerate(sim.counts)) / sim.n:.7f}")
print(f"{sim.n} throws in {sim.elapsed:.2f} s")

# a needle never meets five triangles, and a segment has no area so p(6) is zero too
assert closed.p[4] == closed.p[5] == 0.0
