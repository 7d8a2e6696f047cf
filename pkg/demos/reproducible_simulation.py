"""Monte Carlo throws are reproducible from the seed alone.

Throws come from a counter-based generator in fixed blocks, so the
same seed gives the same counts regardless of how many worker
processes share the work.
"""

import math

from trilat import lattice_from_sides, make_ellipse, rectangle_distribution, make_rectangle, run_simulation, ellipse_distribution

lat = lattice_from_sides(2, 2, 2)
ellipse = make_ellipse(0.8, 0.4)

one = run_simulation(ellipse, lat, n=300_000, seed=7, workers=1)
four = run_simulation(ellipse, lat, n=300_000, seed=7, workers=4)
print("seed 7, 1 worker :", one.counts)
print("seed 7, 4 workers:", four.counts)
print("identical:", one.counts == four.counts)

exact = ellipse_distribution(0.8, 0.4, lat).p
print("\n k   exact      simulated  stderr     z")
for k, (p, ph, se) in enumerate(zip(exact, one.p_hat, one.stderr), 1):
    z = (ph - p) / math.sqrt(p * (1 - p) / one.n) if p > 0 else 0.0
    print(f"{k:2d}  {p:.6f}  {ph:.6f}  {se:.1e}  {z:+.2f}")

# with a few hundred thousand throws, 4 sigma is the pass line
lat345 = lattice_from_sides(3, 4, 5)
rep = run_simulation(make_rectangle(0.4, 0.2), lat345, n=300_000, seed=1)
worst = max(
    abs(ph - p) / math.sqrt(p * (1 - p) / rep.n)
    for p, ph in zip(rectangle_distribution(0.4, 0.2, lat345).p, rep.p_hat)
    if p >= 1e-4
)
print(f"\nrectangle 0.4 x 0.2 on (3,4,5): worst |z| = {worst:.2f}")
