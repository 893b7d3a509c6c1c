"""Oscillating solutions for (3,2,4) and how their lengths approach the cone.

Each crossing of phi = tan(theta) by the orbit leaving the origin gives one
solution with the cone's boundary data.  The deficits L_LOC - L_m shrink by
roughly exp(-(n+1) dt) per crossing, dt being the crossing spacing.
"""
import math

import numpy as np

from lomse import LomseTriple, derive_params
from lomse.dynamics import solution_family
from lomse.quotient_geometry import QuotientMetric

P = derive_params(LomseTriple(3, 2, 4))
L_loc = QuotientMetric(P).loc_arclength(1.0)
family = solution_family(P, 6)

print(f"L_LOC = {L_loc:.15f}")
print(f"{'m':>2} {'t_m':>10} {'L_m':>20} {'L_LOC - L_m':>12} {'quadrature':>20}")
for s in family:
    print(f"{s.crossing_index:>2} {s.crossing_t:10.5f} {s.length:20.15f} {s.deficit:12.3e} "
          f"{s.quadrature_length:20.15f}")

d = np.array([s.deficit for s in family])
dt = 2 * math.pi / math.sqrt(-float(P.dyn_disc))
print(f"\nobserved deficit ratios: {np.round(d[1:] / d[:-1], 9)}")
print(f"predicted exp(-(n+1) dt): {math.exp(-(P.n + 1) * dt):.9f}")
