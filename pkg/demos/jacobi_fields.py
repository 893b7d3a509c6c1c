"""Jacobi fields along the cone ray for a stable and an unstable triple.

For Type II the field vanishing at the segment's end has infinitely many
zeros accumulating at the vertex, spaced geometrically.
"""
import numpy as np

from lomse import LomseTriple, derive_params
from lomse.stability import (
    closed_form_jacobi,
    exponent_translation,
    jacobi_discrepancy,
    numeric_jacobi,
    stability_verdict,
)

for t in ((3, 2, 2), (5, 4, 6)):
    P = derive_params(LomseTriple(*t))
    rep = stability_verdict(P)
    sol = closed_form_jacobi(P)
    print(f"{P.triple}: a = {P.a_coeff}, exponents {[str(e) for e in sol.exponents]}, "
          f"{rep.verdict}")
    if rep.conjugate.zeros:
        z = np.array((rep.s_anchor,) + rep.conjugate.zeros)
        print(f"  conjugate points {np.array2string(z[1:], precision=6)}")
        print(f"  ratios {np.array2string(z[:-1] / z[1:], precision=10)}")
    nj = numeric_jacobi(P, (rep.s_anchor, 100 * rep.s_anchor), (0.0, 1.0))
    print(f"  numeric vs closed form on [s0, 100 s0]: {jacobi_discrepancy(P, nj):.2e}")

T = exponent_translation(derive_params(LomseTriple(5, 4, 6)))
print(f"\n(5,4,6) in the radius variable: {T.field_string()}, frequency {T.frequency:.15f}")
