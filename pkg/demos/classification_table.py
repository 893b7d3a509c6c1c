"""Print the Type I / Type II table for small triples.

The type is decided twice in exact arithmetic (the eqnk polynomial and the
sign of 1 - 4a); the linearization at the cone point tells the same story
through its eigenvalues.
"""
from lomse import enumerate_admissible, derive_params
from lomse.params import fixed_point_eigenvalues

print(f"{'triple':>12} {'a':>10} {'1-4a':>10} {'type':>5}  eigenvalues at the cone point")
for triple, ctype in enumerate_admissible(9, 10):
    P = derive_params(triple)
    l1, l2 = fixed_point_eigenvalues(P)
    print(f"{str(triple):>12} {str(P.a_coeff):>10} {str(P.jacobi_disc):>10} {str(ctype):>5}  "
          f"{l1:.4f}, {l2:.4f}")
