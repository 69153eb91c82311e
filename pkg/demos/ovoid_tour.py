"""A walk around the q^3+1 point partial ovoid of PG(7, q).

Builds the set, checks that it is 4-general and pairwise non-perpendicular,
then prints how hyperplanes meet it.
"""

import sys

import numpy as np

from evgeom.constructions import desarguesian_ovoid
from evgeom.geometry import form_matrix
from evgeom.verify import hyperplane_spectrum, is_k_general

q = int(sys.argv[1]) if len(sys.argv) > 1 else 2

O = desarguesian_ovoid(q)
print(f"{len(O)} points in PG({O.ambient_dim},{q})")

rep = is_k_general(O, 4)
print(f"4-general: {rep.passed} ({rep.work} rank evaluations, reduction {rep.reduction_used})")
rep = is_k_general(O, 5)
print(f"5-general: {rep.passed}")
if rep.witness:
    # q+1 >= 5 points of a twisted cubic share a solid
    print("five points in a solid:")
    for row in rep.witness:
        print("   ", row)

B = form_matrix(O)
off = ~np.eye(len(O), dtype=bool)
print(f"distinct points never perpendicular: {bool((B[off] != 0).all())}")

spec = hyperplane_spectrum(O, [1, q * q - q + 1, q * q + 1, q * q + q + 1])
print(f"hyperplane intersection sizes over {spec.counts['hyperplanes']} hyperplanes:")
for size, count in spec.counts["histogram"].items():
    print(f"  {size:>4} points: {count} hyperplanes")
