"""Verify the (r,s)-set families for one q and print a summary table."""

import sys
import time

from evgeom.constructions import (extended_projected_set, hyperplane_section, pg13_set,
                                  projected_set)
from evgeom.verify import find_disjoint_hyperplane, is_rs_set, is_transitive

q = int(sys.argv[1]) if len(sys.argv) > 1 else 4

cases = [
    ("hyperplane section", hyperplane_section(q), [(4, 3), (6, 4)]),
    ("projected set", projected_set(q), [(3, 2), (5, 3)]),
    ("projected set + kernel line", extended_projected_set(q), [(3, 2)]),
]
if q <= 4:
    cases.append(("orbit in PG(13,q)", pg13_set(q), [(3, 2)]))

print(f"q = {q}")
for name, X, params in cases:
    for r, s in params:
        t0 = time.perf_counter()
        rep = is_rs_set(X, r, s)
        cond = " ".join(f"{k}:{'y' if v else 'n'}" for k, v in rep.sub_verdicts.items())
        print(f"  {name:<28} |X|={len(X):<5} PG({X.ambient_dim},{q}) ({r},{s}) "
              f"{'PASS' if rep.passed else 'FAIL'} [{cond}] {time.perf_counter() - t0:.2f}s")

X = hyperplane_section(q)
print(f"  hyperplane section transitive: {is_transitive(X).passed}")
H = find_disjoint_hyperplane(X)
print(f"  hyperplane missing it: covector {H.annihilator[0].tolist() if H else None}")
