"""Point sets as check matrices: k-general columns give distance k+1."""

from evgeom.codes import export_check_matrix, min_distance, ternary_golay_check_matrix
from evgeom.constructions import hyperplane_section, projective_frame
from evgeom.verify import is_k_general

frame = projective_frame(4, 2)
print(f"frame of PG(4,2): d = {min_distance(export_check_matrix(frame))}")

G = ternary_golay_check_matrix()
print(f"ternary Golay [12,{G.dimension}]: 5-general columns "
      f"{is_k_general(G.columns_as_pointset(), 5).passed}, d = {min_distance(G)}")

for q in (4, 5):
    X = hyperplane_section(q)
    H = export_check_matrix(X)
    print(f"hyperplane section q={q}: [{H.cols},{H.dimension}]_{q} code, d = {min_distance(H)}")
