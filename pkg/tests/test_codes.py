import itertools

import numpy as np
import pytest

from evgeom.codes import (CheckMatrix, CodeError, dependent_columns, dumps_matrix,
                          export_check_matrix, loads_matrix, min_distance,
                          ternary_golay_check_matrix)
from evgeom.constructions import (desarguesian_ovoid, extended_projected_set, hyperplane_section,
                                  projected_set, projective_frame)
from evgeom.geometry import PointSet
from evgeom.linalg import gfq
from evgeom.verify import is_k_general


def min_weight_by_enumeration(H):
    """Oracle: smallest weight of a nonzero codeword in the null space of H."""
    F = gfq(H.q)
    N = F.nullspace(H.matrix)
    best = None
    for coeffs in itertools.product(range(H.q), repeat=len(N)):
        if not any(coeffs):
            continue
        w = F.matmul(np.array([coeffs]), N)[0]
        wt = int((w != 0).sum())
        best = wt if best is None else min(best, wt)
    return best


def test_frames():
    H = export_check_matrix(projective_frame(4, 2))
    assert H.matrix.shape == (5, 6) and min_distance(H) == 6 == min_weight_by_enumeration(H)
    H1 = export_check_matrix(projective_frame(1, 2))
    assert H1.matrix.shape == (2, 3) and min_distance(H1) == 3


def test_golay():
    G = ternary_golay_check_matrix()
    M = G.matrix
    assert not ((M @ M.T) % 3).any()                  # self-dual
    assert min_weight_by_enumeration(G) == 6
    assert min_distance(G) == 6 and G.dimension == 6
    assert is_k_general(G.columns_as_pointset(), 5).passed


def test_hyperplane_section_export():
    H = export_check_matrix(hyperplane_section(4))
    assert H.matrix.shape == (7, 13) and H.q == 4


def test_guards():
    with pytest.raises(CodeError):
        CheckMatrix(3, np.array([[1, 2, 0], [0, 0, 1]]))     # columns 1 and 2 proportional
    with pytest.raises(CodeError):
        CheckMatrix(3, np.array([[1, 0], [0, 0]]))
    with pytest.raises(CodeError):
        export_check_matrix(PointSet(np.eye(3, dtype=np.int64)[:2], 2, "line", ambient_dim=2))
    with pytest.raises(CodeError):
        min_distance(CheckMatrix(2, np.eye(3, dtype=np.int64)))


@pytest.mark.parametrize("maker", [lambda: hyperplane_section(4), lambda: projected_set(5),
                                   lambda: extended_projected_set(4),
                                   lambda: desarguesian_ovoid(3)])
def test_duality_with_k_general(maker):
    X = maker()
    H = export_check_matrix(X)
    d = min_distance(H)
    for k in range(2, X.ambient_dim + 2):
        assert is_k_general(X, k, reduction="none").passed == (d >= k + 1)
    cols = dependent_columns(H, d)
    assert gfq(X.q).rank(X.array[list(cols)]) == d - 1


def test_permutation_and_scaling_invariance():
    H = export_check_matrix(projected_set(4))
    rng = np.random.default_rng(0)
    perm = rng.permutation(H.cols)
    scale = rng.integers(1, 4, H.cols)
    F = gfq(4)
    M = F.mul[scale[None, :], H.matrix[:, perm]]
    assert min_distance(CheckMatrix(4, M)) == min_distance(H)


def test_matrix_file_round_trip():
    G = export_check_matrix(hyperplane_section(4))
    assert loads_matrix(dumps_matrix(G)) == G
    for bad in ["", "4,2\n", "4,2,2\n1;0\n", "4,1,2\n1;0;1\n", "4,1,2\n1;9\n"]:
        with pytest.raises(CodeError):
            loads_matrix(bad)
