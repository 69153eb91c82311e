import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from evgeom.constructions import (desarguesian_ovoid, extended_projected_set, hyperplane_section,
                                  pg13_set, projected_set, projective_frame)
from evgeom.geometry import BudgetExceeded, Flat, GeometryError, PointSet, project_from, rank
from evgeom.linalg import gfq
from evgeom.verify import (affine_check, completeness_check, find_disjoint_hyperplane,
                           hyperplane_spectrum, is_k_general, is_rs_set, is_semiregular,
                           is_transitive, low_rank_search, seven_point_lemma, solid_cubic_lemma)


# -- kernel against brute force ---------------------------------------------------

@st.composite
def scan_cases(draw):
    q = draw(st.sampled_from([2, 3, 4, 5]))
    N = draw(st.integers(3, 9))
    L = draw(st.integers(2, 5))
    k = draw(st.integers(1, min(N, 6)))
    T = draw(st.integers(0, k - 1))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    fix = draw(st.booleans())
    V = np.random.default_rng(seed).integers(0, q, (N, L))
    return q, V, k, T, fix


@given(scan_cases())
def test_low_rank_search_matches_brute_force(case):
    q, V, k, T, fix = case
    F = gfq(q)
    subsets = [c for c in itertools.combinations(range(len(V)), k) if not fix or 0 in c]
    low = [c for c in subsets if F.rank(V[list(c)]) <= T]
    census = low_rank_search(V, k, T, q=q, fix_first=fix, census=True)
    first = low_rank_search(V, k, T, q=q, fix_first=fix)
    assert census.count == len(low)
    assert census.work == len(subsets)
    assert first.witness == (low[0] if low else None)


def test_chunked_scan_is_deterministic():
    X = desarguesian_ovoid(3, with_group=False)
    whole = low_rank_search(X, 6, 5, census=True)
    parts = low_rank_search(X, 6, 5, census=True, prepay=False, chunk=4)
    assert (whole.count, whole.work, whole.witness) == (parts.count, parts.work, parts.witness)


# -- k-general --------------------------------------------------------------------

def test_ovoid_is_4_general():
    assert is_k_general(desarguesian_ovoid(2), 4).passed


def test_frame_of_pg42_is_5_general():
    assert is_k_general(projective_frame(4, 2), 5).passed


def test_collinear_triple_is_the_witness():
    X = PointSet([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 1, 0, 0]], 3, "col")
    rep = is_k_general(X, 3)
    assert not rep.passed
    assert rep.witness == [[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0]]
    assert gfq(3).rank(np.array(rep.witness)) <= 2
    assert rep.work > 0


def test_k_range_is_checked():
    with pytest.raises(ValueError):
        is_k_general(projective_frame(2, 2), 4)


@pytest.mark.parametrize("maker,k", [(lambda: hyperplane_section(4), 5),
                                     (lambda: hyperplane_section(4), 6),
                                     (lambda: desarguesian_ovoid(3), 5),
                                     (lambda: pg13_set(2), 5)])
def test_reduction_soundness(maker, k):
    X = maker()
    red = is_k_general(X, k, census=True)
    full = is_k_general(X, k, census=True, reduction="none")
    assert red.reduction_used == "fix_one_point" and full.reduction_used == "none"
    assert red.passed == full.passed
    # every orbit point lies in the same number of low-rank subsets
    if not red.passed:
        assert full.counts["violations"] * k == red.counts["violations"] * len(X)


def test_forced_reduction_needs_a_transitive_group():
    with pytest.raises(GeometryError):
        is_k_general(projected_set(4), 4, reduction="fix_one_point")


def test_budget_guard(monkeypatch):
    X = projected_set(5)
    with pytest.raises(BudgetExceeded):
        is_k_general(X, 4, budget=100)
    with pytest.raises(BudgetExceeded):
        is_k_general(X, 4, budget=100, census=True)
    # an early witness is cheap even when the full scan is not
    big = pg13_set(2)
    rep = is_k_general(big, 14, budget=10 ** 6, reduction="none")
    assert not rep.passed and rep.work <= 10 ** 6
    monkeypatch.setenv("EVGEOM_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        is_k_general(X, 4)
    monkeypatch.setenv("EVGEOM_BUDGET", str(10 ** 6))
    assert is_k_general(X, 4).passed


# -- (r, s)-sets ------------------------------------------------------------------

@pytest.mark.parametrize("r,s", [(4, 3), (6, 4)])
def test_hyperplane_section_q4(r, s):
    rep = is_rs_set(hyperplane_section(4), r, s)
    assert rep.passed and rep.sub_verdicts == {"i": True, "ii": True, "iii": True}
    wit = np.array(rep.details["iii_witness"])
    assert len(wit) == r + 2 and gfq(4).rank(wit) <= s + 2


def test_pg13_q2_is_a_32_set():
    rep = is_rs_set(pg13_set(2), 3, 2)
    assert rep.passed


def test_rs_failure_reports_a_rechecked_witness():
    X = desarguesian_ovoid(4, with_group=False)
    rep = is_rs_set(X, 4, 3)                     # the ovoid has 5 points in a solid
    assert not rep.passed and not rep.sub_verdicts["i"]
    assert len(rep.witness) == 5 and rank(PointSet(rep.witness, 4)) <= 4


def test_condition_ii_needs_spanning():
    X = PointSet(np.eye(4, dtype=np.int64)[:3], 2, "sub", ambient_dim=3)
    assert is_rs_set(X, 2, 1).sub_verdicts["ii"] is False


@pytest.mark.parametrize("maker,r,s", [(lambda: hyperplane_section(5), 4, 3),
                                       (lambda: projected_set(5), 3, 2)])
def test_monotonicity_in_r(maker, r, s):
    X = maker()
    assert is_rs_set(X, r, s).sub_verdicts["i"]
    for r2 in range(r + 1, r + 3):
        assert is_rs_set(X, r2, s).sub_verdicts["i"]


@pytest.mark.parametrize("q", [4, 5])
def test_projection_law(q):
    X = hyperplane_section(q)
    for (r, s) in [(4, 3), (6, 4)]:
        assert is_rs_set(X, r, s).passed
        for c in (0, 3):
            Y = project_from(X, X[c])
            assert is_rs_set(Y, r - 1, s - 1).sub_verdicts["i"]


# -- spectra and affine sets -----------------------------------------------------

@pytest.mark.parametrize("q", [2, 3])
def test_ovoid_spectrum(q):
    O = desarguesian_ovoid(q)
    rep = hyperplane_spectrum(O, [1, q * q - q + 1, q * q + 1, q * q + q + 1])
    assert rep.passed
    hist = {int(k): v for k, v in rep.counts["histogram"].items()}
    n = 7
    assert sum(hist.values()) == (q ** (n + 1) - 1) // (q - 1)
    assert sum(k * v for k, v in hist.items()) == len(O) * (q ** n - 1) // (q - 1)


def test_single_point_spectrum():
    q, n = 3, 4
    X = PointSet([[0, 1, 0, 0, 0]], q)
    hist = {int(k): v for k, v in hyperplane_spectrum(X).counts["histogram"].items()}
    assert set(hist) <= {0, 1} and hist[1] == (q ** n - 1) // (q - 1)


def test_spectrum_witness_is_a_bad_hyperplane():
    X = desarguesian_ovoid(2)
    rep = hyperplane_spectrum(X, [1, 3, 5])
    assert not rep.passed
    H = Flat.from_covector(rep.witness[0], 2)
    assert int(H.contains(X).sum()) == 7


@pytest.mark.parametrize("q", [4, 5])
def test_disjoint_hyperplanes(q):
    H = find_disjoint_hyperplane(hyperplane_section(q))
    assert H is not None and H.dim == 5
    assert np.array_equal(gfq(q).normalize(H.annihilator), np.eye(7, dtype=np.int64)[:1])
    Y = projected_set(q)
    H2 = find_disjoint_hyperplane(Y)
    assert H2 is not None and not H2.contains(Y).any()
    assert affine_check(Y).passed


def test_full_space_meets_every_hyperplane():
    X = PointSet(gfq(2).all_points(2), 2, "PG(2,2)")
    assert find_disjoint_hyperplane(X) is None
    assert not affine_check(X).passed


# -- groups -------------------------------------------------------------------------

def test_transitivity():
    rep = is_transitive(hyperplane_section(4))
    assert rep.passed and rep.counts["orbit_size"] == 13
    rep = is_transitive(pg13_set(3))
    assert rep.passed and rep.counts["orbit_size"] == 364


def test_off_orbit_point_breaks_transitivity():
    X = hyperplane_section(4)
    fixed = np.zeros(7, dtype=np.int64)
    fixed[0] = 1                                      # u(1, 0) is fixed by sigma
    Y = PointSet(np.vstack([X.array, fixed]), 4, "plus", X.generators)
    rep = is_transitive(Y)
    assert not rep.passed and rep.witness == [list(fixed)]
    with pytest.raises(GeometryError):
        is_transitive(projected_set(4))


@pytest.mark.parametrize("q", [2, 3])
def test_semiregular(q):
    rep = is_semiregular(pg13_set(q))
    assert rep.passed and rep.counts["group_order"] == (q ** 6 - 1) // (q - 1)


# -- completeness ----------------------------------------------------------------

@pytest.mark.parametrize("q", [5, 7])
def test_conic_minus_a_point(q):
    F = gfq(q)
    conic = [[1, t, F.mul[t, t]] for t in range(q)] + [[0, 0, 1]]
    X = PointSet(conic[1:], q, "conic-1")
    rep = completeness_check(X, 2, 1)
    assert not rep.passed
    assert rep.details["extendable"] == [[1, 0, 0]]


def test_ovoid_q2_extensions_match_brute_force():
    # as a 4-general set the 9-point ovoid of PG(7,2) is far from complete
    O = desarguesian_ovoid(2)
    rep = completeness_check(O, 3, 2)
    F = gfq(2)
    want = []
    for P in F.all_points(7):
        if tuple(P) in O:
            continue
        A = np.vstack([O.array, P])
        if all(F.rank(A[list(c)]) == 4 for c in itertools.combinations(range(len(A)), 4)):
            want.append([int(x) for x in P])
    assert rep.details["extendable"] == want and len(want) == 126


def test_extended_projected_set_completeness_is_reported():
    rep = completeness_check(extended_projected_set(4), 3, 2)
    assert rep.counts["candidates"] == 1365 - 14
    assert rep.counts["extendable"] == len(rep.details["extendable"])


# -- lemmas ------------------------------------------------------------------------

@pytest.mark.parametrize("q", [4, 5])
def test_solid_cubic_lemma(q):
    rep = solid_cubic_lemma(q)
    assert rep.passed and rep.sub_verdicts["asserted"]
    assert rep.counts["reduced_cases"] == math.comb(q ** 3 - 2, 2)
    # reduced hypothesis cases: both free parameters in GF(q) minus {0, 1}
    assert rep.counts["hypothesis_cases"] == math.comb(q - 2, 2)


def test_solid_cubic_lemma_control_q2():
    rep = solid_cubic_lemma(2)
    assert rep.passed and rep.sub_verdicts["asserted"] is False
    assert rep.counts["reduced_cases"] == math.comb(6, 2)


def test_solid_cubic_lemma_unreduced_q4():
    rep = solid_cubic_lemma(4, reduction="none")
    assert rep.passed
    assert rep.counts["hypothesis_cases"] == 4368   # q^2 (q^4 + q^2 + 1) twisted cubics


@pytest.mark.parametrize("q", [3, 4])
def test_seven_point_lemma(q):
    rep = seven_point_lemma(q)
    assert rep.passed
    assert rep.counts["reduced_cases"] == math.comb(q ** 3 - 2, 4)
