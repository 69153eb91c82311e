import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from evgeom.frames import ambient_context, frame
from evgeom.linalg import gfq
from evgeom.models import u1_model


def span_size(F, M):
    """Brute-force size of the row space."""
    vecs = set()
    for coeffs in itertools.product(range(F.q), repeat=len(M)):
        v = np.zeros(M.shape[1], dtype=np.int64)
        for c, row in zip(coeffs, M):
            v = F.add[v, F.mul[c, row]]
        vecs.add(tuple(v))
    return len(vecs)


@st.composite
def small_matrices(draw):
    q = draw(st.sampled_from([2, 3, 4, 5]))
    r = draw(st.integers(1, 4))
    c = draw(st.integers(1, 5))
    M = np.array(draw(st.lists(st.lists(st.integers(0, q - 1), min_size=c, max_size=c),
                               min_size=r, max_size=r)), dtype=np.int64)
    return q, M


@given(small_matrices())
def test_rank_matches_span_count(data):
    q, M = data
    F = gfq(q)
    assert q ** F.rank(M) == span_size(F, M)


@given(small_matrices())
def test_nullspace_and_express(data):
    q, M = data
    F = gfq(q)
    N = F.nullspace(M)
    assert len(N) == M.shape[1] - F.rank(M)
    if len(N):
        assert not F.matmul(M, N.T).any()
    v = M[0]
    c = F.express(M, v)
    assert c is not None
    assert np.array_equal(F.matmul(c[None, :], M)[0], v)


@given(small_matrices(), st.integers(0, 2 ** 32 - 1))
def test_rank_invariant_under_invertible_maps(data, seed):
    q, M = data
    F = gfq(q)
    n = M.shape[1]
    rng = np.random.default_rng(seed)
    A = rng.integers(0, q, (n, n))
    while F.rank(A) < n:
        A = rng.integers(0, q, (n, n))
    assert F.rank(F.matmul(M, A)) == F.rank(M)
    assert F.rank(M[::-1]) == F.rank(M)


def test_normalize_and_points():
    F = gfq(4)
    v = np.array([0, 2, 3, 1])
    w = F.normalize(v)
    assert w[1] == 1 and np.array_equal(F.normalize(F.scale(3, v)), w)
    assert np.array_equal(F.normalize(w), w)
    pts = F.all_points(2)
    assert len(pts) == F.num_points(2) == 21
    assert len({tuple(p) for p in pts}) == 21
    assert tuple(pts[0]) == (1, 0, 0)


@pytest.mark.parametrize("q,deg,k", [(2, 3, 3), (4, 3, 3), (4, 6, 2), (3, 6, 6), (9, 3, 1), (8, 6, 6)])
def test_frame_round_trip(q, deg, k):
    ctx = ambient_context(q, deg)
    fr = frame(ctx, q, k)
    sub = [x for x in range(ctx.order) if ctx.pow(x, q ** k) == x]
    coords = fr.expand(np.array(sub))
    assert len({tuple(c) for c in coords}) == q ** k
    assert np.array_equal(fr.combine(coords), np.array(sub))


@pytest.mark.parametrize("q", [4, 8, 9])
def test_coordinate_field_embedding_is_a_homomorphism(q):
    ctx = ambient_context(q, 3)
    iota = frame(ctx, q, 1).iota
    F = gfq(q)
    for a in range(q):
        for b in range(q):
            assert iota[F.add[a, b]] == ctx.add(int(iota[a]), int(iota[b]))
            assert iota[F.mul[a, b]] == ctx.mul(int(iota[a]), int(iota[b]))


def test_expand_rejects_elements_outside_the_subfield():
    ctx = ambient_context(2, 6)
    with pytest.raises(ValueError):
        frame(ctx, 2, 3).expand(np.array([ctx.generator]))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_multiplication_matrix(q):
    ctx = ambient_context(q, 3)
    fr = frame(ctx, q, 3)
    x = ctx.gen_pow(5)
    M = fr.multiplication_matrix(x)
    F = gfq(q)
    for y in range(0, ctx.order, max(1, ctx.order // 20)):
        assert np.array_equal(F.matmul(M, fr.expand(y)), fr.expand(ctx.mul(x, y)))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_u1_gram_is_the_tensor_form(q):
    M = u1_model(q)
    G = M.gram
    F = gfq(q)
    assert np.array_equal(G, F.neg[G.T])          # alternating
    assert not np.diag(G).any()
    assert F.rank(G) == 8                          # non-degenerate
    # B = a d' - d a' - Tr(b c') + Tr(c b') on intrinsic coordinates
    rng = np.random.default_rng(q)
    for _ in range(20):
        a, d, a2, d2 = (int(rng.integers(q)) for _ in range(4))
        b, c, b2, c2 = (int(rng.integers(M.ctx.order)) for _ in range(4))
        a_, d_, a2_, d2_ = (int(M.f1.iota[x]) for x in (a, d, a2, d2))
        b, c, b2, c2 = (M.f3.combine(M.f3.expand(x)) for x in (b, c, b2, c2))
        ctx = M.ctx
        tr = lambda x: ctx.add(ctx.add(x, ctx.pow(x, q)), ctx.pow(x, q * q))
        want = ctx.sub(ctx.mul(a_, d2_), ctx.mul(d_, a2_))
        want = ctx.sub(want, tr(ctx.mul(int(b), int(c2))))
        want = ctx.add(want, tr(ctx.mul(int(c), int(b2))))
        u = M.coords(M.f1.combine([a]), b, c, M.f1.combine([d]))
        v = M.coords(M.f1.combine([a2]), b2, c2, M.f1.combine([d2]))
        got = F.dot(u, F.matmul(G, v))
        assert int(M.f1.iota[got]) == want
