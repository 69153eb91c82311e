"""Coordinate models of the F_q-spaces the constructions live in.

U1Model : PG(7, q) with points P(a, b, c, d), a, d in F_q, b, c in F_{q^3}.
          Intrinsic coordinates (a | b:3 | c:3 | d); the ambient vector is
          (a, b^{q^2}, b^q, c, b, c^q, c^{q^2}, d), i.e. tensor-index order
          000, 001, ..., 111 of (x0, x1) (x) (y0, y1) (x) (z0, z1).
H2Model : PG(6, q) with points u(a, b), a in F_q, b in F_{q^6};
          coordinates (a | b:6).  The a = 0 hyperplane is Pi = PG(5, q) with
          coordinates (b:6).
U3Model : PG(13, q) with points v(a, b, c), a in F_{q^2}, b, c in F_{q^6};
          coordinates (a:2 | b:6 | c:6).
"""

from __future__ import annotations

from functools import cached_property, lru_cache

import numpy as np

from .frames import ambient_context, frame
from .linalg import gfq

J2 = np.array([[0, 1], [-1, 0]], dtype=np.int64)


class U1Model:
    dim = 7

    def __init__(self, q: int, modulus: tuple[int, ...] | None = None):
        self.q = q
        self.ctx = ambient_context(q, 3, modulus)
        self.f1 = frame(self.ctx, q, 1)
        self.f3 = frame(self.ctx, q, 3)
        self.F = gfq(q)

    def coords(self, a, b, c, d) -> np.ndarray:
        a, b, c, d = (np.asarray(x, dtype=np.int64) for x in (a, b, c, d))
        return np.concatenate([self.f1.expand(a), self.f3.expand(b),
                               self.f3.expand(c), self.f1.expand(d)], axis=-1)

    def params(self, coords) -> tuple[np.ndarray, ...]:
        coords = np.asarray(coords, dtype=np.int64)
        return (self.f1.combine(coords[..., 0:1]), self.f3.combine(coords[..., 1:4]),
                self.f3.combine(coords[..., 4:7]), self.f1.combine(coords[..., 7:8]))

    def vector(self, a: int, b: int, c: int, d: int) -> list[int]:
        ctx, q = self.ctx, self.q
        return [a, ctx.pow(b, q * q), ctx.pow(b, q), c, b, ctx.pow(c, q), ctx.pow(c, q * q), d]

    def from_vector(self, v) -> tuple[int, int, int, int]:
        return int(v[0]), int(v[4]), int(v[3]), int(v[7])

    def ovoid_params(self, t: int | None) -> tuple[int, int, int, int]:
        """(a, b, c, d) of the ovoid point with parameter t (None = infinity)."""
        if t is None:
            return 0, 0, 0, 1
        ctx, q = self.ctx, self.q
        return 1, t, ctx.pow(t, q * q + q), ctx.pow(t, q * q + q + 1)

    def ovoid_point(self, t: int | None) -> np.ndarray:
        return self.coords(*self.ovoid_params(t))

    @cached_property
    def tensor_form(self) -> np.ndarray:
        """The 8x8 integer matrix J (x) J (x) J."""
        return np.kron(J2, np.kron(J2, J2))

    def form_on_vectors(self, x, y) -> int:
        """Evaluate the tensor form on two ambient U1 vectors."""
        ctx, K = self.ctx, self.tensor_form
        acc = 0
        for i in range(8):
            for j in range(8):
                if K[i, j] == 0:
                    continue
                term = ctx.mul(x[i], y[j])
                acc = ctx.add(acc, term) if K[i, j] > 0 else ctx.sub(acc, term)
        return acc

    @cached_property
    def gram(self) -> np.ndarray:
        """Gram matrix of the tensor form in intrinsic coordinates."""
        eye = np.eye(8, dtype=np.int64)
        vecs = [self.vector(*(int(x) for x in self.params(e))) for e in eye]
        kappa = {int(v): s for s, v in enumerate(self.f1.iota)}
        G = np.zeros((8, 8), dtype=np.int64)
        for i in range(8):
            for j in range(8):
                G[i, j] = kappa[self.form_on_vectors(vecs[i], vecs[j])]
        return G

    def gl2_matrix(self, A) -> np.ndarray:
        """Intrinsic 8x8 matrix of the collineation induced by A (x) A^q (x) A^{q^2},
        acting on row vectors; returned in column convention (new = M @ old)."""
        ctx, q = self.ctx, self.q
        A = [[int(x) for x in row] for row in A]

        def frob(M, k):
            return [[ctx.pow(x, q ** k) for x in row] for row in M]

        def kron(X, Y):
            n, m = len(X), len(Y)
            return [[ctx.mul(X[i // m][j // m], Y[i % m][j % m]) for j in range(n * m)]
                    for i in range(n * m)]

        T = kron(A, kron(frob(A, 1), frob(A, 2)))
        cols = []
        for e in np.eye(8, dtype=np.int64):
            x = self.vector(*(int(v) for v in self.params(e)))
            y = [0] * 8
            for j in range(8):
                for i in range(8):
                    y[j] = ctx.add(y[j], ctx.mul(x[i], T[i][j]))
            cols.append(self.coords(*self.from_vector(y)))
        return np.array(cols, dtype=np.int64).T.copy()


class H2Model:
    dim = 6

    def __init__(self, q: int, modulus: tuple[int, ...] | None = None):
        self.q = q
        self.ctx = ambient_context(q, 6, modulus)
        self.f1 = frame(self.ctx, q, 1)
        self.f6 = frame(self.ctx, q, 6)
        self.F = gfq(q)

    def coords(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        return np.concatenate([self.f1.expand(a), self.f6.expand(b)], axis=-1)

    def pi_coords(self, b) -> np.ndarray:
        return self.f6.expand(np.asarray(b, dtype=np.int64))

    def pi_element(self, coords) -> np.ndarray:
        return self.f6.combine(coords)

    def vector(self, a: int, b: int) -> list[int]:
        ctx, q = self.ctx, self.q
        bq = [ctx.pow(b, q ** k) for k in range(6)]
        return [bq[0], bq[5], a, bq[4], bq[1], ctx.pow(a, q), bq[2], bq[3]]


class U3Model:
    dim = 13

    def __init__(self, q: int, modulus: tuple[int, ...] | None = None):
        self.q = q
        self.ctx = ambient_context(q, 6, modulus)
        self.f2 = frame(self.ctx, q, 2)
        self.f6 = frame(self.ctx, q, 6)
        self.F = gfq(q)

    def coords(self, a, b, c) -> np.ndarray:
        a, b, c = (np.asarray(x, dtype=np.int64) for x in (a, b, c))
        return np.concatenate([self.f2.expand(a), self.f6.expand(b), self.f6.expand(c)], axis=-1)

    def params(self, coords) -> tuple[np.ndarray, ...]:
        coords = np.asarray(coords, dtype=np.int64)
        return (self.f2.combine(coords[..., 0:2]), self.f6.combine(coords[..., 2:8]),
                self.f6.combine(coords[..., 8:14]))


@lru_cache(maxsize=None)
def u1_model(q: int, modulus: tuple[int, ...] | None = None) -> U1Model:
    return U1Model(q, modulus)


@lru_cache(maxsize=None)
def h2_model(q: int, modulus: tuple[int, ...] | None = None) -> H2Model:
    return H2Model(q, modulus)


@lru_cache(maxsize=None)
def u3_model(q: int, modulus: tuple[int, ...] | None = None) -> U3Model:
    return U3Model(q, modulus)
