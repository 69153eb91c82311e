"""Dense linear algebra over a small coordinate field GF(q).

GF(q) elements are the integers ``0..q-1`` of ``make_context(p, e)``; all
operations go through q-by-q lookup tables so vectors can live in plain
``int64`` numpy arrays.
"""

from __future__ import annotations

from functools import cached_property, lru_cache
from typing import Iterator

import numpy as np

from .field import FieldContext, make_context, prime_power


class GFq:
    def __init__(self, q: int):
        p, e = prime_power(q)
        self.q, self.p, self.e = q, p, e
        self.ctx: FieldContext = make_context(p, e)
        els = np.arange(q, dtype=np.int64)
        self.add = self.ctx.add_arr(els[:, None], els[None, :])
        self.mul = self.ctx.mul_arr(els[:, None], els[None, :])
        self.neg = self.ctx.neg_arr(els)
        self.sub = self.add[:, self.neg]
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = [self.ctx.inv(int(x)) for x in els[1:]]
        self.inv = inv
        self.one = 1

    def __repr__(self) -> str:
        return f"GFq({self.q})"

    @cached_property
    def tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(add, mul, neg, inv) as contiguous int64 arrays for compiled kernels."""
        return tuple(np.ascontiguousarray(t, dtype=np.int64)
                     for t in (self.add, self.mul, self.neg, self.inv))

    # elementwise helpers
    def scale(self, c: int, v: np.ndarray) -> np.ndarray:
        return self.mul[c, np.asarray(v, dtype=np.int64)]

    def axpy(self, a: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """y + a*x"""
        return self.add[y, self.mul[a, x]]

    def dot(self, u: np.ndarray, v: np.ndarray) -> int:
        acc = 0
        for t in self.mul[np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64)]:
            acc = self.add[acc, t]
        return int(acc)

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.ndim == 1:
            return self.matmul(A[None, :], B)[0]
        if B.ndim == 1:
            return self.matmul(A, B[:, None])[:, 0]
        if self.e == 1:
            return (A @ B) % self.q
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for k in range(A.shape[1]):
            out = self.add[out, self.mul[A[:, k, None], B[None, k, :]]]
        return out

    # elimination
    def rref(self, M: np.ndarray) -> tuple[np.ndarray, list[int]]:
        R = np.array(M, dtype=np.int64, copy=True)
        if R.ndim != 2:
            raise ValueError("rref expects a matrix")
        nrows, ncols = R.shape
        pivots: list[int] = []
        row = 0
        for col in range(ncols):
            if row == nrows:
                break
            nz = np.flatnonzero(R[row:, col])
            if nz.size == 0:
                continue
            piv = row + int(nz[0])
            if piv != row:
                R[[row, piv]] = R[[piv, row]]
            R[row] = self.mul[self.inv[R[row, col]], R[row]]
            f = R[:, col].copy()
            f[row] = 0
            R = self.add[R, self.neg[self.mul[f[:, None], R[row][None, :]]]]
            pivots.append(col)
            row += 1
        return R, pivots

    def rank(self, M: np.ndarray) -> int:
        M = np.asarray(M, dtype=np.int64)
        if M.size == 0:
            return 0
        return len(self.rref(M)[1])

    def row_basis(self, M: np.ndarray) -> np.ndarray:
        R, piv = self.rref(M)
        return R[: len(piv)]

    def nullspace(self, M: np.ndarray) -> np.ndarray:
        """Rows spanning {x : M x = 0}, in reduced echelon form."""
        M = np.asarray(M, dtype=np.int64)
        n = M.shape[1]
        R, piv = self.rref(M)
        free = [c for c in range(n) if c not in piv]
        basis = np.zeros((len(free), n), dtype=np.int64)
        for i, fc in enumerate(free):
            basis[i, fc] = 1
            for r, pc in enumerate(piv):
                basis[i, pc] = self.neg[R[r, fc]]
        if len(basis):
            basis = self.rref(basis)[0]
        return basis

    def express(self, B: np.ndarray, v: np.ndarray) -> np.ndarray | None:
        """Coefficients c with c @ B = v, or None when v is outside the row space."""
        B = np.asarray(B, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        k = B.shape[0]
        aug = np.hstack([B.T, v[:, None]])
        R, piv = self.rref(aug)
        if k in piv:
            return None
        c = np.zeros(k, dtype=np.int64)
        for r, pc in enumerate(piv):
            c[pc] = R[r, k]
        return c

    def normalize(self, M: np.ndarray) -> np.ndarray:
        """Scale every nonzero row so its first nonzero entry is 1."""
        M = np.asarray(M, dtype=np.int64)
        single = M.ndim == 1
        M2 = np.atleast_2d(M)
        nz = M2 != 0
        lead_pos = np.argmax(nz, axis=1)
        lead = M2[np.arange(len(M2)), lead_pos]
        out = self.mul[self.inv[lead][:, None], M2]
        return out[0] if single else out

    def codes(self, M: np.ndarray) -> np.ndarray:
        """Integer code of each row (base-q digits, first coordinate most significant)."""
        M = np.atleast_2d(np.asarray(M, dtype=np.int64))
        out = np.zeros(len(M), dtype=np.int64)
        for j in range(M.shape[1]):
            out = out * self.q + M[:, j]
        return out

    # projective space enumeration
    def num_points(self, n: int) -> int:
        return (self.q ** (n + 1) - 1) // (self.q - 1)

    def iter_points(self, n: int, chunk: int = 1 << 16) -> Iterator[np.ndarray]:
        """Normalised representatives of PG(n, q), ordered by position of the
        leading 1 and then lexicographically in the trailing coordinates."""
        q, dim = self.q, n + 1
        for lead in range(dim):
            tail = dim - lead - 1
            total = q ** tail
            for start in range(0, total, chunk):
                idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
                block = np.zeros((len(idx), dim), dtype=np.int64)
                block[:, lead] = 1
                for j in range(tail):
                    block[:, dim - 1 - j] = (idx // q ** j) % q
                yield block

    def all_points(self, n: int) -> np.ndarray:
        return np.vstack(list(self.iter_points(n)))


@lru_cache(maxsize=None)
def gfq(q: int) -> GFq:
    return GFq(q)


def gfp_left_inverse(A: np.ndarray, p: int) -> np.ndarray:
    """L with L @ A = I over GF(p), for A of full column rank."""
    A = np.asarray(A, dtype=np.int64) % p
    rows, cols = A.shape
    F = gfq(p)
    R, piv = F.rref(np.hstack([A, np.eye(rows, dtype=np.int64)]))
    if piv[:cols] != list(range(cols)):
        raise ValueError("matrix does not have full column rank")
    return R[:cols, cols:]
