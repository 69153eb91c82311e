"""Intrinsic GF(q)-coordinates for elements of subfields of an ambient field.

A subfield GF(q^k) of the ambient GF(q^K) gets the ordered F_q-basis
gamma^0, ..., gamma^(k-1), gamma = omega^((q^K - 1)/(q^k - 1)) being the
primitive element of GF(q^k) induced by the ambient generator omega.  GF(q)
itself is identified with the standalone coordinate field ``gfq(q)`` through
a root of that field's modulus, so coordinates from different ambients are
directly comparable.
"""

from __future__ import annotations

from functools import cached_property, lru_cache

import numpy as np

from .field import FieldContext, make_context, prime_power
from .linalg import gfp_left_inverse, gfq


def ambient_context(q: int, degree: int, modulus: tuple[int, ...] | None = None) -> FieldContext:
    """GF(q^degree) as a context over the prime field."""
    p, e = prime_power(q)
    return make_context(p, e * degree, modulus)


class SubfieldFrame:
    def __init__(self, ctx: FieldContext, q: int, k: int):
        e = ctx.subfield_exponent(q)
        if ctx.m % (e * k):
            raise ValueError(f"GF({q}^{k}) is not a subfield of GF({ctx.p}^{ctx.m})")
        self.ctx, self.q, self.k = ctx, q, k
        self.F = gfq(q)
        n = ctx.order - 1
        self.gamma = ctx.gen_pow(n // (q ** k - 1))
        self.basis = [ctx.pow(self.gamma, i) for i in range(k)]

    @cached_property
    def iota(self) -> np.ndarray:
        """Ambient image of each coordinate-field element."""
        ctx, small = self.ctx, self.F.ctx
        zeta = ctx.gen_pow((ctx.order - 1) // (self.q - 1))
        sub = [0] + [ctx.pow(zeta, j) for j in range(self.q - 1)]

        def ev(poly, x):
            acc = 0
            for c in reversed(poly):
                acc = ctx.add(ctx.mul(acc, x), ctx.from_coeffs([c]))
            return acc

        rho = next(x for x in sub if ev(small.modulus, x) == 0)
        powers = [ctx.pow(rho, j) for j in range(small.m)]
        out = np.zeros(self.q, dtype=np.int64)
        for s in range(self.q):
            acc = 0
            for d, rp in zip(small.coeffs(s), powers):
                acc = ctx.add(acc, ctx.mul(ctx.from_coeffs([d]), rp))
            out[s] = acc
        return out

    @cached_property
    def _forward(self) -> np.ndarray:
        """GF(p)-matrix taking coordinate digits to ambient digits."""
        ctx, e = self.ctx, self.F.e
        small_basis = [int(self.iota[self.F.ctx.from_coeffs([0] * j + [1])]) for j in range(e)]
        cols = [ctx.coeffs(ctx.mul(r, g)) for g in self.basis for r in small_basis]
        return np.array(cols, dtype=np.int64).T

    @cached_property
    def _left_inverse(self) -> np.ndarray:
        return gfp_left_inverse(self._forward, self.ctx.p)

    def expand(self, xs) -> np.ndarray:
        """Coordinates (shape (..., k)) of ambient elements lying in GF(q^k)."""
        xs = np.asarray(xs, dtype=np.int64)
        ctx, p, e = self.ctx, self.ctx.p, self.F.e
        digits = (xs[..., None] // p ** np.arange(ctx.m, dtype=np.int64)) % p
        flat = digits.reshape(-1, ctx.m)
        sol = (flat @ self._left_inverse.T) % p
        if not np.array_equal((sol @ self._forward.T) % p, flat):
            raise ValueError(f"element outside GF({self.q}^{self.k})")
        coords = sol.reshape(-1, self.k, e) @ (p ** np.arange(e, dtype=np.int64))
        return coords.reshape(xs.shape + (self.k,))

    def combine(self, coords) -> np.ndarray:
        """Inverse of ``expand``: ambient element with the given coordinates."""
        coords = np.asarray(coords, dtype=np.int64)
        ctx = self.ctx
        acc = np.zeros(coords.shape[:-1], dtype=np.int64)
        for i, g in enumerate(self.basis):
            acc = ctx.add_arr(acc, ctx.mul_arr(self.iota[coords[..., i]], g))
        return acc

    def multiplication_matrix(self, x: int) -> np.ndarray:
        """k-by-k matrix M over GF(q) with expand(x*y) = M @ expand(y)."""
        cols = self.expand(np.array([self.ctx.mul(x, g) for g in self.basis]))
        return cols.T.copy()

    def linear_map_matrix(self, fn) -> np.ndarray:
        """Matrix of an F_q-linear map GF(q^k) -> GF(q^k) given on ambient ints."""
        cols = self.expand(np.array([fn(g) for g in self.basis]))
        return cols.T.copy()


@lru_cache(maxsize=None)
def frame(ctx: FieldContext, q: int, k: int) -> SubfieldFrame:
    return SubfieldFrame(ctx, q, k)
