"""Arithmetic in GF(p^m).

Elements are stored as non-negative integers whose base-``p`` digits are the
polynomial coefficients (ascending degree) modulo the context modulus.  Small
fields (up to ``TABLE_LIMIT`` elements) get exp/log tables; larger ones fall
back to schoolbook polynomial arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np
from sympy import factorint, isprime

TABLE_LIMIT = 1 << 22


class FieldError(ValueError):
    pass


# -- polynomials over GF(p), ascending coefficient lists -----------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_mod(out, f, p)


def _poly_mod(a: list[int], f: Sequence[int], p: int) -> list[int]:
    a = _trim(list(a))
    m = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(a) > m:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - m
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
        _trim(a)
    return a


def _poly_powmod(a: Sequence[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(list(a), f, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        e >>= 1
        if e:
            base = _poly_mulmod(base, base, f, p)
    return result


def _poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over GF(p)."""
    m = len(modulus) - 1
    if m < 1 or modulus[-1] != 1:
        return False
    if m == 1:
        return True
    x = [0, 1]

    def x_pow_p_pow(k: int) -> list[int]:
        r = x
        for _ in range(k):
            r = _poly_powmod(r, p, modulus, p)
        return r

    if _poly_sub(x_pow_p_pow(m), x, p):
        return False
    for ell in factorint(m):
        g = _poly_gcd(modulus, _poly_sub(x_pow_p_pow(m // ell), x, p), p)
        if len(g) > 1:
            return False
    return True


def irreducible_polys(p: int, m: int) -> Iterator[tuple[int, ...]]:
    """Monic irreducibles of degree m in search order.

    The lower coefficients (c_0, ..., c_{m-1}) run through the integers
    0, 1, 2, ... read as base-p digits with c_0 least significant.
    """
    for k in range(p ** m):
        low = [(k // p ** i) % p for i in range(m)]
        poly = tuple(low + [1])
        if is_irreducible(poly, p):
            yield poly


# -- contexts -------------------------------------------------------------------

class FieldContext:
    """GF(p^m) with a fixed modulus and a fixed primitive element."""

    def __init__(self, p: int, m: int, modulus: Sequence[int], generator: int | None = None):
        if not isprime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if m < 1:
            raise FieldError(f"extension degree must be positive, got {m}")
        if (p ** m - 1).bit_length() > 64:
            raise FieldError("field order exceeds the 64-bit budget")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is not a monic irreducible of degree {m}")
        self.p = p
        self.m = m
        self.modulus = modulus
        self.order = p ** m
        self._group_factors = sorted(factorint(self.order - 1)) if self.order > 2 else []
        if generator is None:
            generator = self._smallest_generator()
        elif not self._is_primitive(generator):
            raise FieldError(f"{generator} is not a primitive element")
        self.generator = generator

    def __repr__(self) -> str:
        return f"FieldContext(p={self.p}, m={self.m}, modulus={self.modulus})"

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, FieldContext) and self.p == other.p
                and self.m == other.m and self.modulus == other.modulus
                and self.generator == other.generator)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus, self.generator))

    # digit conversions
    def coeffs(self, x: int) -> list[int]:
        out = []
        for _ in range(self.m):
            x, d = divmod(x, self.p)
            out.append(d)
        return out

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.m:
            coeffs = _poly_mod(list(coeffs), self.modulus, self.p)
        x = 0
        for c in reversed(list(coeffs)):
            x = x * self.p + int(c) % self.p
        return x

    def element(self, x: int | Sequence[int]) -> "FieldElement":
        if not isinstance(x, (int, np.integer)):
            x = self.from_coeffs(x)
        return FieldElement(self, int(x))

    # primitive element search
    def _slow_pow(self, x: int, e: int) -> int:
        return self.from_coeffs(_poly_powmod(self.coeffs(x), e, self.modulus, self.p))

    def _is_primitive(self, g: int) -> bool:
        if g == 0 or g >= self.order:
            return False
        if self.order == 2:
            return g == 1
        n = self.order - 1
        return all(self._slow_pow(g, n // ell) != 1 for ell in self._group_factors)

    def _smallest_generator(self) -> int:
        for g in range(1, self.order):
            if self._is_primitive(g):
                return g
        raise FieldError("no primitive element found")  # unreachable for a field

    # tables
    @property
    def has_tables(self) -> bool:
        return self.order <= TABLE_LIMIT

    @cached_property
    def _exp(self) -> np.ndarray:
        n, p, m = self.order - 1, self.p, self.m
        weights = p ** np.arange(m, dtype=np.int64)

        def mult_matrix(h: int) -> np.ndarray:
            rows = [self.coeffs(self.from_coeffs(_poly_mulmod([0] * j + [1], self.coeffs(h),
                                                               self.modulus, p)))
                    for j in range(m)]
            return np.array(rows, dtype=np.int64)

        block = np.zeros((1, m), dtype=np.int64)
        block[0, 0] = 1
        while block.shape[0] < n:
            step = self._slow_pow(self.generator, block.shape[0])
            block = np.vstack([block, (block @ mult_matrix(step)) % p])
        return (block[:n] @ weights).astype(np.int64)

    @cached_property
    def _log(self) -> np.ndarray:
        log = np.full(self.order, -1, dtype=np.int64)
        log[self._exp] = np.arange(self.order - 1, dtype=np.int64)
        return log

    # scalar arithmetic
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p, out, w = self.p, 0, 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            out += ((da + db) % p) * w
            w *= p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        p, out, w = self.p, 0, 1
        while a:
            a, d = divmod(a, p)
            out += ((-d) % p) * w
            w *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.has_tables:
            log = self._log
            return int(self._exp[(log[a] + log[b]) % (self.order - 1)])
        return self.from_coeffs(_poly_mulmod(self.coeffs(a), self.coeffs(b), self.modulus, self.p))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero has no inverse")
            return 1 if e == 0 else 0
        n = self.order - 1
        if self.has_tables:
            return int(self._exp[(int(self._log[a]) * (e % n)) % n])
        return self._slow_pow(a, e % n)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.pow(a, -1)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def gen_pow(self, e: int) -> int:
        """omega^e for the context generator omega."""
        return self.pow(self.generator, e)

    def log(self, a: int) -> int:
        if a == 0:
            raise ValueError("log of zero")
        if self.has_tables:
            return int(self._log[a])
        raise FieldError("discrete logs need tables")

    # vectorised arithmetic on int arrays
    def add_arr(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        w = 1
        for _ in range(self.m):
            out += ((a // w % self.p + b // w % self.p) % self.p) * w
            w *= self.p
        return out

    def neg_arr(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        out = np.zeros_like(a)
        w = 1
        for _ in range(self.m):
            out += ((-(a // w % self.p)) % self.p) * w
            w *= self.p
        return out

    def mul_arr(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if not self.has_tables:
            return np.vectorize(self.mul, otypes=[np.int64])(a, b)
        n = self.order - 1
        res = self._exp[(self._log[a] + self._log[b]) % n]
        return np.where((a == 0) | (b == 0), 0, res)

    def pow_arr(self, a: np.ndarray, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if not self.has_tables:
            return np.vectorize(lambda x: self.pow(int(x), e), otypes=[np.int64])(a)
        n = self.order - 1
        if e < 0 and np.any(a == 0):
            raise ZeroDivisionError("zero has no inverse")
        res = self._exp[(self._log[a] * (e % n)) % n]
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, res)

    def subfield_exponent(self, q: int) -> int:
        """Return e with q = p^e, checking that GF(q) is a subfield."""
        e, t = 0, 1
        while t < q:
            t *= self.p
            e += 1
        if t != q or e == 0 or self.m % e:
            raise FieldError(f"{q} is not the size of a subfield of GF({self.p}^{self.m})")
        return e

    # serialisation
    def header(self) -> str:
        return ",".join(str(v) for v in (self.p, self.m, *self.modulus))

    def serialize(self, x: int) -> str:
        return ",".join(str(c) for c in self.coeffs(x))

    def parse(self, text: str) -> int:
        parts = [int(t) for t in text.split(",")]
        if len(parts) != self.m or any(not 0 <= c < self.p for c in parts):
            raise FieldError(f"malformed element {text!r} for GF({self.p}^{self.m})")
        return self.from_coeffs(parts)


def parse_header(text: str) -> FieldContext:
    vals = [int(t) for t in text.strip().split(",")]
    if len(vals) < 3:
        raise FieldError(f"malformed context header {text!r}")
    p, m, modulus = vals[0], vals[1], vals[2:]
    return make_context(p, m, tuple(modulus))


@lru_cache(maxsize=None)
def make_context(p: int, m: int, modulus: tuple[int, ...] | None = None) -> FieldContext:
    """Deterministic context for GF(p^m); the default modulus is the first
    irreducible in ``irreducible_polys`` order."""
    if not isprime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if m < 1:
        raise FieldError(f"extension degree must be positive, got {m}")
    if modulus is None:
        modulus = next(irreducible_polys(p, m))
    return FieldContext(p, m, modulus)


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p^e, raising for non prime powers."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    f = factorint(q)
    if len(f) != 1:
        raise FieldError(f"{q} is not a prime power")
    (p, e), = f.items()
    return int(p), int(e)


# -- elements -------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElement:
    ctx: FieldContext
    value: int

    @property
    def coeffs(self) -> list[int]:
        return self.ctx.coeffs(self.value)

    def _other(self, other: "FieldElement | int") -> int:
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise FieldError("elements from different contexts")
            return other.value
        if isinstance(other, (int, np.integer)):
            # integers act through the prime subfield
            return self.ctx.from_coeffs([int(other) % self.ctx.p])
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.ctx, self.ctx.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.ctx, self.ctx.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.ctx, self.ctx.sub(self._other(other), self.value))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.value))

    def __mul__(self, other):
        return FieldElement(self.ctx, self.ctx.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.ctx, self.ctx.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return FieldElement(self.ctx, self.ctx.div(self._other(other), self.value))

    def __pow__(self, e: int):
        return FieldElement(self.ctx, self.ctx.pow(self.value, e))

    def __bool__(self) -> bool:
        return self.value != 0

    def inverse(self) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.inv(self.value))

    def serialize(self) -> str:
        return self.ctx.serialize(self.value)

    def __repr__(self) -> str:
        return f"GF({self.ctx.p}^{self.ctx.m})[{self.serialize()}]"


def frobenius(x: FieldElement, k: int, q: int) -> FieldElement:
    """x^(q^k) for a subfield size q."""
    ctx = x.ctx
    ctx.subfield_exponent(q)
    return FieldElement(ctx, ctx.pow(x.value, pow(q, k % _frob_period(ctx, q))))


def _frob_period(ctx: FieldContext, q: int) -> int:
    return ctx.m // ctx.subfield_exponent(q)


def subgroup(ctx: FieldContext, d: int) -> list[FieldElement]:
    """The unique subgroup of order d of GF(p^m)^*, listed as powers of its
    generator omega^((p^m-1)/d)."""
    n = ctx.order - 1
    if d < 1 or n % d:
        raise FieldError(f"{d} does not divide the group order {n}")
    step = n // d
    return [FieldElement(ctx, ctx.gen_pow(i * step)) for i in range(d)]


def in_subfield(x: FieldElement, k: int) -> bool:
    """True iff x lies in the subfield with k elements."""
    x.ctx.subfield_exponent(k)
    return x.ctx.pow(x.value, k) == x.value
