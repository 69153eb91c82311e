"""Upper bounds on (r, s)-set sizes, evaluated exactly.

Each bound is a real expression; ``value`` is its floor computed with
integer roots only, so no rounding error can move it across an integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from sympy import integer_nthroot

from .field import prime_power

KINDS = {"n2": "bound_n_minus2", "g5": "bound_5general", "g4": "bound_4general"}


@dataclass(frozen=True)
class BoundResult:
    kind: str
    n: int
    q: int
    value: int
    exact_expression: str
    approx: float

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n, "q": self.q, "value": self.value,
                "exact_expression": self.exact_expression, "approx": self.approx}


def iroot(x: int, k: int) -> int:
    """Largest r with r**k <= x (x >= 0)."""
    if x < 0 or k < 1:
        raise ValueError("iroot needs x >= 0 and k >= 1")
    if k == 2:
        return math.isqrt(x)
    return int(integer_nthroot(x, k)[0])


def _check(n: int, q: int) -> None:
    if n < 2 or q < 2:
        raise ValueError("need n >= 2 and q >= 2")
    prime_power(q)


def bound_n_minus2(n: int, q: int) -> BoundResult:
    """(n! (q^{n+1}-1)(q^n-1) / ((q-1)(q^2-1)))^{1/(n-1)} + n - 2, for (n, n-2)-sets."""
    _check(n, q)
    num = math.factorial(n) * (q ** (n + 1) - 1) * (q ** n - 1)
    den = (q - 1) * (q * q - 1)
    # floor(x^(1/m)) only depends on floor(x)
    value = iroot(num // den, n - 1) + n - 2
    expr = f"({num}/{den})^(1/{n - 1}) + {n - 2}"
    approx = math.exp((math.log(num) - math.log(den)) / (n - 1)) + n - 2
    return BoundResult("n2", n, q, value, expr, approx)


def _sqrt_bound(kind: str, n: int, q: int, radicand: int, shift: int) -> BoundResult:
    den = 2 * (q - 1)
    # floor((sqrt(R) + c) / m) = floor((isqrt(R) + c) / m) for integers c, m > 0
    value = (math.isqrt(radicand) + shift) // den
    expr = f"(sqrt({radicand}) + {shift})/{den}"
    return BoundResult(kind, n, q, value, expr, (math.sqrt(radicand) + shift) / den)


def bound_5general(n: int, q: int) -> BoundResult:
    """(sqrt(8q^n + q^2 - 6q + 1) + 3q - 5) / (2(q-1))."""
    _check(n, q)
    return _sqrt_bound("g5", n, q, 8 * q ** n + q * q - 6 * q + 1, 3 * q - 5)


def bound_4general(n: int, q: int) -> BoundResult:
    """(sqrt(8q^{n+1} + q^2 - 6q + 1) + q - 3) / (2(q-1))."""
    _check(n, q)
    return _sqrt_bound("g4", n, q, 8 * q ** (n + 1) + q * q - 6 * q + 1, q - 3)


def bound(kind: str, n: int, q: int) -> BoundResult:
    if kind not in KINDS:
        raise ValueError(f"unknown bound kind {kind!r}; choose from {sorted(KINDS)}")
    return globals()[KINDS[kind]](n, q)


# which bounds each construction is subject to: (kind, n)
APPLICABLE = {
    "ovoid7": [("g4", 7)],
    "hyp6": [("g5", 6), ("n2", 6)],
    "aff5": [("g4", 5), ("n2", 5)],
    "proj5": [("g4", 5)],
    "pg13": [("g4", 13)],
}


def applicable_bounds(family: str, q: int) -> list[BoundResult]:
    return [bound(kind, n, q) for kind, n in APPLICABLE.get(family, [])]
