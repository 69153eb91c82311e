"""Point sets built from the Desarguesian partial ovoid of PG(7, q) and from
the cyclic groups acting on PG(U2) and PG(U3)."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .geometry import PointSet, ProjectivePoint
from .linalg import gfq
from .models import h2_model, u1_model, u3_model

FAMILIES = ("ovoid7", "cubic", "hyp6", "aff5", "proj5", "pg13")
THEOREM_FAMILIES = ("hyp6", "aff5", "proj5")


class ConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class ConstructionSpec:
    family: str
    q: int
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.q < 2:
            raise ValueError("q must be at least 2")
        gfq(self.q)  # rejects non prime powers
        if self.family in THEOREM_FAMILIES and self.q < 4:
            warnings.warn(f"{self.family} is only guaranteed for q >= 4", stacklevel=2)


def build(spec: ConstructionSpec) -> PointSet:
    modulus = spec.options.get("modulus")
    fn = {
        "ovoid7": desarguesian_ovoid,
        "cubic": canonical_cubic,
        "hyp6": hyperplane_section,
        "aff5": projected_set,
        "proj5": extended_projected_set,
        "pg13": pg13_set,
    }[spec.family]
    X = fn(spec.q, modulus=modulus)
    if not spec.options.get("with_group", True):
        X = PointSet(X.array, X.q, X.label, check=False, meta=X.meta)
    return X


# -- PG(7, q) ------------------------------------------------------------------------

def _gl2_generators(q: int, modulus) -> list[np.ndarray]:
    M = u1_model(q, modulus)
    w = M.ctx.generator
    return [M.gl2_matrix([[1, 0], [0, w]]),     # t -> omega t
            M.gl2_matrix([[1, 1], [0, 1]]),     # t -> t + 1
            M.gl2_matrix([[0, 1], [1, 0]])]     # t -> 1/t


def desarguesian_ovoid(q: int, modulus: tuple[int, ...] | None = None,
                       with_group: bool = True) -> PointSet:
    """The q^3+1 points P(1, t, t^{q^2+q}, t^{q^2+q+1}) and P(0, 0, 0, 1).

    Points are listed by parameter t = 0, 1, 2, ... (ambient integer order)
    with the point at infinity last, so index 0, 1 and q^3 hold the
    parameters 0, 1 and infinity.  The attached generators induce PGL(2, q^3).
    """
    M = u1_model(q, modulus)
    ctx = M.ctx
    ts = np.arange(ctx.order, dtype=np.int64)
    coords = M.coords(np.ones_like(ts), ts, ctx.pow_arr(ts, q * q + q), ctx.pow_arr(ts, q * q + q + 1))
    coords = np.vstack([coords, M.ovoid_point(None)])
    params = [int(t) for t in ts] + [None]
    gens = _gl2_generators(q, modulus) if with_group else None
    return PointSet(coords, q, f"ovoid7-q{q}", gens,
                    meta={"params": params, "model": M})


def canonical_cubic(q: int, modulus: tuple[int, ...] | None = None) -> PointSet:
    """The twisted cubic {P(1, t, t^2, t^3) : t in F_q} + P(0, 0, 0, 1)."""
    M = u1_model(q, modulus)
    ctx = M.ctx
    ts = sorted(int(x) for x in M.f1.iota)
    rows = [M.ovoid_point(t) for t in ts] + [M.ovoid_point(None)]
    return PointSet(np.array(rows), q, f"cubic-q{q}", meta={"params": ts + [None], "model": M})


def cubic_orbit_count(q: int) -> int:
    """Number of twisted cubics on the ovoid (= q-order sublines of PG(1, q^3))."""
    return q * q * (q ** 4 + q * q + 1)


# -- PG(6, q) and PG(5, q) -----------------------------------------------------------

def _t_subgroup(ctx, q: int) -> list[int]:
    d = q * q - q + 1
    step = (ctx.order - 1) // d
    return [ctx.gen_pow(i * step) for i in range(d)]


def sigma_multiplier(ctx, q: int) -> int:
    """eta' = omega^{(q+1)(q^2+q+1)(q-q^4)}, of order q^2-q+1."""
    e = ((q + 1) * (q * q + q + 1) * (q - q ** 4)) % (ctx.order - 1)
    return ctx.gen_pow(e)


def hyperplane_section(q: int, modulus: tuple[int, ...] | None = None,
                       with_group: bool = True) -> PointSet:
    """{u(1, t) : t^{q^2-q+1} = 1} in PG(6, q), u(1, 1) first.

    The attached generator is the matrix of u(a, b) -> u(a, eta' b).
    """
    H = h2_model(q, modulus)
    ctx = H.ctx
    ts = np.array(_t_subgroup(ctx, q), dtype=np.int64)
    coords = H.coords(np.ones_like(ts), ts)
    gens = None
    if with_group:
        eta = sigma_multiplier(ctx, q)
        if ctx.pow(eta, q * q - q + 1) != 1 or any(
                ctx.pow(eta, (q * q - q + 1) // ell) == 1 for ell in _prime_divisors(q * q - q + 1)):
            raise ConstructionError("sigma multiplier does not have order q^2-q+1")
        g = np.zeros((7, 7), dtype=np.int64)
        g[0, 0] = 1
        g[1:, 1:] = H.f6.multiplication_matrix(eta)
        gens = [g]
    return PointSet(coords, q, f"hyp6-q{q}", gens, meta={"params": [int(t) for t in ts], "model": H})


def _prime_divisors(n: int) -> list[int]:
    from sympy import primefactors
    return list(primefactors(n))


def projected_set(q: int, modulus: tuple[int, ...] | None = None) -> PointSet:
    """{u(0, b - 1) : b^{q^2-q+1} = 1, b != 1} in Pi = PG(5, q)."""
    H = h2_model(q, modulus)
    ctx = H.ctx
    bs = [b for b in _t_subgroup(ctx, q) if b != 1]
    xs = np.array([ctx.sub(b, 1) for b in bs], dtype=np.int64)
    return PointSet(H.pi_coords(xs), q, f"aff5-q{q}", meta={"params": bs, "model": H})


def kernel_line(q: int, modulus: tuple[int, ...] | None = None) -> np.ndarray:
    """Reduced echelon basis (Pi-coordinates) of ker F, F(X) = X^{q^2} - X^q + X."""
    H = h2_model(q, modulus)
    ctx = H.ctx
    Fmat = H.f6.linear_map_matrix(
        lambda x: ctx.add(ctx.sub(ctx.pow(x, q * q), ctx.pow(x, q)), x))
    ker = gfq(q).nullspace(Fmat)
    if len(ker) != 2:
        raise ConstructionError(f"ker F has dimension {len(ker)}, expected 2")
    return ker


def extended_projected_set(q: int, modulus: tuple[int, ...] | None = None) -> PointSet:
    """projected_set(q) plus the two echelon basis points of PG(ker F)."""
    Y = projected_set(q, modulus)
    ker = kernel_line(q, modulus)
    X = PointSet(np.vstack([Y.array, ker]), q, f"proj5-q{q}",
                 meta={**Y.meta, "extra": [tuple(int(x) for x in r) for r in gfq(q).normalize(ker)]})
    return X


@dataclass
class QuotientQuadric:
    E: PointSet                 # points of PG(W) with Phi(z) = 0, W-coordinates
    C: PointSet                 # E ∩ {z in F_{q^3}}
    projection: list[int]       # index into E of the image of each point of Y
    w_basis: np.ndarray         # rows: basis of W in Pi-coordinates


def quotient_quadric(q: int, modulus: tuple[int, ...] | None = None) -> QuotientQuadric:
    H = h2_model(q, modulus)
    ctx, F = H.ctx, gfq(q)

    def fr(x, k):
        return ctx.pow(x, q ** k)

    Wrel = H.f6.linear_map_matrix(
        lambda z: ctx.sub(ctx.add(z, fr(z, 1)), ctx.add(fr(z, 3), fr(z, 4))))
    Wb = F.nullspace(Wrel)
    if len(Wb) != 4:
        raise ConstructionError(f"W has dimension {len(Wb)}, expected 4")
    pts = F.all_points(3)
    zs = H.pi_element(F.matmul(pts, Wb))

    def phi(z):
        z1, z2, z3 = fr(z, 1), fr(z, 2), fr(z, 3)
        return ctx.add(ctx.add(ctx.mul(z2, z), ctx.mul(z2, z1)), ctx.mul(z1, z3))

    on_e = [i for i, z in enumerate(zs.tolist()) if phi(z) == 0]
    E = PointSet(pts[on_e], q, f"quadric-q{q}", meta={"z": [int(zs[i]) for i in on_e]})
    on_c = [j for j, i in enumerate(on_e) if fr(int(zs[i]), 3) == int(zs[i])]
    C = E.subset(on_c, f"conic-q{q}")

    Y = projected_set(q, modulus)
    images = []
    for b in Y.meta["params"]:
        x = ctx.sub(b, 1)
        fx = ctx.add(ctx.sub(fr(x, 2), fr(x, 1)), x)
        c = F.express(Wb, H.pi_coords(fx))
        if c is None:
            raise ConstructionError("F(x) outside W")
        images.append(E.index(ProjectivePoint.of(c, q)) if ProjectivePoint.of(c, q) in E else -1)
    return QuotientQuadric(E, C, images, Wb)


# -- PG(13, q) -----------------------------------------------------------------------

def phi3_matrix(q: int, modulus: tuple[int, ...] | None = None) -> np.ndarray:
    """14x14 matrix of v(a, b, c) -> v(w^{q^4+q^2+1} a, w^{q^3+q+1} b, w^{q^4+q+1} c)."""
    U = u3_model(q, modulus)
    ctx = U.ctx
    g = np.zeros((14, 14), dtype=np.int64)
    g[0:2, 0:2] = U.f2.multiplication_matrix(ctx.gen_pow(q ** 4 + q * q + 1))
    g[2:8, 2:8] = U.f6.multiplication_matrix(ctx.gen_pow(q ** 3 + q + 1))
    g[8:14, 8:14] = U.f6.multiplication_matrix(ctx.gen_pow(q ** 4 + q + 1))
    return g


def pg13_set(q: int, modulus: tuple[int, ...] | None = None, with_group: bool = True) -> PointSet:
    """The <phi3>-orbit of v(1, 1, 1) in PG(13, q)."""
    U = u3_model(q, modulus)
    F = gfq(q)
    g = phi3_matrix(q, modulus)
    start = F.normalize(U.coords(1, 1, 1))
    orbit = [start]
    seen = {tuple(start.tolist())}
    v = start
    expected = (q ** 6 - 1) // (q - 1)
    for _ in range(expected + 1):
        v = F.normalize(F.matmul(g, v))
        key = tuple(v.tolist())
        if key in seen:
            break
        seen.add(key)
        orbit.append(v)
    if len(orbit) != expected:
        raise ConstructionError(f"orbit of v(1,1,1) has size {len(orbit)}, expected {expected}")
    return PointSet(np.array(orbit), q, f"pg13-q{q}", [g] if with_group else None,
                    meta={"model": U})


def pg13_parametrized(q: int, modulus: tuple[int, ...] | None = None) -> PointSet:
    """The same set from the closed form v(x^{q^4+q^2+1}, x^{q^3+q+1}, x^{q^4+q+1})."""
    U = u3_model(q, modulus)
    ctx = U.ctx
    xs = np.arange(1, ctx.order, dtype=np.int64)
    coords = U.coords(ctx.pow_arr(xs, q ** 4 + q * q + 1), ctx.pow_arr(xs, q ** 3 + q + 1),
                      ctx.pow_arr(xs, q ** 4 + q + 1))
    uniq = np.unique(gfq(q).normalize(coords), axis=0)
    return PointSet(uniq, q, f"pg13x-q{q}")


# -- small reference sets ------------------------------------------------------------

def projective_frame(n: int, q: int) -> PointSet:
    """The n+1 unit points of PG(n, q) together with the all-ones point."""
    rows = np.vstack([np.eye(n + 1, dtype=np.int64), np.ones((1, n + 1), dtype=np.int64)])
    return PointSet(rows, q, f"frame-{n}-q{q}")
