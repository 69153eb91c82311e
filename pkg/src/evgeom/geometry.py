"""Projective points, point sets and flats over GF(q), plus the projective-line
tools (cross-ratio, sublines) and the symplectic form on PG(7, q)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .field import FieldElement
from .linalg import GFq, gfq


class GeometryError(ValueError):
    pass


class _Infinity:
    """The point (0, 1) of a projective line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"


INFINITY = _Infinity()


# -- points -----------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectivePoint:
    coords: tuple[int, ...]
    q: int

    def __post_init__(self):
        if not any(self.coords):
            raise GeometryError("the zero vector is not a projective point")
        lead = next(c for c in self.coords if c)
        if lead != 1:
            raise GeometryError("coordinates are not normalised; use ProjectivePoint.of")

    @property
    def ambient_dim(self) -> int:
        return len(self.coords) - 1

    @classmethod
    def of(cls, vector: Sequence[int], q: int) -> "ProjectivePoint":
        v = np.asarray(vector, dtype=np.int64)
        if not v.any():
            raise GeometryError("the zero vector is not a projective point")
        return cls(tuple(int(x) for x in gfq(q).normalize(v)), q)

    def __iter__(self):
        return iter(self.coords)


def normalize(vector: Sequence[int], q: int) -> tuple[int, ...]:
    return ProjectivePoint.of(vector, q).coords


class PointSet:
    """An ordered set of distinct points of PG(n, q).

    ``generators`` are (n+1)x(n+1) matrices acting on column vectors; when
    given they must be invertible and map the set onto itself.
    """

    def __init__(self, points, q: int, label: str = "", generators: Iterable | None = None,
                 ambient_dim: int | None = None, check: bool = True, meta: dict | None = None):
        F = gfq(q)
        self.meta = dict(meta or {})
        if isinstance(points, np.ndarray):
            arr = np.asarray(points, dtype=np.int64)
        else:
            rows = [p.coords if isinstance(p, ProjectivePoint) else tuple(p) for p in points]
            if rows:
                arr = np.array(rows, dtype=np.int64)
            else:
                if ambient_dim is None:
                    raise GeometryError("empty point set needs ambient_dim")
                arr = np.zeros((0, ambient_dim + 1), dtype=np.int64)
        if arr.ndim != 2:
            raise GeometryError("points must form a 2-D array")
        if arr.size and ((arr < 0) | (arr >= q)).any():
            raise GeometryError("coordinates outside GF(q)")
        if arr.size and (~arr.any(axis=1)).any():
            raise GeometryError("zero vector in point set")
        if len(arr):
            arr = F.normalize(arr)
        self.array = np.ascontiguousarray(arr)
        self.array.setflags(write=False)
        self.q = q
        self.label = label
        self.generators = [np.asarray(g, dtype=np.int64) for g in (generators or [])]
        if check:
            if len(set(self.keys)) != len(self.keys):
                raise GeometryError("duplicate points")
            n1 = self.array.shape[1]
            for g in self.generators:
                if g.shape != (n1, n1) or F.rank(g) != n1:
                    raise GeometryError("group generator is not an invertible matrix")
                if not self.is_invariant(g):
                    raise GeometryError("group generator does not stabilise the set")

    # basic protocol
    @property
    def ambient_dim(self) -> int:
        return self.array.shape[1] - 1

    @property
    def F(self) -> GFq:
        return gfq(self.q)

    def __len__(self) -> int:
        return len(self.array)

    def __iter__(self) -> Iterator[ProjectivePoint]:
        return iter(self.points)

    def __getitem__(self, i: int) -> ProjectivePoint:
        return ProjectivePoint(tuple(int(x) for x in self.array[i]), self.q)

    @cached_property
    def points(self) -> list[ProjectivePoint]:
        return [ProjectivePoint(tuple(int(x) for x in row), self.q) for row in self.array]

    @cached_property
    def keys(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in row) for row in self.array]

    @cached_property
    def _index(self) -> dict[tuple[int, ...], int]:
        return {k: i for i, k in enumerate(self.keys)}

    def index(self, point) -> int:
        key = point.coords if isinstance(point, ProjectivePoint) else normalize(point, self.q)
        return self._index[key]

    def __contains__(self, point) -> bool:
        key = point.coords if isinstance(point, ProjectivePoint) else normalize(point, self.q)
        return key in self._index

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, PointSet) and self.q == other.q
                and set(self.keys) == set(other.keys))

    def __repr__(self) -> str:
        return f"PointSet({self.label or '?'}, q={self.q}, n={self.ambient_dim}, size={len(self)})"

    def apply(self, g: np.ndarray) -> np.ndarray:
        """Images of all points under g, normalised."""
        return self.F.normalize(self.F.matmul(self.array, np.asarray(g).T))

    def is_invariant(self, g: np.ndarray) -> bool:
        image = self.apply(g)
        return set(map(tuple, image.tolist())) == set(self.keys)

    def union(self, extra, label: str | None = None) -> "PointSet":
        extra = np.atleast_2d(np.asarray([p.coords if isinstance(p, ProjectivePoint) else p
                                          for p in extra], dtype=np.int64))
        return PointSet(np.vstack([self.array, extra]), self.q, label or self.label)

    def subset(self, indices: Sequence[int], label: str | None = None) -> "PointSet":
        return PointSet(self.array[list(indices)], self.q, label or self.label, check=False)


@dataclass(frozen=True)
class Flat:
    """A projective subspace given by independent basis rows."""

    basis: np.ndarray
    q: int

    def __post_init__(self):
        b = np.atleast_2d(np.asarray(self.basis, dtype=np.int64))
        object.__setattr__(self, "basis", b)
        if gfq(self.q).rank(b) != len(b):
            raise GeometryError("flat basis is not linearly independent")

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    @classmethod
    def from_covector(cls, covector: Sequence[int], q: int) -> "Flat":
        return cls(gfq(q).nullspace(np.atleast_2d(covector)), q)

    @classmethod
    def span(cls, points, q: int) -> "Flat":
        rows = np.array([p.coords if isinstance(p, ProjectivePoint) else p for p in points],
                        dtype=np.int64)
        return cls(gfq(q).row_basis(rows), q)

    @cached_property
    def annihilator(self) -> np.ndarray:
        return gfq(self.q).nullspace(self.basis)

    def contains(self, points) -> np.ndarray:
        """Boolean mask of which rows of ``points`` lie in the flat."""
        arr = points.array if isinstance(points, PointSet) else np.atleast_2d(
            np.asarray([p.coords if isinstance(p, ProjectivePoint) else p for p in points]
                       if not isinstance(points, np.ndarray) else points, dtype=np.int64))
        H = self.annihilator
        if len(H) == 0:
            return np.ones(len(arr), dtype=bool)
        return ~gfq(self.q).matmul(arr, H.T).any(axis=1)


# -- rank -------------------------------------------------------------------------

def _as_matrix(points) -> tuple[np.ndarray, int]:
    if isinstance(points, PointSet):
        return points.array, points.q
    pts = list(points)
    if not pts:
        raise GeometryError("rank of an empty list is undefined here")
    qs = {p.q for p in pts}
    dims = {p.ambient_dim for p in pts}
    if len(qs) != 1 or len(dims) != 1:
        raise GeometryError("points from different ambient spaces")
    return np.array([p.coords for p in pts], dtype=np.int64), qs.pop()


def rank(points) -> int:
    """Rank over GF(q) of the matrix whose rows are the given points."""
    M, q = _as_matrix(points)
    return gfq(q).rank(M)


def project_from(X: PointSet, center: ProjectivePoint | Sequence[int],
                 label: str | None = None) -> PointSet:
    """Project X minus the centre from the centre into PG(n-1, q).

    The quotient coordinates drop the centre's leading coordinate after
    clearing it: x -> x - x_i * P.
    """
    F = X.F
    c = np.asarray(center.coords if isinstance(center, ProjectivePoint) else
                   normalize(center, X.q), dtype=np.int64)
    lead = int(np.flatnonzero(c)[0])
    keep = [i for i, key in enumerate(X.keys) if key != tuple(int(x) for x in c)]
    arr = X.array[keep]
    reduced = F.add[arr, F.neg[F.mul[arr[:, lead, None], c[None, :]]]]
    reduced = np.delete(reduced, lead, axis=1)
    if (~reduced.any(axis=1)).any():
        raise GeometryError("centre is not a projective point distinct from the set")
    if len(np.unique(F.normalize(reduced), axis=0)) < len(reduced):
        raise GeometryError("centre is collinear with two points of the set")
    return PointSet(reduced, X.q, label or f"{X.label}/proj", check=False)


# -- hyperplanes and all points ---------------------------------------------------

class BudgetExceeded(RuntimeError):
    pass


def hyperplanes(n: int, q: int, max_count: int | None = None) -> Iterator[Flat]:
    """Every hyperplane of PG(n, q) once, as the kernel of a normalised covector."""
    F = gfq(q)
    total = F.num_points(n)
    if max_count is not None and total > max_count:
        raise BudgetExceeded(f"PG({n},{q}) has {total} hyperplanes (cap {max_count})")
    for block in F.iter_points(n):
        for c in block:
            yield Flat.from_covector(c, q)


def covectors(n: int, q: int, chunk: int = 1 << 14) -> Iterator[np.ndarray]:
    """Normalised covectors of PG(n, q) in blocks (same order as ``hyperplanes``)."""
    return gfq(q).iter_points(n, chunk)


def intersection_counts(X: PointSet, covs: np.ndarray) -> np.ndarray:
    """|H ∩ X| for each hyperplane given by a row of ``covs``."""
    vals = X.F.matmul(covs, X.array.T)
    return (vals == 0).sum(axis=1)


# -- projective line --------------------------------------------------------------

def cross_ratio(u, v, w, z):
    """{u, v; w, z} = (u-w)(v-z) / ((u-z)(v-w)) on PG(1, F).

    Arguments are FieldElements or INFINITY (the point (0, 1)); the result is
    a FieldElement or INFINITY.
    """
    args = [u, v, w, z]
    ctx = next((a.ctx for a in args if isinstance(a, FieldElement)), None)
    if ctx is None:
        raise GeometryError("cross-ratio needs at least one finite point")
    pts = []
    for a in args:
        if a is INFINITY or a is None:
            pts.append((0, 1))
        elif isinstance(a, FieldElement):
            if a.ctx != ctx:
                raise GeometryError("mixed fields")
            pts.append((1, a.value))
        else:
            raise GeometryError(f"not a point of the projective line: {a!r}")
    if len(set(pts)) < 4:
        raise GeometryError("cross-ratio needs four distinct points")

    def bracket(P, Q):
        # det [[P0, P1], [Q0, Q1]]
        return ctx.sub(ctx.mul(P[0], Q[1]), ctx.mul(P[1], Q[0]))

    U, V, W, Z = pts
    num = ctx.mul(bracket(U, W), bracket(V, Z))
    den = ctx.mul(bracket(U, Z), bracket(V, W))
    if den == 0:
        return INFINITY
    return FieldElement(ctx, ctx.div(num, den))


def in_q_subline(u, v, w, z, q: int) -> bool:
    """True iff the four points lie on a common PG(1, q) subline."""
    cr = cross_ratio(u, v, w, z)
    if cr is INFINITY:
        return True
    ctx = cr.ctx
    ctx.subfield_exponent(q)
    return ctx.pow(cr.value, q) == cr.value


# -- symplectic form on PG(7, q) --------------------------------------------------

def symplectic_form(P: ProjectivePoint, Q: ProjectivePoint) -> FieldElement:
    """B(P, Q) for the alternating form J (x) J (x) J on PG(U1) = PG(7, q),
    evaluated on intrinsic U1 coordinates."""
    if P.ambient_dim != 7 or Q.ambient_dim != 7 or P.q != Q.q:
        raise GeometryError("symplectic_form is defined on PG(7, q) only")
    from .models import u1_model

    F = gfq(P.q)
    G = u1_model(P.q).gram
    val = F.dot(P.coords, F.matmul(G, np.asarray(Q.coords)))
    return FieldElement(F.ctx, val)


def form_matrix(X: PointSet, Y: PointSet | np.ndarray | None = None) -> np.ndarray:
    """Matrix of B-values between the points of X and Y (default Y = X)."""
    from .models import u1_model

    if X.ambient_dim != 7:
        raise GeometryError("symplectic form needs PG(7, q)")
    F = X.F
    Yarr = X.array if Y is None else (Y.array if isinstance(Y, PointSet) else np.asarray(Y))
    return F.matmul(F.matmul(Yarr, u1_model(X.q).gram.T), X.array.T).T


# -- file format ------------------------------------------------------------------

def _fmt_elem(F: GFq, x: int) -> str:
    return ",".join(str(c) for c in F.ctx.coeffs(int(x)))


def _parse_elem(F: GFq, text: str) -> int:
    try:
        return F.ctx.parse(text)
    except ValueError as exc:
        raise GeometryError(str(exc)) from None


def format_row(F: GFq, row) -> str:
    return ";".join(_fmt_elem(F, x) for x in row)


def parse_row(F: GFq, line: str, width: int) -> list[int]:
    parts = line.strip().split(";")
    if len(parts) != width:
        raise GeometryError(f"expected {width} coordinates, got {len(parts)}: {line!r}")
    return [_parse_elem(F, t) for t in parts]


def dumps_pointset(X: PointSet, with_group: bool = True) -> str:
    F = X.F
    if "," in X.label or "\n" in X.label:
        raise GeometryError("labels may not contain commas or newlines")
    lines = [f"{X.q},{F.p},{F.e},{X.ambient_dim},{X.label},{len(X)}"]
    lines += [format_row(F, row) for row in X.array]
    if with_group and X.generators:
        lines.append(f"GROUP,{len(X.generators)}")
        for g in X.generators:
            lines += [format_row(F, row) for row in g]
    return "\n".join(lines) + "\n"


def loads_pointset(text: str) -> PointSet:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise GeometryError("empty point set file")
    head = lines[0].split(",")
    if len(head) != 6:
        raise GeometryError(f"malformed header {lines[0]!r}")
    try:
        q, p, e, n, count = int(head[0]), int(head[1]), int(head[2]), int(head[3]), int(head[5])
    except ValueError:
        raise GeometryError(f"malformed header {lines[0]!r}") from None
    label = head[4]
    try:
        F = gfq(q)
    except ValueError as exc:
        raise GeometryError(str(exc)) from None
    if (F.p, F.e) != (p, e):
        raise GeometryError("header field data inconsistent with q")
    body = lines[1:]
    if len(body) < count:
        raise GeometryError("fewer points than announced")
    rows = [parse_row(F, ln, n + 1) for ln in body[:count]]
    rest = body[count:]
    gens = []
    if rest:
        tag = rest[0].split(",")
        if tag[0] != "GROUP" or len(tag) != 2:
            raise GeometryError(f"unexpected content after points: {rest[0]!r}")
        g = int(tag[1])
        mats = rest[1:]
        if len(mats) != g * (n + 1):
            raise GeometryError("GROUP section has the wrong number of rows")
        for i in range(g):
            gens.append(np.array([parse_row(F, ln, n + 1)
                                  for ln in mats[i * (n + 1):(i + 1) * (n + 1)]], dtype=np.int64))
    for r in rows:
        if not any(r):
            raise GeometryError("zero vector in point set file")
    return PointSet(np.array(rows, dtype=np.int64).reshape(count, n + 1), q, label, gens)


def write_pointset(X: PointSet, path, with_group: bool = True) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_pointset(X, with_group))


def read_pointset(path) -> PointSet:
    with open(path) as fh:
        return loads_pointset(fh.read())
