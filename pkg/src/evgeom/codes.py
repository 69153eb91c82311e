"""Point sets as parity-check matrices of linear codes.

A set X of points of PG(n, q) is (k+1)-general exactly when the code with
the points as check-matrix columns has minimum distance at least k+2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .geometry import BudgetExceeded, GeometryError, PointSet, format_row, parse_row
from .linalg import gfq
from .verify import default_budget


class CodeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CheckMatrix:
    q: int
    matrix: np.ndarray

    def __post_init__(self):
        M = np.atleast_2d(np.asarray(self.matrix, dtype=np.int64))
        if M.min(initial=0) < 0 or M.max(initial=0) >= self.q:
            raise CodeError("entries outside GF(q)")
        F = gfq(self.q)
        cols = M.T
        if (~cols.any(axis=1)).any():
            raise CodeError("zero column")
        codes = F.codes(F.normalize(cols))
        if len(np.unique(codes)) != len(codes):
            raise CodeError("two columns are proportional")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, CheckMatrix) and self.q == other.q
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self) -> int:
        return hash((self.q, self.matrix.tobytes()))

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    @property
    def dimension(self) -> int:
        """Dimension of the code this matrix checks."""
        return self.cols - gfq(self.q).rank(self.matrix)

    def columns_as_pointset(self, label: str = "columns") -> PointSet:
        return PointSet(self.matrix.T, self.q, label)


def export_check_matrix(X: PointSet) -> CheckMatrix:
    """Columns are the coordinates of the points of X, in order."""
    if X.F.rank(X.array) != X.ambient_dim + 1:
        raise CodeError("point set does not span its ambient space")
    return CheckMatrix(X.q, X.array.T.copy())


def min_distance(H: CheckMatrix, budget: int | None = None) -> int:
    """Least d such that some d columns of H are linearly dependent."""
    if H.dimension < 1:
        raise CodeError("the code has dimension 0 (no nonzero codewords)")
    budget = default_budget() if budget is None else budget
    F = gfq(H.q)
    add, mul, neg, inv = F.tables
    C = np.ascontiguousarray(H.matrix.T)
    out = np.full(H.cols, -1, dtype=np.int64)
    spent = 0
    # some rank+1 columns are always dependent
    for d in range(1, F.rank(H.matrix) + 2):
        spent += math.comb(H.cols, d)
        if spent > budget:
            raise BudgetExceeded(f"column-subset scan exceeds the budget of {budget}")
        _kernels.first_dependent_subset(C, d, add, mul, neg, inv, out)
        if out[0] >= 0:
            return d
    raise AssertionError("unreachable: rank + 1 columns are dependent")


def dependent_columns(H: CheckMatrix, d: int) -> tuple[int, ...] | None:
    """Lexicographically first d dependent columns whose proper prefixes are independent."""
    F = gfq(H.q)
    out = np.full(d, -1, dtype=np.int64)
    _kernels.first_dependent_subset(np.ascontiguousarray(H.matrix.T), d, *F.tables, out)
    return None if out[0] < 0 else tuple(int(x) for x in out)


# extended ternary Golay code G = [I | B]; it is self-dual, so G is also a check matrix
_GOLAY_B = np.array([[0, 1, 1, 1, 1, 1],
                     [1, 0, 1, 2, 2, 1],
                     [1, 1, 0, 1, 2, 2],
                     [1, 2, 1, 0, 1, 2],
                     [1, 2, 2, 1, 0, 1],
                     [1, 1, 2, 2, 1, 0]], dtype=np.int64)


def ternary_golay_check_matrix() -> CheckMatrix:
    return CheckMatrix(3, np.hstack([np.eye(6, dtype=np.int64), _GOLAY_B]))


# -- matrix files ----------------------------------------------------------------

def dumps_matrix(H: CheckMatrix) -> str:
    F = gfq(H.q)
    lines = [f"{H.q},{H.rows},{H.cols}"] + [format_row(F, row) for row in H.matrix]
    return "\n".join(lines) + "\n"


def loads_matrix(text: str) -> CheckMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise CodeError("empty matrix file")
    try:
        q, rows, cols = (int(x) for x in lines[0].split(","))
        F = gfq(q)
    except ValueError:
        raise CodeError(f"malformed header {lines[0]!r}") from None
    if len(lines) - 1 != rows:
        raise CodeError(f"expected {rows} rows, found {len(lines) - 1}")
    try:
        M = np.array([parse_row(F, ln, cols) for ln in lines[1:]], dtype=np.int64)
    except GeometryError as exc:
        raise CodeError(str(exc)) from None
    return CheckMatrix(q, M.reshape(rows, cols))


def write_matrix(H: CheckMatrix, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_matrix(H))


def read_matrix(path) -> CheckMatrix:
    with open(path) as fh:
        return loads_matrix(fh.read())
