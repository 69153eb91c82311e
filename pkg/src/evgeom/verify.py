"""Exhaustive and group-reduced checks on point sets.

Every check returns a ``VerificationReport``.  Subset scans run through the
compiled kernel in ``_kernels``; a failing report always carries a witness
that is re-checked here with an independent rank computation before it is
returned.
"""

from __future__ import annotations

import itertools
import math
import os
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import _kernels
from .constructions import desarguesian_ovoid
from .field import FieldElement
from .geometry import (INFINITY, BudgetExceeded, Flat, GeometryError, PointSet,
                       covectors, in_q_subline, intersection_counts)
from .linalg import GFq, gfq

DEFAULT_BUDGET = 2_000_000_000
REDUCTIONS = ("none", "fix_one_point", "fix_three_points")


def default_budget() -> int:
    env = os.environ.get("EVGEOM_BUDGET")
    if env:
        value = int(env)
        if value < 1:
            raise ValueError("EVGEOM_BUDGET must be positive")
        return value
    return DEFAULT_BUDGET


class VerificationError(RuntimeError):
    """Internal inconsistency (e.g. a witness that does not re-verify)."""


@dataclass
class VerificationReport:
    check_name: str
    passed: bool
    witness: list | None = None
    counts: dict = field(default_factory=dict)
    work: int = 0
    reduction_used: str = "none"
    elapsed_ms: float = 0.0
    sub_verdicts: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        out = {"check": self.check_name, "passed": self.passed, "witness": self.witness,
               "counts": self.counts, "work": self.work, "reduction": self.reduction_used,
               "elapsed_ms": round(self.elapsed_ms, 3)}
        if self.sub_verdicts:
            out["sub_verdicts"] = self.sub_verdicts
        if self.details:
            out["details"] = self.details
        return out

    def comparable(self) -> dict[str, Any]:
        """The JSON form without timing, for equality across runs."""
        out = self.to_json()
        del out["elapsed_ms"]
        return out


def _rows(arr: np.ndarray) -> list[list[int]]:
    return [[int(x) for x in r] for r in np.atleast_2d(arr)]


# -- low-rank subset search -------------------------------------------------------

@dataclass
class ScanResult:
    count: int
    work: int
    witness: tuple[int, ...] | None
    reduction: str


def _binom_table(N: int, k: int) -> np.ndarray:
    B = np.zeros((N + 1, k + 1), dtype=np.int64)
    for n in range(N + 1):
        for r in range(min(n, k) + 1):
            B[n, r] = math.comb(n, r)
    return B


def orbit(X: PointSet, start: int = 0) -> list[int]:
    """Indices of the orbit of X[start] under the attached generators.

    Raises GeometryError if the orbit leaves X."""
    if not X.generators:
        raise GeometryError("point set carries no group generators")
    F = X.F
    seen = {start}
    frontier = [start]
    while frontier:
        pts = X.array[frontier]
        nxt = []
        for g in X.generators:
            imgs = F.normalize(F.matmul(pts, g.T))
            for row in imgs:
                key = tuple(int(x) for x in row)
                if key not in X:
                    raise GeometryError(f"orbit leaves the set at {key}")
                i = X.index(key)
                if i not in seen:
                    seen.add(i)
                    nxt.append(i)
        frontier = nxt
    return sorted(seen)


def _transitive(X: PointSet) -> bool:
    if not X.generators:
        return False
    try:
        return len(orbit(X)) == len(X)
    except GeometryError:
        return False


def _choose_reduction(X: PointSet, reduction: str) -> bool:
    if reduction not in ("auto", "none", "fix_one_point"):
        raise ValueError(f"unknown reduction {reduction!r}")
    if reduction == "none":
        return False
    ok = _transitive(X)
    if reduction == "fix_one_point" and not ok:
        raise GeometryError("fix-one-point reduction needs a transitive group on the set")
    return ok


def low_rank_search(X: PointSet | np.ndarray, k: int, max_rank: int, *, q: int | None = None,
                    fix_first: bool = False, census: bool = False, prepay: bool | None = None,
                    budget: int | None = None, chunk: int | None = None) -> ScanResult:
    """Look for k-subsets of the rows of X whose rank is at most ``max_rank``.

    With ``fix_first`` only subsets containing row 0 are considered.  Without
    ``census`` the scan stops at the lexicographically first such subset.
    With ``prepay`` the scan refuses up front if the subset count exceeds the
    budget; otherwise branches are processed in chunks and the budget is
    charged as work accrues, so an early witness costs little.
    """
    if isinstance(X, PointSet):
        V, q = X.array, X.q
    else:
        V = np.asarray(X, dtype=np.int64)
    if q is None:
        raise ValueError("q is required for a raw matrix")
    F = gfq(q)
    budget = default_budget() if budget is None else budget
    N, L = V.shape
    if k < 1 or k > N:
        return ScanResult(0, 0, None, "fix_one_point" if fix_first else "none")
    if q ** L >= 2 ** 62:
        raise ValueError("ambient space too large for the hashing kernel")
    total = math.comb(N - 1, k - 1) if fix_first else math.comb(N, k)
    if total >= 2 ** 62:
        raise BudgetExceeded(f"{total} subsets overflow the work counter")
    if prepay is None:
        prepay = census
    if prepay and total > budget:
        raise BudgetExceeded(f"{total} subsets exceed the budget of {budget}")
    red = "fix_one_point" if fix_first else "none"
    if fix_first and k == 1:
        low = int(F.rank(V[:1]) <= max_rank)
        return ScanResult(low, 1, (0,) if low else None, red)
    add, mul, neg, inv = F.tables
    binom = _binom_table(N, k)
    lo, hi = (1, N) if fix_first else (0, N)
    if chunk is None:
        chunk = (hi - lo) if total <= budget else max(1, (hi - lo) // 16)
    step = chunk
    count = work = 0
    witness = None
    V = np.ascontiguousarray(V, dtype=np.int64)
    for b0 in range(lo, hi, step):
        b1 = min(hi, b0 + step)
        counts, works, found, wits = _kernels.low_rank_scan(
            V, k, max_rank, fix_first, not census, b0, b1, q, add, mul, neg, inv, binom)
        count += int(counts.sum())
        work += int(works.sum())
        if witness is None and found.any():
            witness = tuple(int(x) for x in wits[int(np.argmax(found))])
        if witness is not None and not census:
            break
        if work > budget:
            raise BudgetExceeded(f"work {work} exceeded the budget of {budget}")
    if witness is not None:
        if F.rank(V[list(witness)]) > max_rank or len(set(witness)) != k:
            raise VerificationError(f"witness {witness} does not re-verify")
    return ScanResult(count, work, witness, red)


# -- k-general and (r, s) ------------------------------------------------------------

def is_k_general(X: PointSet, k: int, *, census: bool = False, budget: int | None = None,
                 reduction: str = "auto") -> VerificationReport:
    """Every k points of X are linearly independent."""
    n = X.ambient_dim
    if not 2 <= k <= n + 1:
        raise ValueError(f"k must lie in [2, {n + 1}]")
    t0 = time.perf_counter()
    fix = _choose_reduction(X, reduction)
    res = low_rank_search(X, k, k - 1, fix_first=fix, census=census, budget=budget)
    counts = {"size": len(X), "k": k,
              "subsets": math.comb(len(X) - 1, k - 1) if fix else math.comb(len(X), k)}
    if census:
        counts["violations"] = res.count
    return VerificationReport(
        f"{k}-general", res.witness is None,
        _rows(X.array[list(res.witness)]) if res.witness else None,
        counts, max(res.work, 1 if len(X) else 0), res.reduction,
        (time.perf_counter() - t0) * 1e3)


def is_rs_set(X: PointSet, r: int, s: int, *, census: bool = False, budget: int | None = None,
              reduction: str = "auto") -> VerificationReport:
    """(i) every s-flat holds at most r points of X, (ii) X spans, and
    (iii) some (s+1)-flat holds r+2 points of X."""
    n = X.ambient_dim
    if not 1 <= s < n or r < 1:
        raise ValueError(f"need 1 <= s < {n} and r >= 1")
    t0 = time.perf_counter()
    fix = _choose_reduction(X, reduction)
    F = X.F
    res_i = low_rank_search(X, r + 1, s + 1, fix_first=fix, census=census, budget=budget)
    full_rank = F.rank(X.array)
    ok_ii = full_rank == n + 1
    res_iii = low_rank_search(X, r + 2, s + 2, fix_first=fix, budget=budget,
                              chunk=max(1, len(X) // 8))
    ok_i, ok_iii = res_i.witness is None, res_iii.witness is not None
    counts = {"size": len(X), "rank": full_rank}
    if census:
        counts["violations_i"] = res_i.count
    details = {}
    if ok_iii:
        details["iii_witness"] = _rows(X.array[list(res_iii.witness)])
    return VerificationReport(
        f"rs({r},{s})", ok_i and ok_ii and ok_iii,
        _rows(X.array[list(res_i.witness)]) if res_i.witness else None,
        counts, res_i.work + res_iii.work + 1, res_i.reduction,
        (time.perf_counter() - t0) * 1e3,
        {"i": ok_i, "ii": ok_ii, "iii": ok_iii}, details)


# -- hyperplanes -----------------------------------------------------------------

def hyperplane_spectrum(X: PointSet, allowed=None, *, budget: int | None = None
                        ) -> VerificationReport:
    """Histogram of |H ∩ X| over every hyperplane H of the ambient space.

    With ``allowed`` the check fails on the first hyperplane whose
    intersection size is not listed (that covector is the witness)."""
    n, F = X.ambient_dim, X.F
    budget = default_budget() if budget is None else budget
    total = F.num_points(n)
    if total > budget:
        raise BudgetExceeded(f"PG({n},{X.q}) has {total} hyperplanes (budget {budget})")
    t0 = time.perf_counter()
    allowed = None if allowed is None else {int(a) for a in allowed}
    hist: dict[int, int] = {}
    witness = None
    for block in covectors(n, X.q):
        cnt = intersection_counts(X, block)
        vals, freq = np.unique(cnt, return_counts=True)
        for v, f in zip(vals.tolist(), freq.tolist()):
            hist[v] = hist.get(v, 0) + f
        if allowed is not None and witness is None:
            bad = np.flatnonzero(~np.isin(cnt, list(allowed)))
            if len(bad):
                witness = [[int(x) for x in block[bad[0]]]]
    counts = {"hyperplanes": total, "histogram": {str(k): hist[k] for k in sorted(hist)}}
    return VerificationReport("spectrum", witness is None, witness, counts, total, "none",
                              (time.perf_counter() - t0) * 1e3,
                              details={"witness_kind": "covector"} if witness else {})


def find_disjoint_hyperplane(X: PointSet, *, budget: int | None = None) -> Flat | None:
    """First hyperplane (in enumeration order) missing every point of X."""
    cov, _ = _disjoint_covector(X, budget)
    return None if cov is None else Flat.from_covector(cov, X.q)


def _disjoint_covector(X: PointSet, budget: int | None):
    n, F = X.ambient_dim, X.F
    budget = default_budget() if budget is None else budget
    if F.num_points(n) > budget:
        raise BudgetExceeded(f"PG({n},{X.q}) has {F.num_points(n)} hyperplanes")
    seen = 0
    for block in covectors(n, X.q):
        cnt = intersection_counts(X, block)
        hit = np.flatnonzero(cnt == 0)
        if len(hit):
            return block[hit[0]], seen + int(hit[0]) + 1
        seen += len(block)
    return None, seen


def affine_check(X: PointSet, *, budget: int | None = None) -> VerificationReport:
    """Report form of ``find_disjoint_hyperplane``: passes iff X is affine."""
    t0 = time.perf_counter()
    cov, seen = _disjoint_covector(X, budget)
    details = {} if cov is None else {"covector": [int(x) for x in cov]}
    return VerificationReport("affine", cov is not None, None, {"hyperplanes_tested": seen},
                              seen, "none", (time.perf_counter() - t0) * 1e3, details=details)


# -- groups ----------------------------------------------------------------------

def is_transitive(X: PointSet) -> VerificationReport:
    """Orbit of X[0] under the attached generators equals X."""
    if not X.generators:
        raise GeometryError("point set carries no group generators")
    t0 = time.perf_counter()
    F = X.F
    seen = {X.keys[0]}
    frontier = [X.keys[0]]
    escaped = None
    work = 0
    while frontier and escaped is None:
        pts = np.array(frontier, dtype=np.int64)
        nxt = []
        for g in X.generators:
            work += len(pts)
            for row in F.normalize(F.matmul(pts, g.T)):
                key = tuple(int(x) for x in row)
                if key not in X:
                    escaped = key
                    break
                if key not in seen:
                    seen.add(key)
                    nxt.append(key)
            if escaped:
                break
        frontier = nxt
    passed = escaped is None and len(seen) == len(X)
    witness = None
    if escaped is not None:
        witness = [list(escaped)]
    elif not passed:
        witness = [list(next(k for k in X.keys if k not in seen))]
    return VerificationReport("transitive", passed, witness,
                              {"orbit_size": len(seen), "size": len(X)}, work, "none",
                              (time.perf_counter() - t0) * 1e3)


def projective_order(g: np.ndarray, q: int, limit: int = 10 ** 7) -> int:
    """Least i >= 1 with g^i a scalar matrix."""
    F = gfq(q)
    g = np.asarray(g, dtype=np.int64)
    n = len(g)
    M = g.copy()
    for i in range(1, limit + 1):
        d = M[0, 0]
        if d != 0 and np.array_equal(M, np.diag(np.full(n, d))):
            return i
        M = F.matmul(M, g)
    raise ValueError("order exceeds limit")


def is_semiregular(X: PointSet, g: np.ndarray | None = None) -> VerificationReport:
    """Every point of X has trivial stabiliser in the cyclic group <g>."""
    t0 = time.perf_counter()
    if g is None:
        if not X.generators or len(X.generators) != 1:
            raise GeometryError("semiregularity check needs one cyclic generator")
        g = X.generators[0]
    F = X.F
    order = projective_order(g, X.q)
    remaining = set(range(len(X)))
    sizes = []
    witness = None
    while remaining:
        i = min(remaining)
        v = X.array[i]
        size = 0
        while True:
            size += 1
            remaining.discard(X.index(tuple(int(x) for x in v)))
            v = F.normalize(F.matmul(g, v))
            if tuple(int(x) for x in v) == X.keys[i]:
                break
        sizes.append(size)
        if size != order and witness is None:
            witness = [list(X.keys[i])]
    return VerificationReport("semiregular", witness is None, witness,
                              {"group_order": order, "orbits": len(sizes),
                               "orbit_sizes": sorted(set(sizes))},
                              len(X), "none", (time.perf_counter() - t0) * 1e3)


# -- completeness ----------------------------------------------------------------

def completeness_check(X: PointSet, r: int, s: int, *, budget: int | None = None
                       ) -> VerificationReport:
    """Points P outside X such that X + P still satisfies condition (i).

    Assumes X itself satisfies (i), so only subsets through P are tested.
    The report passes iff the list is empty (X is complete)."""
    n, F = X.ambient_dim, X.F
    budget = default_budget() if budget is None else budget
    per_point = math.comb(len(X), r)
    total = F.num_points(n) * per_point
    if total > budget:
        raise BudgetExceeded(f"{total} subsets exceed the budget of {budget}")
    t0 = time.perf_counter()
    extendable = []
    work = 0
    for block in F.iter_points(n):
        for P in block:
            key = tuple(int(x) for x in P)
            if key in X:
                continue
            V = np.vstack([P[None, :], X.array])
            res = low_rank_search(V, r + 1, s + 1, q=X.q, fix_first=True, budget=budget)
            work += res.work
            if res.witness is None:
                extendable.append(list(key))
    return VerificationReport("complete", not extendable, None,
                              {"candidates": F.num_points(n) - len(X),
                               "extendable": len(extendable)},
                              max(work, 1), "none", (time.perf_counter() - t0) * 1e3,
                              details={"extendable": extendable})


# -- lemmas on the ovoid ---------------------------------------------------------

def _reduce_modulo(F: GFq, R: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Rows of R modulo the row space of B."""
    E, piv = F.rref(B)
    if not piv:
        return R.copy()
    E = E[:len(piv)]
    return F.sub[R, F.matmul(R[:, piv], E)]


def enumerate_low_rank(F: GFq, V: np.ndarray, k: int, max_rank: int,
                       prefix: tuple[int, ...] = (), cap: int = 10 ** 7) -> tuple[list, int]:
    """All k-subsets of rows of V containing ``prefix`` with rank <= max_rank.

    Returns (sorted list of index tuples, number of row reductions).  The last
    two choices are matched by normalised reduced rows, as in the kernel."""
    N = len(V)
    pool = np.array([i for i in range(N) if i not in prefix], dtype=np.int64)
    R = _reduce_modulo(F, V[pool], V[list(prefix)]) if prefix else V[pool].copy()
    rk0 = F.rank(V[list(prefix)]) if prefix else 0
    out: list[tuple[int, ...]] = []
    work = [0]

    def emit(sub):
        out.append(tuple(sorted(prefix + sub)))
        if len(out) > cap:
            raise BudgetExceeded("too many low-rank subsets to list")

    def walk(R, idx, chosen, rk, rem):
        work[0] += 1
        if rk > max_rank or len(idx) < rem:
            return
        if rk + rem <= max_rank:
            for c in itertools.combinations(idx.tolist(), rem):
                emit(chosen + c)
            return
        if rem <= 2:
            codes = F.codes(F.normalize(R))
            zero = ~R.any(axis=1)
            ids = idx.tolist()
            if rem == 1:
                for j in np.flatnonzero(zero):
                    emit(chosen + (ids[j],))
                return
            for a in range(len(ids)):
                for b in range(a + 1, len(ids)):
                    both = zero[a] and zero[b]
                    if both or (rk < max_rank and (zero[a] or zero[b] or codes[a] == codes[b])):
                        emit(chosen + (ids[a], ids[b]))
            return
        for a in range(len(idx)):
            row = R[a]
            rest = R[a + 1:]
            if row.any():
                rest = _reduce_modulo(F, rest, row[None, :])
                walk(rest, idx[a + 1:], chosen + (int(idx[a]),), rk + 1, rem - 1)
            else:
                walk(rest, idx[a + 1:], chosen + (int(idx[a]),), rk, rem - 1)

    walk(R, pool, (), rk0, k - len(prefix))
    return sorted(out), work[0]


def _param(ctx, t):
    return INFINITY if t is None else FieldElement(ctx, t)


def _subline5(ctx, q, ts) -> bool:
    """Five distinct parameters lie on a common PG(1, q) subline."""
    P = [_param(ctx, t) for t in ts]
    return all(in_q_subline(P[0], P[1], P[2], P[i], q) for i in (3, 4))


BASE = "fix_three_points"


def _ovoid_base(q: int, modulus):
    O = desarguesian_ovoid(q, modulus, with_group=False)
    Q = q ** 3
    base = (0, Q, 1)   # parameters 0, infinity, 1
    return O, base


def solid_cubic_lemma(q: int, modulus=None, *, reduction: str = BASE) -> VerificationReport:
    """Five ovoid points of rank <= 4 have parameters on a q-subline, and
    their solid meets the ovoid in exactly q + 1 points.

    The default scan fixes the parameters 0, infinity, 1 (sound because
    PGL(2, q^3) is 3-transitive on the ovoid); ``reduction="none"`` scans all
    5-subsets instead.  For q < 4 the conclusion is recorded but not asserted.
    """
    if reduction not in (BASE, "none"):
        raise ValueError("reduction must be 'fix_three_points' or 'none'")
    t0 = time.perf_counter()
    O, base = _ovoid_base(q, modulus)
    F, ctx, params = O.F, O.meta["model"].ctx, O.meta["params"]
    N = len(O)
    prefix = base if reduction == BASE else ()
    hits, work = enumerate_low_rank(F, O.array, 5, 4, prefix)
    bad = None
    for sub in hits:
        ts = [params[i] for i in sub]
        solid = Flat.span(O.array[list(sub)], q)
        on = int(solid.contains(O).sum())
        work += 1
        if not (_subline5(ctx, q, ts) and on == q + 1 and solid.dim == 3):
            bad = sub
            break
    asserted = q >= 4
    reduced = math.comb(N - 3, 2) if reduction == BASE else math.comb(N, 5)
    return VerificationReport(
        "cubic-lemma", bad is None or not asserted,
        _rows(O.array[list(bad)]) if bad is not None else None,
        {"reduced_cases": reduced, "hypothesis_cases": len(hits), "violations": int(bad is not None)},
        work, reduction, (time.perf_counter() - t0) * 1e3,
        {"asserted": asserted})


def seven_point_lemma(q: int, modulus=None) -> VerificationReport:
    """Among seven ovoid points of rank <= 5, some four have parameters on a
    common q-subline.  Scans 7-subsets through the parameters 0, infinity, 1."""
    t0 = time.perf_counter()
    O, base = _ovoid_base(q, modulus)
    F, ctx, params = O.F, O.meta["model"].ctx, O.meta["params"]
    hits, work = enumerate_low_rank(F, O.array, 7, 5, base)
    bad = None
    for sub in hits:
        P = [_param(ctx, params[i]) for i in sub]
        work += 1
        if not any(in_q_subline(*four, q) for four in itertools.combinations(P, 4)):
            bad = sub
            break
    return VerificationReport(
        "seven-lemma", bad is None,
        _rows(O.array[list(bad)]) if bad is not None else None,
        {"reduced_cases": math.comb(len(O) - 3, 4), "hypothesis_cases": len(hits),
         "violations": int(bad is not None)},
        work, BASE, (time.perf_counter() - t0) * 1e3)
