"""Compiled search kernels over GF(q) (tables passed in as int64 arrays).

``low_rank_scan`` looks for k-subsets of the rows of V whose rank is at most
T.  The search walks subsets in lexicographic order, keeping every remaining
row reduced modulo the span of the chosen rows.  A subtree is closed as soon
as its rank decides it, and the last two choices are settled together by
grouping the reduced rows by their normalised form.  Branches (the first
free choice) run under ``prange``; each keeps its own lexicographically
first witness, so merging by branch index is deterministic.
"""

from __future__ import annotations

import numpy as np
from numba import config, njit, prange

# skip probing an outdated TBB install
config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


@njit(cache=True)
def _reduce(R, d, j, lo, N, L, add, mul, neg, inv, rk):
    piv = -1
    for x in range(L):
        if R[d, j, x] != 0:
            piv = x
            break
    if piv < 0:
        for l in range(lo, N):
            for x in range(L):
                R[d + 1, l, x] = R[d, l, x]
        rk[d + 1] = rk[d]
        return
    c = inv[R[d, j, piv]]
    for l in range(lo, N):
        f = mul[R[d, l, piv], c]
        if f == 0:
            for x in range(L):
                R[d + 1, l, x] = R[d, l, x]
        else:
            nf = neg[f]
            for x in range(L):
                R[d + 1, l, x] = add[R[d, l, x], mul[nf, R[d, j, x]]]
    rk[d + 1] = rk[d] + 1


@njit(cache=True)
def _row_code(R, d, l, L, q, mul, inv):
    lead = 0
    for x in range(L):
        if R[d, l, x] != 0:
            lead = R[d, l, x]
            break
    if lead == 0:
        return -1
    s = inv[lead]
    code = 0
    for x in range(L):
        code = code * q + mul[s, R[d, l, x]]
    return code


@njit(cache=True)
def _evaluate(R, rk, d, lo, N, L, k, T, q, mul, inv, binom, chosen, wit, want_witness, codes):
    """Settle the node with d chosen rows if possible.

    Returns (terminal, low_count, covered, witness_written)."""
    rem = k - d
    c = N - lo
    if rem == 0:
        if rk[d] <= T:
            if want_witness:
                for i in range(d):
                    wit[i] = chosen[i]
            return True, 1, 1, want_witness
        return True, 0, 1, False
    if c < rem:
        return True, 0, 0, False
    covered = binom[c, rem]
    if rk[d] > T:
        return True, 0, covered, False
    if rk[d] + rem <= T:
        if want_witness:
            for i in range(d):
                wit[i] = chosen[i]
            for i in range(rem):
                wit[d + i] = lo + i
        return True, covered, covered, want_witness
    if rem > 2:
        return False, 0, 0, False
    # rem in (1, 2): classify candidates by reduced form
    zeros = 0
    for l in range(lo, N):
        codes[l] = _row_code(R, d, l, L, q, mul, inv)
        if codes[l] < 0:
            zeros += 1
    if rem == 1:
        # rk[d] == T here: low iff the candidate is already in the span
        if zeros > 0 and want_witness:
            for i in range(d):
                wit[i] = chosen[i]
            for l in range(lo, N):
                if codes[l] < 0:
                    wit[d] = l
                    break
        return True, zeros, covered, zeros > 0 and want_witness
    if rk[d] == T:
        low = zeros * (zeros - 1) // 2
        if low > 0 and want_witness:
            for i in range(d):
                wit[i] = chosen[i]
            n_found = 0
            for l in range(lo, N):
                if codes[l] < 0:
                    wit[d + n_found] = l
                    n_found += 1
                    if n_found == 2:
                        break
        return True, low, covered, low > 0 and want_witness
    # rk[d] == T - 1: low iff the two reduced rows span at most a point
    nz = c - zeros
    low = zeros * (zeros - 1) // 2 + zeros * nz
    if nz > 1:
        vals = np.empty(nz, dtype=np.int64)
        t = 0
        for l in range(lo, N):
            if codes[l] >= 0:
                vals[t] = codes[l]
                t += 1
        vals.sort()
        run = 1
        for i in range(1, nz):
            if vals[i] == vals[i - 1]:
                run += 1
            else:
                low += run * (run - 1) // 2
                run = 1
        low += run * (run - 1) // 2
    if low > 0 and want_witness:
        for i in range(d):
            wit[i] = chosen[i]
        done = False
        for j in range(lo, N - 1):
            for l in range(j + 1, N):
                if codes[j] < 0 or codes[l] < 0 or codes[j] == codes[l]:
                    wit[d] = j
                    wit[d + 1] = l
                    done = True
                    break
            if done:
                break
    return True, low, covered, low > 0 and want_witness


@njit(cache=True)
def _run_branch(V, k, T, fixed, first, stop_first, q, add, mul, neg, inv, binom, wit):
    N, L = V.shape
    R = np.empty((k + 1, N, L), dtype=np.int64)
    rk = np.zeros(k + 1, dtype=np.int64)
    chosen = np.full(k, -1, dtype=np.int64)
    nxt = np.zeros(k + 1, dtype=np.int64)
    codes = np.empty(N, dtype=np.int64)
    for l in range(N):
        for x in range(L):
            R[0, l, x] = V[l, x]
    rk[0] = 0
    count = 0
    work = 0
    found = False
    d = 0
    if fixed:
        chosen[0] = 0
        # rows 1.. are reduced modulo the base row
        _reduce(R, 0, 0, 1, N, L, add, mul, neg, inv, rk)
        d = 1
    chosen[d] = first
    _reduce(R, d, first, first + 1, N, L, add, mul, neg, inv, rk)
    d += 1
    d0 = d
    term, low, cov, w = _evaluate(R, rk, d, first + 1, N, L, k, T, q, mul, inv, binom,
                                  chosen, wit, not found, codes)
    if term:
        return low, cov, w
    nxt[d] = first + 1
    while d >= d0:
        rem = k - d
        j = nxt[d]
        if j > N - rem or (stop_first and found):
            d -= 1
            continue
        nxt[d] = j + 1
        chosen[d] = j
        _reduce(R, d, j, j + 1, N, L, add, mul, neg, inv, rk)
        d += 1
        term, low, cov, w = _evaluate(R, rk, d, j + 1, N, L, k, T, q, mul, inv, binom,
                                      chosen, wit, not found, codes)
        if term:
            count += low
            work += cov
            if w:
                found = True
            d -= 1
        else:
            nxt[d] = j + 1
    return count, work, found


@njit(parallel=True, cache=True)
def low_rank_scan(V, k, T, fixed, stop_first, b_lo, b_hi, q, add, mul, neg, inv, binom):
    """Count k-subsets of rows of V with rank <= T (containing row 0 if fixed)
    whose first free index lies in [b_lo, b_hi).

    Returns per-branch arrays (counts, work, found, witnesses)."""
    nb = b_hi - b_lo
    counts = np.zeros(nb, dtype=np.int64)
    works = np.zeros(nb, dtype=np.int64)
    found = np.zeros(nb, dtype=np.bool_)
    wits = np.full((nb, k), -1, dtype=np.int64)
    best = np.full(1, nb, dtype=np.int64)
    for b in prange(nb):
        # racy read; it can only cost extra work, never change the merge
        if stop_first and best[0] < b:
            continue
        c, w, f = _run_branch(V, k, T, fixed, b_lo + b, stop_first, q, add, mul, neg, inv,
                              binom, wits[b])
        counts[b] = c
        works[b] = w
        found[b] = f
        if f and b < best[0]:
            best[0] = b
    return counts, works, found, wits


@njit(cache=True)
def first_dependent_subset(C, d, add, mul, neg, inv, out):
    """Find the lexicographically first d-subset of rows of C that is linearly
    dependent while all its proper prefixes are independent.  Plain
    incremental echelon form; returns the number of rows tried."""
    N, L = C.shape
    basis = np.zeros((d, L), dtype=np.int64)
    pivots = np.zeros(d, dtype=np.int64)
    chosen = np.zeros(d, dtype=np.int64)
    nxt = np.zeros(d + 1, dtype=np.int64)
    vec = np.zeros(L, dtype=np.int64)
    tried = 0
    t = 0
    nxt[0] = 0
    while t >= 0:
        j = nxt[t]
        if j >= N:
            t -= 1
            continue
        nxt[t] = j + 1
        tried += 1
        for x in range(L):
            vec[x] = C[j, x]
        for i in range(t):
            f = vec[pivots[i]]
            if f != 0:
                nf = neg[f]
                for x in range(L):
                    vec[x] = add[vec[x], mul[nf, basis[i, x]]]
        piv = -1
        for x in range(L):
            if vec[x] != 0:
                piv = x
                break
        chosen[t] = j
        if piv < 0:
            if t + 1 == d:
                for i in range(d):
                    out[i] = chosen[i]
                return tried
            continue
        if t + 1 == d:
            continue
        s = inv[vec[piv]]
        for x in range(L):
            basis[t, x] = mul[s, vec[x]]
        pivots[t] = piv
        t += 1
        nxt[t] = j + 1
    return tried
