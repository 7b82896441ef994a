"""numba @njit implementations of the hot kernels.

Contracts and outputs match :mod:`expandlab.kernels.numpy_impl` exactly;
tests assert agreement. Matmuls are hand-rolled loops because BLAS-backed
``@`` does not cover int64 inside nopython mode.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _modinv(x, p):
    # Fermat inverse x**(p-2) mod p by square and multiply
    result = 1
    base = x % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


@njit(cache=True)
def gf_rref(a, p):
    m, k = a.shape
    r_mat = np.empty((m, k), dtype=np.int64)
    for i in range(m):
        for j in range(k):
            r_mat[i, j] = a[i, j] % p
    pivots = np.empty(min(m, k), dtype=np.int64)
    rank = 0
    for col in range(k):
        piv = -1
        for row in range(rank, m):
            if r_mat[row, col] != 0:
                piv = row
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(k):
                tmp = r_mat[piv, j]
                r_mat[piv, j] = r_mat[rank, j]
                r_mat[rank, j] = tmp
        inv = _modinv(r_mat[rank, col], p)
        for j in range(k):
            r_mat[rank, j] = r_mat[rank, j] * inv % p
        for row in range(m):
            if row != rank and r_mat[row, col] != 0:
                f = r_mat[row, col]
                for j in range(k):
                    r_mat[row, j] = (r_mat[row, j] - f * r_mat[rank, j]) % p
        pivots[rank] = col
        rank += 1
        if rank == m:
            break
    return rank, r_mat, pivots[:rank]


@njit(cache=True)
def gf_rank(a, p):
    rank, _, _ = gf_rref(a, p)
    return rank


@njit(cache=True)
def gf_rcef(a, p):
    rank, r_mat, _ = gf_rref(a.T.copy(), p)
    n = a.shape[0]
    out = np.empty((n, rank), dtype=np.int64)
    for i in range(n):
        for j in range(rank):
            out[i, j] = r_mat[j, i]
    return out


@njit(cache=True)
def gf_nullspace(a, p):
    m, n = a.shape
    rank, r_mat, pivots = gf_rref(a, p)
    is_piv = np.zeros(n, dtype=np.bool_)
    for i in range(rank):
        is_piv[pivots[i]] = True
    k = n - rank
    basis = np.zeros((n, k), dtype=np.int64)
    j = 0
    for fc in range(n):
        if is_piv[fc]:
            continue
        basis[fc, j] = 1
        for i in range(rank):
            basis[pivots[i], j] = (-r_mat[i, fc]) % p
        j += 1
    if k == 0:
        return basis
    return gf_rcef(basis, p)


@njit(cache=True)
def _gf_ab(a, b, p):
    m, k = a.shape
    n = b.shape[1]
    out = np.zeros((m, n), dtype=np.int64)
    for i in range(m):
        for t in range(k):
            ait = a[i, t]
            if ait == 0:
                continue
            for j in range(n):
                out[i, j] += ait * b[t, j]
        for j in range(n):
            out[i, j] %= p
    return out


@njit(cache=True)
def gf_subspace_scores(mats, tmat, p):
    d, n, _ = mats.shape
    r = tmat.shape[1]
    ann = gf_nullspace(tmat.T.copy(), p)
    rmat = ann.T.copy()
    stack = np.empty((n, (d + 1) * r), dtype=np.int64)
    for i in range(n):
        for j in range(r):
            stack[i, j] = tmat[i, j]
    rank_sum = 0
    for i in range(d):
        bt = _gf_ab(mats[i], tmat, p)
        for a_ in range(n):
            for b_ in range(r):
                stack[a_, (i + 1) * r + b_] = bt[a_, b_]
        rank_sum += gf_rank(_gf_ab(rmat, bt, p), p)
    return rank_sum, gf_rank(stack, p)


@njit(cache=True)
def gf_block_scores(mats, block, p):
    m = block.shape[0]
    sums = np.empty(m, dtype=np.int64)
    spans = np.empty(m, dtype=np.int64)
    for idx in range(m):
        s, sp = gf_subspace_scores(mats, block[idx], p)
        sums[idx] = s
        spans[idx] = sp
    return sums, spans


@njit(cache=True)
def _mask_lex_less(a, b):
    while a != 0 and b != 0:
        la = a & (-a)
        lb = b & (-b)
        if la != lb:
            return la < lb
        a ^= la
        b ^= lb
    return a == 0 and b != 0


@njit(cache=True)
def graph_best_subset(n, edge_u, edge_v, mode):
    # Gray-code walk over all subsets with O(deg) incremental updates of
    # both boundary counters; exact integer cross-multiplied comparisons.
    m = edge_u.shape[0]
    deg = np.zeros(n, dtype=np.int64)
    for e in range(m):
        deg[edge_u[e]] += 1
        deg[edge_v[e]] += 1
    start = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        start[v + 1] = start[v] + deg[v]
    adj = np.empty(start[n], dtype=np.int64)
    fill = start[:n].copy()
    for e in range(m):
        u = edge_u[e]
        v = edge_v[e]
        adj[fill[u]] = v
        fill[u] += 1
        adj[fill[v]] = u
        fill[v] += 1
    in_w = np.zeros(n, dtype=np.bool_)
    cnt = np.zeros(n, dtype=np.int64)
    cut = 0
    out = 0
    size = 0
    half = n // 2
    best_num = -1
    best_den = 1
    best_mask = 0
    total = 1 << n
    for i in range(1, total):
        b = 0
        ii = i
        while ii & 1 == 0:
            b += 1
            ii >>= 1
        v = b
        if in_w[v]:
            for t in range(start[v], start[v + 1]):
                u = adj[t]
                cnt[u] -= 1
                if in_w[u]:
                    cut += 1
                else:
                    cut -= 1
                    if cnt[u] == 0:
                        out -= 1
            in_w[v] = False
            size -= 1
            if cnt[v] > 0:
                out += 1
        else:
            if cnt[v] > 0:
                out -= 1
            for t in range(start[v], start[v + 1]):
                u = adj[t]
                cnt[u] += 1
                if in_w[u]:
                    cut -= 1
                else:
                    cut += 1
                    if cnt[u] == 1:
                        out += 1
            in_w[v] = True
            size += 1
        if size < 1 or size > half:
            continue
        num = cut if mode == 0 else out
        den = size
        if best_num < 0 or num * best_den < best_num * den:
            best_num = num
            best_den = den
            best_mask = i ^ (i >> 1)
        elif num * best_den == best_num * den:
            mask = i ^ (i >> 1)
            if _mask_lex_less(mask, best_mask):
                best_num = num
                best_den = den
                best_mask = mask
    return best_num, best_den, best_mask
