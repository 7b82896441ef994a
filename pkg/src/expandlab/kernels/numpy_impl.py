"""Pure-numpy reference implementations of the hot kernels.

Same contracts and outputs as :mod:`expandlab.kernels.numba_impl`. Selected
when numba is unavailable or EXPANDLAB_BACKEND=numpy.

Prime-field arrays are int64 with entries in [0, p). Intermediate products
stay below int64 overflow as long as n * p**2 < 2**63, far beyond desk scale.
"""

from __future__ import annotations

import math

import numpy as np


def _modinv(x: int, p: int) -> int:
    return pow(int(x), -1, p)


def gf_rref(a: np.ndarray, p: int):
    """Reduced row echelon form mod p.

    Returns (rank, rref matrix, pivot column indices).
    """
    r_mat = np.mod(np.asarray(a, dtype=np.int64), p)
    m, k = r_mat.shape
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
            r_mat[[piv, rank]] = r_mat[[rank, piv]]
        r_mat[rank] = r_mat[rank] * _modinv(r_mat[rank, col], p) % p
        factor = r_mat[:, col].copy()
        factor[rank] = 0
        r_mat = (r_mat - factor[:, None] * r_mat[rank][None, :]) % p
        pivots[rank] = col
        rank += 1
        if rank == m:
            break
    return rank, r_mat, pivots[:rank]


def gf_rank(a: np.ndarray, p: int) -> int:
    return gf_rref(a, p)[0]


def gf_rcef(a: np.ndarray, p: int) -> np.ndarray:
    """Canonical basis of the column span of ``a``: reduced column echelon form."""
    a = np.mod(np.asarray(a, dtype=np.int64), p)
    rank, r_mat, _ = gf_rref(a.T.copy(), p)
    return r_mat[:rank].T.copy()


def gf_nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Canonical (column-echelon) basis of the right kernel {x : a x = 0 mod p}."""
    a = np.mod(np.asarray(a, dtype=np.int64), p)
    m, n = a.shape
    rank, r_mat, pivots = gf_rref(a, p)
    is_piv = np.zeros(n, dtype=bool)
    is_piv[pivots] = True
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


def gf_subspace_scores(mats: np.ndarray, tmat: np.ndarray, p: int):
    """Scores of the subspace V = col(tmat) under the tuple ``mats``.

    Returns (rank_sum, span_rank) where rank_sum is the sum over i of
    rank(R B_i T) with R a basis of the dot-product annihilator of V laid
    out as rows, and span_rank = rank([T | B_1 T | ... | B_d T]).
    """
    d, n, _ = mats.shape
    r = tmat.shape[1]
    ann = gf_nullspace(tmat.T.copy(), p)
    rmat = ann.T.copy()
    stack = np.empty((n, (d + 1) * r), dtype=np.int64)
    stack[:, :r] = tmat
    rank_sum = 0
    for i in range(d):
        bt = mats[i] @ tmat % p
        stack[:, (i + 1) * r : (i + 2) * r] = bt
        rank_sum += gf_rank(rmat @ bt % p, p)
    return rank_sum, gf_rank(stack, p)


def gf_block_scores(mats: np.ndarray, block: np.ndarray, p: int):
    """gf_subspace_scores applied to every basis in ``block`` (m, n, r)."""
    m = block.shape[0]
    sums = np.empty(m, dtype=np.int64)
    spans = np.empty(m, dtype=np.int64)
    for idx in range(m):
        s, sp = gf_subspace_scores(mats, block[idx], p)
        sums[idx] = s
        spans[idx] = sp
    return sums, spans


def _mask_lex_less(a: int, b: int) -> bool:
    # lexicographic order on the sorted vertex tuples the masks encode
    while a != 0 and b != 0:
        la = a & (-a)
        lb = b & (-b)
        if la != lb:
            return la < lb
        a ^= la
        b ^= lb
    return a == 0 and b != 0


def graph_best_subset(n: int, edge_u: np.ndarray, edge_v: np.ndarray, mode: int):
    """Exact minimizer of num/|W| over vertex sets 1 <= |W| <= n/2.

    mode 0: num = crossing edges |boundary(W)|; mode 1: num = outer vertex
    boundary |out(W)|. Returns (num, den, mask) for the minimizing W, ties
    broken toward the lexicographically smallest vertex set. Comparison is
    exact: values num * (L / |W|) with L = lcm(1..n/2) are integers.
    """
    half = n // 2
    scale = math.lcm(*range(1, half + 1)) if half >= 1 else 1
    edge_u = np.asarray(edge_u, dtype=np.int64)
    edge_v = np.asarray(edge_v, dtype=np.int64)
    adj = np.zeros((n, n), dtype=np.int64)
    adj[edge_u, edge_v] = 1
    adj[edge_v, edge_u] = 1
    sentinel = np.iinfo(np.int64).max
    best_key = sentinel
    best_num = -1
    best_den = 1
    best_mask = 0
    chunk = 1 << 16
    for lo in range(0, 1 << n, chunk):
        masks = np.arange(lo, min(lo + chunk, 1 << n), dtype=np.int64)
        bits = (masks[:, None] >> np.arange(n, dtype=np.int64)) & 1
        sizes = bits.sum(axis=1)
        valid = (sizes >= 1) & (sizes <= half)
        if not valid.any():
            continue
        if mode == 0:
            num = (bits[:, edge_u] != bits[:, edge_v]).sum(axis=1)
        else:
            cnts = bits @ adj
            num = ((bits == 0) & (cnts > 0)).sum(axis=1)
        keys = num * (scale // np.maximum(sizes, 1))
        keys[~valid] = sentinel
        kmin = int(keys.min())
        if kmin > best_key:
            continue
        for idx in np.flatnonzero(keys == kmin):
            mask = int(masks[idx])
            if kmin < best_key or _mask_lex_less(mask, best_mask):
                best_key = kmin
                best_num = int(num[idx])
                best_den = int(sizes[idx])
                best_mask = mask
    return best_num, best_den, best_mask
