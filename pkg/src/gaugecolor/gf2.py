"""Dense GF(2) linear algebra on bit-packed rows.

Rows are packed 64 columns per uint64 word, so elimination on the box-sized
systems the decoder produces (and on whole-code rank checks at small L) stays
a handful of vectorized XORs.
"""

from __future__ import annotations

import numpy as np

__all__ = ["pack_rows", "rank", "solve", "solve_with_kernel", "in_rowspan",
           "reduce_weight"]


def pack_rows(rows: np.ndarray) -> np.ndarray:
    """Pack a (m, n) 0/1 array into (m, ceil(n/64)) uint64 words."""
    rows = np.ascontiguousarray(rows, dtype=np.uint8)
    m, n = rows.shape
    words = (n + 63) // 64
    padded = np.zeros((m, words * 64), dtype=np.uint8)
    padded[:, :n] = rows & 1
    packed8 = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed8).view(np.uint64).reshape(m, words)


def _eliminate(work: np.ndarray, n_cols: int):
    """In-place Gauss-Jordan over the first n_cols columns.

    Returns (pivot_rows, pivot_cols).
    """
    m = work.shape[0]
    pivot_rows: list[int] = []
    pivot_cols: list[int] = []
    r = 0
    for col in range(n_cols):
        if r >= m:
            break
        w, b = col >> 6, np.uint64(col & 63)
        colbits = (work[r:, w] >> b) & np.uint64(1)
        hits = np.nonzero(colbits)[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            work[[r, p]] = work[[p, r]]
        mask = (work[:, w] >> b) & np.uint64(1)
        mask[r] = 0
        rows = np.nonzero(mask)[0]
        if rows.size:
            work[rows] ^= work[r]
        pivot_rows.append(r)
        pivot_cols.append(col)
        r += 1
    return pivot_rows, pivot_cols


def rank(rows: np.ndarray, n_cols: int) -> int:
    """GF(2) rank of a 0/1 matrix (unpacked input)."""
    if len(rows) == 0:
        return 0
    work = pack_rows(rows)
    pr, _ = _eliminate(work, n_cols)
    return len(pr)


def in_rowspan(vec: np.ndarray, rows: np.ndarray, n_cols: int) -> bool:
    """Whether vec lies in the GF(2) row span of rows."""
    base = rank(rows, n_cols)
    stacked = np.vstack([rows, vec[None, :]])
    return rank(stacked, n_cols) == base


def solve(A: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution x of A x = b over GF(2), or None if inconsistent.

    A is a (m, n) 0/1 array, b a length-m 0/1 vector.  Free variables are
    set to zero.
    """
    x, _ = solve_with_kernel(A, b, kernel_limit=0)
    return x


def solve_with_kernel(A: np.ndarray, b: np.ndarray, kernel_limit: int = 512):
    """Solve A x = b and also return a (possibly truncated) kernel basis.

    Returns (x, kernel) where kernel is a (k, n) 0/1 array of independent
    null-space vectors, at most kernel_limit of them, or (None, None) when
    the system is inconsistent.
    """
    A = np.ascontiguousarray(A, dtype=np.uint8)
    m, n = A.shape
    aug = np.zeros((m, n + 1), dtype=np.uint8)
    aug[:, :n] = A & 1
    aug[:, n] = np.asarray(b, dtype=np.uint8) & 1
    work = pack_rows(aug)
    pivot_rows, pivot_cols = _eliminate(work, n)
    rw, rb = n >> 6, np.uint64(n & 63)
    rhs = (work[:, rw] >> rb) & np.uint64(1)
    lead = np.zeros(m, dtype=bool)
    lead[: len(pivot_rows)] = True
    if np.any(rhs[~lead]):
        return None, None
    x = np.zeros(n, dtype=np.uint8)
    for r, c in zip(pivot_rows, pivot_cols):
        x[c] = int(rhs[r])
    pivot_set = set(pivot_cols)
    free_cols = np.array(
        [c for c in range(n) if c not in pivot_set][:max(0, kernel_limit)],
        dtype=np.int64,
    )
    kernel = np.zeros((len(free_cols), n), dtype=np.uint8)
    if len(free_cols) and pivot_rows:
        kernel[np.arange(len(free_cols)), free_cols] = 1
        rows = work[np.asarray(pivot_rows)]                  # (np, words)
        bits = (rows[:, free_cols >> 6] >> (free_cols & 63).astype(np.uint64)
                ) & np.uint64(1)                             # (np, nfree)
        kernel[:, np.asarray(pivot_cols)] = bits.T.astype(np.uint8)
    elif len(free_cols):
        kernel[np.arange(len(free_cols)), free_cols] = 1
    return x, kernel


def reduce_weight(x: np.ndarray, kernel: np.ndarray,
                  max_rounds: int = 64) -> np.ndarray:
    """Greedily lower the Hamming weight of x by XORing null-space vectors."""
    if kernel is None or len(kernel) == 0 or not x.any():
        return x
    n = len(x)
    kx = pack_rows(kernel)
    cur = pack_rows(x[None, :])[0]
    weight = int(np.bitwise_count(cur).sum())
    for _ in range(max_rounds):
        cand = kx ^ cur[None, :]
        weights = np.bitwise_count(cand).sum(axis=1)
        best = int(np.argmin(weights))
        if int(weights[best]) >= weight:
            break
        cur = cand[best]
        weight = int(weights[best])
    out = np.zeros(n, dtype=np.uint8)
    idx = np.nonzero(cur)[0]
    for w in idx:
        word = int(cur[w])
        base = int(w) << 6
        while word:
            low = word & -word
            out[base + low.bit_length() - 1] = 1
            word ^= low
    return out
