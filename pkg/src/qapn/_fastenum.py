"""Compiled twin of the exhaustive enumeration in search.py (n <= 4 only).

The backtracking tree at n = 4 has billions of nodes, far beyond the
pure-Python walker, so full-tree walks run as numba kernels over flat
arrays.  The walk is split into the 2^n top-level branches fixing
F(1) = y1, which keeps single runs resumable and lets tests exploit that
the subtrees for y1 != 0 are pairwise isomorphic (post-composition with
an invertible linear map permutes them while preserving both pruning
conditions).

Completed tables come back packed into uint64 words (n bits per position
1..2^n-1; position 0 is pinned to 0).  The pruned mode evaluates the
incremental conditions check-first (same verdicts, no failed-add
churn); the naive mode ignores all carried state and re-derives each
verdict from the raw partial table, so agreement between modes
exercises the bookkeeping end to end.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from numba import njit

from .search import superset_lists


def _superset_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    lists = superset_lists(n)
    off = np.zeros(len(lists) + 1, dtype=np.int64)
    for i, sub in enumerate(lists):
        off[i + 1] = off[i] + len(sub)
    flat = np.empty(max(off[-1], 1), dtype=np.int64)
    pos = 0
    for sub in lists:
        for u in sub:
            flat[pos] = u
            pos += 1
    return flat, off


@njit(cache=True, nogil=True)
def _branch_kernel(n, prefix, sup_flat, sup_off, need, naive):  # pragma: no cover - compiled
    size = 1 << n
    full = size * size
    sbox = np.full(size, -1, np.int64)
    ddt = np.zeros(full, np.int64)
    ctr = np.zeros(size, np.int64)
    sums = np.zeros(size, np.int64)
    cubes = np.empty(size, np.int64)
    ncubes = 0
    for u in range(size):
        if need[u] >= 8:  # weight >= 3
            cubes[ncubes] = u
            ncubes += 1

    out = np.empty(1 << 16, np.uint64)
    found = 0
    nodes = 0

    sbox[0] = 0
    # register the pinned point: no pairs yet, but every cube contains 0
    for k in range(sup_off[0], sup_off[1]):
        ctr[sup_flat[k]] += 1  # sums[u] ^= 0 is a no-op
    root = 1 + prefix.shape[0]
    for x in range(1, root):
        sbox[x] = prefix[x - 1]
        if _check(n, x, sbox, ddt, ctr, sums, sup_flat, sup_off, need) == 0:
            return out[:0], -1  # prefix violates the pruning conditions
        _apply(n, x, sbox, ddt, ctr, sums, sup_flat, sup_off)

    if root == size:  # fully specified by the prefix
        packed = np.uint64(0)
        for i in range(1, size):
            packed |= np.uint64(sbox[i]) << np.uint64(n * (i - 1))
        out[0] = packed
        return out[:1], 0

    yarr = np.zeros(size + 1, np.int64)
    x = root
    yarr[root] = 0
    while True:
        if x == size:
            packed = np.uint64(0)
            for i in range(1, size):
                packed |= np.uint64(sbox[i]) << np.uint64(n * (i - 1))
            if found == out.shape[0]:
                grown = np.empty(out.shape[0] * 2, np.uint64)
                grown[:found] = out
                out = grown
            out[found] = packed
            found += 1
            x -= 1
            _unapply(n, x, sbox, ddt, ctr, sums, sup_flat, sup_off)
            sbox[x] = -1
            continue
        y = yarr[x]
        if y == size:
            if x == root:
                break
            x -= 1
            _unapply(n, x, sbox, ddt, ctr, sums, sup_flat, sup_off)
            sbox[x] = -1
            continue
        yarr[x] = y + 1
        nodes += 1
        sbox[x] = y
        if naive:
            ok = _naive_ok(n, x, sbox, cubes, ncubes)
        else:
            ok = _check(n, x, sbox, ddt, ctr, sums, sup_flat, sup_off, need)
        if ok:
            if naive == 0:
                _apply(n, x, sbox, ddt, ctr, sums, sup_flat, sup_off)
            x += 1
            yarr[x] = 0
        else:
            sbox[x] = -1
    return out[:found], nodes


@njit(cache=True, nogil=True)
def _check(n, x, sbox, ddt, ctr, sums, sup_flat, sup_off, need):  # pragma: no cover
    y = sbox[x]
    for xp in range(x):
        if ddt[((x ^ xp) << n) | (y ^ sbox[xp])] >= 2:
            return 0
    for k in range(sup_off[x], sup_off[x + 1]):
        u = sup_flat[k]
        if ctr[u] + 1 == need[u] and (sums[u] ^ y) != 0:
            return 0
    return 1


@njit(cache=True, nogil=True)
def _apply(n, x, sbox, ddt, ctr, sums, sup_flat, sup_off):  # pragma: no cover
    y = sbox[x]
    for xp in range(x):
        ddt[((x ^ xp) << n) | (y ^ sbox[xp])] += 2
    for k in range(sup_off[x], sup_off[x + 1]):
        u = sup_flat[k]
        ctr[u] += 1
        sums[u] ^= y


@njit(cache=True, nogil=True)
def _unapply(n, x, sbox, ddt, ctr, sums, sup_flat, sup_off):  # pragma: no cover
    y = sbox[x]
    for xp in range(x):
        ddt[((x ^ xp) << n) | (y ^ sbox[xp])] -= 2
    for k in range(sup_off[x], sup_off[x + 1]):
        u = sup_flat[k]
        ctr[u] -= 1
        sums[u] ^= y


@njit(cache=True, nogil=True)
def _naive_ok(n, x, sbox, cubes, ncubes):  # pragma: no cover
    # any fresh violation involves x: recount each (delta, beta) reached from x
    for xp in range(x):
        delta = x ^ xp
        beta = sbox[x] ^ sbox[xp]
        cnt = 0
        for a in range(x + 1):
            b = a ^ delta
            if b <= x and (sbox[a] ^ sbox[b]) == beta:
                cnt += 1  # ordered solutions of F(a)+F(a+delta)=beta
        if cnt > 2:
            return 0
    for c in range(ncubes):
        u = cubes[c]
        if u > x:
            break
        acc = 0
        s = u
        while True:
            acc ^= sbox[s]
            if s == 0:
                break
            s = (s - 1) & u
        if acc != 0:
            return 0
    return 1


def _need_array(n: int) -> np.ndarray:
    size = 1 << n
    return np.array([1 << u.bit_count() for u in range(size)], dtype=np.int64)


def enumerate_branch(n: int, prefix: Sequence[int], naive: bool = False) -> tuple[np.ndarray, int]:
    """Packed tables and node count below the prefix F(1..len) = prefix.

    Node count is -1 when the prefix itself violates a pruning condition
    (the subtree is empty by pruning rather than by exhaustion).
    """
    if not 2 <= n <= 4:
        raise ValueError("packed enumeration supports n <= 4 only")
    pre = np.asarray(list(prefix), dtype=np.int64)
    if pre.ndim != 1 or pre.shape[0] >= 1 << n:
        raise ValueError("prefix too long")
    if pre.size and (pre.min() < 0 or pre.max() >= 1 << n):
        raise ValueError("prefix value out of range")
    sup_flat, sup_off = _superset_arrays(n)
    tables, nodes = _branch_kernel(n, pre, sup_flat, sup_off, _need_array(n), 1 if naive else 0)
    return tables, int(nodes)


def enumerate_packed(n: int, naive: bool = False) -> tuple[np.ndarray, int]:
    """All degree-<=2 APN tables with F(0)=0, packed; plus the node count."""
    tables, nodes = enumerate_branch(n, [], naive)
    return tables, nodes


def unpack_table(packed: int, n: int) -> list[int]:
    out = [0] * (1 << n)
    mask = (1 << n) - 1
    v = int(packed)
    for i in range(1, 1 << n):
        out[i] = (v >> (n * (i - 1))) & mask
    return out
