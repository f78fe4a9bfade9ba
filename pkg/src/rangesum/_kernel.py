"""Compiled inner loop of the root-multiset enumeration."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _leaf(p, k, vals, seq, cnt, nz, out, nhits, cap):
    for u in range(p):
        cnt[u] = 0
    for x in range(p):
        cnt[vals[x]] += 1
    nn = 0
    for u in range(1, p):
        if cnt[u] > 0:
            nz[nn] = u
            nn += 1
    for c in range(1, p):
        s = 0
        for i in range(nn):
            u = nz[i]
            s += cnt[u] * ((c * u) % p)
            if s > p:
                break
        if s == p:
            if nhits < cap:
                out[nhits, 0] = c
                for j in range(k):
                    out[nhits, j + 1] = seq[j]
            nhits += 1
    return nhits


@njit(cache=True)
def scan_prefix(p, k, prefix, out):
    """Visit every nondecreasing length-k root sequence extending ``prefix``.

    At each leaf the value vector v(x) = prod (x - r) is bucketed and every
    leading coefficient c with sum_x (c v(x) mod p) == p is written to
    ``out`` as a row ``[c, r_0, ..., r_{k-1}]``. Returns (leaves, hits);
    if hits exceeds ``out.shape[0]`` the caller must retry with more room.
    """
    cap = out.shape[0]
    depth0 = prefix.shape[0]
    vals = np.empty((k + 1, p), np.int64)
    for x in range(p):
        vals[0, x] = 1
    seq = np.zeros(k, np.int64)
    for d in range(depth0):
        seq[d] = prefix[d]
        for x in range(p):
            vals[d + 1, x] = vals[d, x] * ((x - prefix[d] + p) % p) % p
    cnt = np.zeros(p, np.int64)
    nz = np.empty(p, np.int64)
    if depth0 == k:
        nhits = _leaf(p, k, vals[k], seq, cnt, nz, out, 0, cap)
        return 1, nhits
    nhits = 0
    leaves = 0
    pos = depth0
    seq[pos] = seq[pos - 1] if pos > 0 else 0
    while True:
        a = seq[pos]
        for x in range(p):
            vals[pos + 1, x] = vals[pos, x] * ((x - a + p) % p) % p
        if pos + 1 == k:
            leaves += 1
            nhits = _leaf(p, k, vals[k], seq, cnt, nz, out, nhits, cap)
            seq[pos] += 1
            while seq[pos] == p:
                pos -= 1
                if pos < depth0:
                    return leaves, nhits
                seq[pos] += 1
        else:
            pos += 1
            seq[pos] = seq[pos - 1]
