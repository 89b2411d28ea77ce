"""Compiled hot paths: KTNS objective and first-improvement neighborhood scans.

Job requirements arrive in CSR form (``tool_ptr``, ``tool_idx``) and ``seq``
is an int64 array of 0-based job indices. Move kinds: 0 = 2-opt, 1 = relocate, 2 = swap.
"""

import math

import numpy as np
from numba import njit

TWO_OPT, RELOCATE, SWAP = 0, 1, 2


@njit(cache=True)
def ktns_objective(tool_ptr, tool_idx, n_tools, seq, capacity):
    """Switch count and 0-block objective of ``seq`` under KTNS, no matrix built.

    Tools of job ``j`` are ``tool_idx[tool_ptr[j]:tool_ptr[j + 1]]``. A tool in
    the magazine carries the position of its next use (n if none), set when it
    was last used; evicting the largest such value is exactly KTNS.
    """
    n = seq.shape[0]
    offset = np.empty(n + 1, np.int64)
    offset[0] = 0
    for p in range(n):
        job = seq[p]
        offset[p + 1] = offset[p] + tool_ptr[job + 1] - tool_ptr[job]

    # next_use[offset[p] + k]: next position after p needing the k-th tool of seq[p]
    next_use = np.empty(offset[n], np.int64)
    nxt = np.full(n_tools, n, np.int64)
    for p in range(n - 1, -1, -1):
        job = seq[p]
        base = tool_ptr[job]
        for k in range(tool_ptr[job + 1] - base):
            t = tool_idx[base + k]
            next_use[offset[p] + k] = nxt[t]
            nxt[t] = p

    # slot key packs (next use, -tool index) so eviction is a plain argmax
    slot_key = np.empty(capacity, np.int64)
    magazine = np.empty(capacity, np.int64)
    slot = np.full(n_tools, -1, np.int64)
    evicted_at = np.full(n_tools, -1, np.int64)
    block_hist = np.zeros(n + 1, np.int64)
    size = 0
    switches = 0
    for p in range(n):
        job = seq[p]
        base = tool_ptr[job]
        count = tool_ptr[job + 1] - base
        missing = 0
        for k in range(count):
            if slot[tool_idx[base + k]] < 0:
                missing += 1
        for _ in range(size + missing - capacity):
            best = 0
            best_key = slot_key[0]
            for s in range(1, size):
                if slot_key[s] > best_key:
                    best = s
                    best_key = slot_key[s]
            victim = magazine[best]
            size -= 1
            magazine[best] = magazine[size]
            slot_key[best] = slot_key[size]
            slot[magazine[best]] = best
            slot[victim] = -1
            evicted_at[victim] = p
            switches += 1
        for k in range(count):
            t = tool_idx[base + k]
            s = slot[t]
            if s < 0:
                if evicted_at[t] >= 0:
                    # absent at positions evicted_at .. p - 1
                    block_hist[p - evicted_at[t]] += 1
                s = size
                magazine[s] = t
                slot[t] = s
                size += 1
            slot_key[s] = next_use[offset[p] + k] * n_tools + (n_tools - 1 - t)

    phi = 0.0
    for s in range(1, n + 1):
        if block_hist[s] > 0:
            phi += block_hist[s] * math.sqrt(s)
    return switches, phi


@njit(cache=True)
def apply_move_into(kind, seq, i, j, out):
    n = seq.shape[0]
    for k in range(n):
        out[k] = seq[k]
    if kind == TWO_OPT:
        a = i
        b = j
        while a < b:
            out[a] = seq[b]
            out[b] = seq[a]
            a += 1
            b -= 1
    elif kind == RELOCATE:
        job = seq[i]
        if i < j:
            for k in range(i, j):
                out[k] = seq[k + 1]
        else:
            for k in range(i, j, -1):
                out[k] = seq[k - 1]
        out[j] = job
    else:
        out[i] = seq[j]
        out[j] = seq[i]


@njit(cache=True)
def scan_moves(tool_ptr, tool_idx, n_tools, seq, capacity, kind, moves, order, cur_switches, cur_phi, eps):
    """Return (index, switches, phi) of the first improving move in ``order``, or -1."""
    cand = np.empty_like(seq)
    for r in range(order.shape[0]):
        k = order[r]
        apply_move_into(kind, seq, moves[k, 0], moves[k, 1], cand)
        sw, phi = ktns_objective(tool_ptr, tool_idx, n_tools, cand, capacity)
        if sw < cur_switches or (sw == cur_switches and phi < cur_phi - eps):
            return k, sw, phi
    return -1, cur_switches, cur_phi

