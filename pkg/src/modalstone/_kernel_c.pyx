# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled twins of the kernels in _kernel_pure.py.

Point sets are packed little-endian into 64-bit words.  Both functions
must agree bit-for-bit with the pure versions; tests/test_kernels.py
checks that on enumerated workloads.
"""

import numpy as np


def prune_gfp_packed(const unsigned long long[:, ::1] wit, const long long[::1] offsets,
                     const unsigned long long[:, ::1] pred, int n):
    """Greatest fixed point of the witness-requirement operator.

    Rows ``offsets[u]:offsets[u+1]`` of ``wit`` are the requirement masks
    of point ``u``; ``pred[u]`` masks the points whose requirements may
    cite ``u``.  Returns the surviving set as a packed uint64 array.
    """
    cdef int W = pred.shape[1]
    alive_arr = np.empty(W, dtype=np.uint64)
    cdef unsigned long long[::1] alive = alive_arr
    queue_arr = np.empty(n + 1, dtype=np.int32)
    cdef int[::1] queue = queue_arr
    inq_arr = np.ones(n, dtype=np.uint8)
    cdef unsigned char[::1] inq = inq_arr
    cdef int head = 0, tail = 0
    cdef int u, v, w
    cdef long long k
    cdef bint witnessed, broken
    cdef unsigned long long ones = 0
    ones = ~ones
    for w in range(W):
        alive[w] = ones
    if n & 63:
        alive[W - 1] = ((<unsigned long long> 1) << (n & 63)) - 1
    for u in range(n):
        queue[u] = u
    tail = n % (n + 1)
    while head != tail:
        u = queue[head]
        head = (head + 1) % (n + 1)
        inq[u] = 0
        if not (alive[u >> 6] >> (u & 63)) & 1:
            continue
        broken = False
        for k in range(offsets[u], offsets[u + 1]):
            witnessed = False
            for w in range(W):
                if wit[k, w] & alive[w]:
                    witnessed = True
                    break
            if not witnessed:
                broken = True
                break
        if not broken:
            continue
        alive[u >> 6] &= ~((<unsigned long long> 1) << (u & 63))
        for v in range(n):
            if (pred[u, v >> 6] >> (v & 63)) & 1 and (alive[v >> 6] >> (v & 63)) & 1:
                if not inq[v]:
                    inq[v] = 1
                    queue[tail] = v
                    tail = (tail + 1) % (n + 1)
    return alive_arr


def frame_axiom_bits(int n, unsigned long long[::1] up, int[:, ::1] meet,
                     int[:, ::1] join, int[::1] box, int[::1] dia,
                     int top, int bot):
    """Bitmask over _kernel_pure.AXIOM_ORDER for one operator pair."""
    cdef int a, b, j
    cdef bint mono_box = True, mono_dia = True
    cdef bint box_meet = True, box_dia_meet = True
    cdef bint dia_join = True, box_join_split = True
    cdef bint serial = True, box_defl = True, dia_infl = True
    cdef bint box_trans = True, dia_trans = True
    cdef bint dia_box_defl = True, box_dia_infl = True
    for a in range(n):
        for b in range(n):
            if a != b and (up[a] >> b) & 1:
                if not (up[box[a]] >> box[b]) & 1:
                    mono_box = False
                if not (up[dia[a]] >> dia[b]) & 1:
                    mono_dia = False
            if not (up[meet[box[a], box[b]]] >> box[meet[a, b]]) & 1:
                box_meet = False
            if not (up[meet[box[a], dia[b]]] >> dia[meet[a, b]]) & 1:
                box_dia_meet = False
            j = join[a, b]
            if not (up[dia[j]] >> join[dia[a], dia[b]]) & 1:
                dia_join = False
            if not (up[box[j]] >> join[box[a], dia[b]]) & 1:
                box_join_split = False
        if not (up[box[a]] >> dia[a]) & 1:
            serial = False
        if not (up[box[a]] >> a) & 1:
            box_defl = False
        if not (up[a] >> dia[a]) & 1:
            dia_infl = False
        if not (up[box[a]] >> box[box[a]]) & 1:
            box_trans = False
        if not (up[dia[dia[a]]] >> dia[a]) & 1:
            dia_trans = False
        if not (up[dia[box[a]]] >> a) & 1:
            dia_box_defl = False
        if not (up[a] >> box[dia[a]]) & 1:
            box_dia_infl = False
    cdef int flags = 0
    if mono_box: flags |= 1 << 0
    if mono_dia: flags |= 1 << 1
    if box[top] == top: flags |= 1 << 2
    if box_meet: flags |= 1 << 3
    if box_dia_meet: flags |= 1 << 4
    if dia[bot] == bot: flags |= 1 << 5
    if dia_join: flags |= 1 << 6
    if box_join_split: flags |= 1 << 7
    if serial: flags |= 1 << 8
    if box_defl: flags |= 1 << 9
    if dia_infl: flags |= 1 << 10
    if box_trans: flags |= 1 << 11
    if dia_trans: flags |= 1 << 12
    if dia_box_defl: flags |= 1 << 13
    if box_dia_infl: flags |= 1 << 14
    return flags
