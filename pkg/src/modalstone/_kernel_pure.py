"""Pure-Python kernels for the two hot loops.

``_kernel_c`` (Cython) implements the same contracts on packed word
arrays; :mod:`modalstone.kernels` picks one at import time.  Masks here are
plain Python ints, bit ``i`` standing for point / element ``i``.
"""

from __future__ import annotations

from collections import deque

# Flag order shared with the compiled kernel.  The first six make a valid
# modal frame; the rest grade it.
AXIOM_ORDER = (
    "mono_box", "mono_dia",
    "box_top", "box_meet", "box_dia_meet", "dia_bot",
    "dia_join", "box_join_split", "serial",
    "box_deflationary", "dia_inflationary",
    "box_transitive", "dia_transitive",
    "dia_box_deflationary", "box_dia_inflationary",
)


def prune_gfp(n: int, wit: list[list[int]], pred: list[int]) -> int:
    """Largest subset of ``0..n-1`` in which every requirement is witnessed.

    ``wit[u]`` lists one mask per requirement of point ``u``; the
    requirement holds while the mask still meets the surviving set.
    ``pred[u]`` masks the points whose requirements may cite ``u``, so only
    they are re-examined when ``u`` is deleted.  Chaotic iteration of a
    monotone operator: the result is the greatest fixed point regardless of
    scan order.
    """
    alive = (1 << n) - 1
    queue = deque(range(n))
    inq = bytearray([1]) * n
    while queue:
        u = queue.popleft()
        inq[u] = 0
        if not alive >> u & 1:
            continue
        if all(w & alive for w in wit[u]):
            continue
        alive &= ~(1 << u)
        m = pred[u] & alive
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            if not inq[v]:
                inq[v] = 1
                queue.append(v)
    return alive


def prune_gfp_trace(n: int, wit: list[list[int]], pred: list[int]):
    """Like :func:`prune_gfp` but also reports deletions.

    Returns ``(alive, deletions)`` where deletions is a list of
    ``(point, requirement_index)`` in deletion order, citing the first
    requirement found unwitnessed.  Always pure Python.
    """
    alive = (1 << n) - 1
    deletions: list[tuple[int, int]] = []
    queue = deque(range(n))
    inq = bytearray([1]) * n
    while queue:
        u = queue.popleft()
        inq[u] = 0
        if not alive >> u & 1:
            continue
        broken = next((k for k, w in enumerate(wit[u]) if not w & alive), None)
        if broken is None:
            continue
        alive &= ~(1 << u)
        deletions.append((u, broken))
        m = pred[u] & alive
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            if not inq[v]:
                inq[v] = 1
                queue.append(v)
    return alive, deletions


def frame_axiom_bits(n, up, meet, join, box, dia, top, bot):
    """Bitmask over :data:`AXIOM_ORDER` for one operator pair.

    ``up`` holds one reachability mask per element, ``meet``/``join`` are
    flat n*n index tables, ``box``/``dia`` are index tables of the
    operators.
    """
    flags = 0

    def leq(i, j):
        return up[i] >> j & 1

    mono_box = mono_dia = True
    for a in range(n):
        ua = up[a] & ~(1 << a)
        for b in range(n):
            if ua >> b & 1:
                if not leq(box[a], box[b]):
                    mono_box = False
                if not leq(dia[a], dia[b]):
                    mono_dia = False
        if not (mono_box or mono_dia):
            break
    box_meet = box_dia_meet = dia_join = box_join_split = True
    for a in range(n):
        ra = a * n
        for b in range(n):
            if box_meet and not leq(meet[box[a] * n + box[b]], box[meet[ra + b]]):
                box_meet = False
            if box_dia_meet and not leq(meet[box[a] * n + dia[b]], dia[meet[ra + b]]):
                box_dia_meet = False
            j = join[ra + b]
            if dia_join and not leq(dia[j], join[dia[a] * n + dia[b]]):
                dia_join = False
            if box_join_split and not leq(box[j], join[box[a] * n + dia[b]]):
                box_join_split = False
    serial = all(leq(box[a], dia[a]) for a in range(n))
    box_defl = all(leq(box[a], a) for a in range(n))
    dia_infl = all(leq(a, dia[a]) for a in range(n))
    box_trans = all(leq(box[a], box[box[a]]) for a in range(n))
    dia_trans = all(leq(dia[dia[a]], dia[a]) for a in range(n))
    dia_box_defl = all(leq(dia[box[a]], a) for a in range(n))
    box_dia_infl = all(leq(a, box[dia[a]]) for a in range(n))
    values = (
        mono_box, mono_dia,
        box[top] == top, box_meet, box_dia_meet, dia[bot] == bot,
        dia_join, box_join_split, serial,
        box_defl, dia_infl, box_trans, dia_trans,
        dia_box_defl, box_dia_infl,
    )
    for k, v in enumerate(values):
        if v:
            flags |= 1 << k
    return flags
