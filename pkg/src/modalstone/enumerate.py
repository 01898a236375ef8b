"""Exhaustive generation of small instances: topologies, relational
spaces, distributive lattices up to isomorphism, and modal operator
pairs over them."""

from __future__ import annotations

from itertools import permutations
from typing import Iterator

from .order import FiniteLattice, bits, validate_lattice
from .frames import ModalFrame
from .kernels import AXIOM_ORDER, frame_axiom_bits, packed_lattice
from .spaces import RelationalSpace

_MODAL_MASK = sum(1 << AXIOM_ORDER.index(key) for key in
                  ("mono_box", "mono_dia", "box_top", "box_meet",
                   "box_dia_meet", "dia_bot"))
_NAMES = "abcdefghijklmnop"


def all_topologies(n: int) -> list[tuple[int, ...]]:
    """Every topology on ``n`` labeled points, each a mask tuple sorted by
    (size, mask) — the open-set order spaces use."""
    full = (1 << n) - 1
    mids = [m for m in range(1, full)]
    out = []
    for sel in range(1 << len(mids)):
        fam = {0, full} | {mids[i] for i in bits(sel)}
        if all((a & b) in fam and (a | b) in fam for a in fam for b in fam):
            out.append(tuple(sorted(fam, key=lambda m: (m.bit_count(), m))))
    out.sort()
    return out


def _permute_mask(mask: int, perm) -> int:
    out = 0
    for i in bits(mask):
        out |= 1 << perm[i]
    return out


def _space_key(n: int, opens, succ, perm):
    po = tuple(sorted((_permute_mask(u, perm) for u in opens),
                      key=lambda m: (m.bit_count(), m)))
    ps = [0] * n
    for i in range(n):
        ps[perm[i]] = _permute_mask(succ[i], perm)
    return po, tuple(ps)


def all_spaces(points, up_to_iso: bool = False) -> Iterator[RelationalSpace]:
    """Every relational space on the given points (a name sequence or a
    count): all topologies crossed with all relations.  With ``up_to_iso``
    only one representative per relabeling class is produced.

    Instances are built directly; the enumeration itself guarantees the
    topology laws.
    """
    names = tuple(_NAMES[:points]) if isinstance(points, int) else tuple(points)
    n = len(names)
    seen = set()
    for opens in all_topologies(n):
        for rel in range(1 << (n * n)):
            succ = tuple(rel >> (i * n) & (1 << n) - 1 for i in range(n))
            if up_to_iso:
                key = min(_space_key(n, opens, succ, perm)
                          for perm in permutations(range(n)))
                if key in seen:
                    continue
                seen.add(key)
            yield RelationalSpace(names, opens, succ)


# -- distributive lattices ------------------------------------------------

def _all_posets(k: int) -> Iterator[tuple[int, ...]]:
    """Partial orders on ``k`` labeled elements, as up-set row masks."""
    if k == 0:
        yield ()
        return
    pairs = [(i, j) for i in range(k) for j in range(k) if i != j]
    for sel in range(1 << len(pairs)):
        up = [1 << i for i in range(k)]
        for idx in bits(sel):
            i, j = pairs[idx]
            up[i] |= 1 << j
        if any(up[i] >> j & 1 and up[j] >> i & 1
               for i in range(k) for j in range(i + 1, k)):
            continue
        if any(up[j] & ~up[i] for i in range(k) for j in bits(up[i])):
            continue
        yield tuple(up)


def _downset_masks(k: int, up: tuple[int, ...]) -> list[int]:
    down = [sum(1 << i for i in range(k) if up[i] >> j & 1) for j in range(k)]
    return [s for s in range(1 << k)
            if all(down[j] & ~s == 0 for j in bits(s))]


def _canonical_key(lat: FiniteLattice):
    best = None
    for perm in permutations(range(lat.n)):
        word = 0
        for i in range(lat.n):
            for j in bits(lat.up[i]):
                word |= 1 << (perm[i] * lat.n + perm[j])
        if best is None or word < best:
            best = word
    return lat.n, best


def all_distributive_lattices(max_elements: int) -> list[FiniteLattice]:
    """One lattice per isomorphism class with at most ``max_elements``
    elements.  Finite distributive lattices are the down-set lattices of
    finite posets, so posets are enumerated and each result is still run
    through full validation."""
    out: list[FiniteLattice] = []
    seen = set()
    for k in range(max(0, max_elements)):
        for up in _all_posets(k):
            downs = _downset_masks(k, up)
            if len(downs) > max_elements:
                continue
            downs.sort(key=lambda m: (m.bit_count(), m))
            names = [_NAMES[i] for i in range(len(downs))]
            leq = [(names[i], names[j]) for i in range(len(downs))
                   for j in range(len(downs)) if downs[i] & ~downs[j] == 0]
            lat = validate_lattice(names, leq)
            key = _canonical_key(lat)
            if key not in seen:
                seen.add(key)
                out.append(lat)
    out.sort(key=lambda lat: _canonical_key(lat))
    return out


# -- modal operator pairs -------------------------------------------------

def monotone_tables(lattice: FiniteLattice) -> list[tuple[int, ...]]:
    """Every monotone self-map as an index tuple, by depth-first assignment
    along a linear extension."""
    order = sorted(range(lattice.n), key=lambda i: lattice.down[i].bit_count())
    out: list[tuple[int, ...]] = []
    tbl = [0] * lattice.n

    def rec(pos: int):
        if pos == lattice.n:
            out.append(tuple(tbl))
            return
        j = order[pos]
        allowed = (1 << lattice.n) - 1
        for prev in order[:pos]:
            if lattice.leq_i(prev, j):
                allowed &= lattice.up[tbl[prev]]
        for v in bits(allowed):
            tbl[j] = v
            rec(pos + 1)

    rec(0)
    return out


def modal_operator_pairs(lattice: FiniteLattice) -> Iterator[tuple[tuple, tuple, int]]:
    """Monotone (box, dia) table pairs satisfying the defining frame
    axioms, each with its full axiom bitmask from the kernel scan."""
    packed = packed_lattice(lattice)
    tables = monotone_tables(lattice)
    boxes = [t for t in tables if t[lattice.top_i] == lattice.top_i]
    dias = [t for t in tables if t[lattice.bot_i] == lattice.bot_i]
    for box in boxes:
        for dia in dias:
            flags = frame_axiom_bits(packed, box, dia)
            if flags & _MODAL_MASK == _MODAL_MASK:
                yield box, dia, flags


def modal_frames_over(lattice: FiniteLattice) -> Iterator[ModalFrame]:
    for box, dia, _ in modal_operator_pairs(lattice):
        yield ModalFrame(lattice, box, dia)
