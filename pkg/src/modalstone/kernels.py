"""Selects the compiled kernels when present, pure Python otherwise.

Set ``MODALSTONE_PURE=1`` to force the fallback.  ``IMPLEMENTATION`` names
the choice so callers (and the benchmark) can report it.
"""

from __future__ import annotations

import os

from . import _kernel_pure

AXIOM_ORDER = _kernel_pure.AXIOM_ORDER
prune_gfp_trace = _kernel_pure.prune_gfp_trace

_compiled = None
if not os.environ.get("MODALSTONE_PURE"):
    try:
        from . import _kernel_c as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

IMPLEMENTATION = "compiled" if _compiled is not None else "pure"


def _pack_masks(masks, words):
    import numpy as np

    buf = b"".join(m.to_bytes(words * 8, "little") for m in masks)
    return np.frombuffer(buf, dtype=np.uint64).reshape(len(masks), words)


def prune_gfp(n: int, wit: list[list[int]], pred: list[int]) -> int:
    """Greatest fixed point of the witness-requirement operator; see
    :func:`modalstone._kernel_pure.prune_gfp`."""
    if _compiled is None or n == 0:
        return _kernel_pure.prune_gfp(n, wit, pred)
    import numpy as np

    words = (n + 63) // 64
    offsets = np.zeros(n + 1, dtype=np.int64)
    flat: list[int] = []
    for u, reqs in enumerate(wit):
        flat.extend(reqs)
        offsets[u + 1] = len(flat)
    wit_rows = _pack_masks(flat, words) if flat else np.zeros((0, words), dtype=np.uint64)
    pred_rows = _pack_masks(pred, words)
    alive = _compiled.prune_gfp_packed(wit_rows, offsets, pred_rows, n)
    return int.from_bytes(alive.tobytes(), "little")


class PackedLattice:
    """Per-lattice tables in the layout the kernels want, built once and
    reused across every operator pair on that lattice."""

    __slots__ = ("n", "up", "meet", "join", "top", "bot", "c_up", "c_meet", "c_join")

    def __init__(self, lattice):
        self.n = lattice.n
        self.up = list(lattice.up)
        self.meet = [lattice.meet_t[i][j] for i in range(self.n) for j in range(self.n)]
        self.join = [lattice.join_t[i][j] for i in range(self.n) for j in range(self.n)]
        self.top = lattice.top_i
        self.bot = lattice.bot_i
        self.c_up = self.c_meet = self.c_join = None
        if _compiled is not None and self.n <= 64:
            import numpy as np

            self.c_up = np.array(self.up, dtype=np.uint64)
            self.c_meet = np.array(self.meet, dtype=np.int32).reshape(self.n, self.n)
            self.c_join = np.array(self.join, dtype=np.int32).reshape(self.n, self.n)


def packed_lattice(lattice) -> PackedLattice:
    packed = getattr(lattice, "_packed", None)
    if packed is None:
        packed = PackedLattice(lattice)
        lattice._packed = packed
    return packed


def frame_axiom_bits(packed: PackedLattice, box, dia) -> int:
    """Bitmask over ``AXIOM_ORDER`` for the operator pair ``box``/``dia``
    (index tables) on ``packed``."""
    if packed.c_up is not None:
        import numpy as np

        return _compiled.frame_axiom_bits(
            packed.n, packed.c_up, packed.c_meet, packed.c_join,
            np.fromiter(box, dtype=np.int32, count=packed.n),
            np.fromiter(dia, dtype=np.int32, count=packed.n),
            packed.top, packed.bot)
    return _kernel_pure.frame_axiom_bits(
        packed.n, packed.up, packed.meet, packed.join, list(box), list(dia),
        packed.top, packed.bot)
