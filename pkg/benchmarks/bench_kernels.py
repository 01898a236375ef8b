#!/usr/bin/env python3
"""Time the compiled kernels against the pure-Python fallback.

Two micro-benchmarks exercise the hot paths directly — the worklist
greatest-fixed-point prune and the operator-axiom bitmask — and an
end-to-end run times a full duality sweep under both implementations
(the pure run happens in a ``MODALSTONE_PURE=1`` subprocess, since the
implementation is chosen once at import).

Run from a checkout with the package installed::

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --repeat 9 --no-sweep
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import time

from modalstone import kernels
from modalstone._kernel_pure import frame_axiom_bits as pure_axiom_bits
from modalstone._kernel_pure import prune_gfp as pure_gfp
from modalstone.enumerate import all_distributive_lattices


def best_of(repeat: int, fn) -> float:
    """Smallest wall-clock time over ``repeat`` calls, in seconds."""
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def random_prune_instance(rng: random.Random, n: int,
                          max_reqs: int = 3, bits_per_row: int = 8):
    """A worklist instance shaped like the ones the point construction
    emits: per candidate, a few requirement rows (masks of acceptable
    witnesses) and a predecessor mask.  Converges in a pass or two."""
    full = (1 << n) - 1
    wit, pred = [], []
    for _ in range(n):
        rows = []
        for _ in range(rng.randrange(max_reqs + 1)):
            row = 0
            for _ in range(bits_per_row):
                row |= 1 << rng.randrange(n)
            rows.append(row)
        wit.append(rows)
        pred.append(rng.getrandbits(n) & full)
    return wit, pred


def cascade_prune_instance(n: int):
    """Worst-case deletion depth: each candidate's only witness is the
    next one and the last has none, so the whole chain unravels one
    worklist step at a time."""
    wit = [[1 << (u + 1)] for u in range(n - 1)] + [[0]]
    pred = [0] + [1 << (u - 1) for u in range(1, n)]
    return wit, pred


def fmt(seconds: float) -> str:
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.1f} us"
    if seconds < 1.0:
        return f"{seconds * 1e3:8.2f} ms"
    return f"{seconds:8.2f} s "


def row(label: str, pure_s: float, fast_s: float | None) -> str:
    line = f"  {label:<28} pure {fmt(pure_s)}"
    if fast_s is not None:
        line += f"   compiled {fmt(fast_s)}   speedup {pure_s / fast_s:6.1f}x"
    return line


def bench_prune(args, compiled: bool) -> None:
    print("prune_gfp (worklist greatest fixed point)")
    rng = random.Random(args.seed)
    shapes = [(f"random n={n}", random_prune_instance(rng, n))
              for n in args.prune_sizes]
    shapes += [(f"cascade n={n}", cascade_prune_instance(n))
               for n in args.prune_sizes]
    for label, (wit, pred) in shapes:
        n = len(wit)
        want = pure_gfp(n, wit, pred)
        fast = None
        if compiled:
            got = kernels.prune_gfp(n, wit, pred)
            if got != want:
                raise SystemExit(f"implementations disagree on {label}")
            fast = best_of(args.repeat, lambda: kernels.prune_gfp(n, wit, pred))
        pure = best_of(args.repeat, lambda: pure_gfp(n, wit, pred))
        print(row(label, pure, fast))


def bench_axiom_bits(args, compiled: bool) -> None:
    lattice = max(all_distributive_lattices(args.lattice_bound),
                  key=lambda lat: lat.n)
    packed = kernels.packed_lattice(lattice)
    rng = random.Random(args.seed)
    n = lattice.n
    ops = [(tuple(rng.randrange(n) for _ in range(n)),
            tuple(rng.randrange(n) for _ in range(n)))
           for _ in range(args.op_pairs)]

    def run_pure():
        for box, dia in ops:
            pure_axiom_bits(n, packed.up, packed.meet, packed.join,
                            list(box), list(dia), packed.top, packed.bot)

    def run_fast():
        for box, dia in ops:
            kernels.frame_axiom_bits(packed, box, dia)

    print(f"frame_axiom_bits ({args.op_pairs} random operator pairs, "
          f"{n}-element lattice)")
    for box, dia in ops[:50]:
        want = pure_axiom_bits(n, packed.up, packed.meet, packed.join,
                               list(box), list(dia), packed.top, packed.bot)
        if compiled and kernels.frame_axiom_bits(packed, box, dia) != want:
            raise SystemExit("implementations disagree on axiom bits")
    fast = best_of(args.repeat, run_fast) if compiled else None
    pure = best_of(args.repeat, run_pure)
    print(row("batch", pure, fast))


def bench_sweep(args, compiled: bool) -> None:
    code = ("import sys, time; from modalstone.sweep import frame_duality_sweep; "
            f"t = time.perf_counter(); r = frame_duality_sweep({args.sweep_bound}); "
            "print(time.perf_counter() - t)")
    print(f"frame_duality_sweep({args.sweep_bound}) (end to end, one run each)")

    def timed(env_extra):
        out = subprocess.run([sys.executable, "-c", code], check=True,
                             capture_output=True, text=True,
                             env={**os.environ, **env_extra})
        return float(out.stdout.strip())

    fast = timed({}) if compiled else None
    pure = timed({"MODALSTONE_PURE": "1"})
    print(row("sweep", pure, fast))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5,
                        help="timed repetitions per measurement (best is kept)")
    parser.add_argument("--seed", type=int, default=20260824)
    parser.add_argument("--prune-sizes", type=int, nargs="+",
                        default=[64, 128, 512, 1024])
    parser.add_argument("--op-pairs", type=int, default=5000,
                        help="random operator pairs per axiom-bits batch")
    parser.add_argument("--lattice-bound", type=int, default=5)
    parser.add_argument("--sweep-bound", type=int, default=4)
    parser.add_argument("--no-sweep", action="store_true",
                        help="skip the end-to-end sweep comparison")
    args = parser.parse_args(argv)

    compiled = kernels.IMPLEMENTATION == "compiled"
    print(f"active implementation: {kernels.IMPLEMENTATION}")
    if not compiled:
        print("compiled extension not available; timing the fallback only\n")
    else:
        print()
    bench_prune(args, compiled)
    print()
    bench_axiom_bits(args, compiled)
    if not args.no_sweep:
        print()
        bench_sweep(args, compiled)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
