"""Timing comparison of the compiled and pure kernel backends.

Runs the Jacobi eigensolver and the SRM-average kernel on representative
inputs and prints per-call times for whichever backends are importable.

    python3 benchmarks/bench_kernels.py [--repeats N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from odx import optimize, oracle, rng
from odx._kernels import _pure

try:
    from odx._kernels import _fast
except ImportError:
    _fast = None


def _random_hermitian(n: int, seed: int) -> np.ndarray:
    re = rng.gauss_block(seed, 0, n * n).reshape(n, n)
    im = rng.gauss_block(seed + 1, 0, n * n).reshape(n, n)
    a = re + 1j * im
    return (a + a.conj().T) / 2.0


def _time_per_call(fn, args_list, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for args in args_list:
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / len(args_list))
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5, help="timing repeats (default 5)")
    args = parser.parse_args()

    backends = [("pure", _pure)]
    if _fast is not None:
        backends.append(("compiled", _fast))

    print(f"{'kernel':<28} " + " ".join(f"{name:>12}" for name, _ in backends) + "  speedup")

    for n in (4, 8, 16):
        mats = [(np.array(_random_hermitian(n, 100 + 7 * i)),) for i in range(20)]
        times = [_time_per_call(mod.jacobi_eigh, mats, args.repeats) for _, mod in backends]
        ratio = times[0] / times[-1] if len(times) > 1 else 1.0
        label = f"jacobi_eigh {n}x{n}"
        print(
            f"{label:<28} "
            + " ".join(f"{t * 1e6:>10.1f}us" for t in times)
            + f"  {ratio:>6.1f}x"
        )

    for fam, label in (
        (oracle.canonical_one_bit_family(), "pgm_average (1,1) family"),
        (oracle.full_family(2, 1), "pgm_average (2,1) family"),
    ):
        gathers, priors = optimize._family_arrays(fam)
        dim = 1 << fam.num_qubits
        probes = []
        for i in range(20):
            z = rng.gauss_block(200 + i, 0, 2 * dim)
            probe = z[0::2] + 1j * z[1::2]
            probes.append((probe / np.linalg.norm(probe), gathers, priors, 1e-10))
        times = [_time_per_call(mod.pgm_average, probes, args.repeats) for _, mod in backends]
        ratio = times[0] / times[-1] if len(times) > 1 else 1.0
        print(
            f"{label:<28} "
            + " ".join(f"{t * 1e6:>10.1f}us" for t in times)
            + f"  {ratio:>6.1f}x"
        )


if __name__ == "__main__":
    main()
