"""Counter-based deterministic random numbers.

The generator is splitmix64 used in counter mode: the k-th word of the
stream for a given seed is

    word(seed, k) = mix64((seed + (k + 1) * GOLDEN) mod 2^64)

where mix64 is the standard splitmix64 finalizer and GOLDEN is the 64-bit
golden-ratio constant.  Because each word is a pure function of (seed, k),
any slice of the stream can be produced independently and in parallel with
bit-identical results; no generator state is ever carried between calls.

Uniform doubles take the top 53 bits: (word >> 11) * 2^-53, giving values
in [0, 1).  Gaussians use one Box-Muller cosine per pair of uniforms:
gaussian i consumes words 2i and 2i+1 of its stream.

Derived streams come from ``spawn(seed, i) = word(seed, i)``; this is the
fixed splitting rule used for per-restart and per-shot substreams.
"""

from __future__ import annotations

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1

_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return (z ^ (z >> 31)) & MASK64


def word(seed: int, k: int) -> int:
    """The k-th 64-bit word of the stream for ``seed``."""
    return mix64((seed + (k + 1) * GOLDEN) & MASK64)


def spawn(seed: int, i: int) -> int:
    """Seed of the i-th derived substream."""
    return word(seed, i)


def uniform(seed: int, k: int) -> float:
    """The k-th uniform double in [0, 1) of the stream for ``seed``."""
    return (word(seed, k) >> 11) * 2.0**-53


def uniform_block(seed: int, start: int, count: int) -> np.ndarray:
    """Uniforms for stream positions [start, start + count), vectorized.

    Matches ``uniform(seed, k)`` bit for bit at every position; uint64
    arithmetic wraps exactly like the scalar masked-integer path.
    """
    ks = np.arange(start, start + count, dtype=np.uint64)
    z = (np.uint64(seed & MASK64) + (ks + np.uint64(1)) * np.uint64(GOLDEN)).astype(np.uint64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)) * 2.0**-53


def gauss_block(seed: int, start: int, count: int) -> np.ndarray:
    """Standard Gaussians for gaussian positions [start, start + count).

    Gaussian i is Box-Muller's cosine branch on uniforms at stream
    positions 2i and 2i+1:  sqrt(-2 log(1 - u0)) * cos(2 pi u1).
    The 1 - u0 form keeps the logarithm away from zero.
    """
    u = uniform_block(seed, 2 * start, 2 * count)
    u0 = u[0::2]
    u1 = u[1::2]
    return np.sqrt(-2.0 * np.log1p(-u0)) * np.cos(2.0 * np.pi * u1)
