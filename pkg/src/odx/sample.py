"""Seeded Monte Carlo runs of the identification protocol.

Sampling never touches amplitudes: the simulator provides exact outcome
distributions and this module draws from them by inverse CDF using the
counter-based stream in :mod:`odx.rng`.  Shot i of a protocol run consumes
exactly the stream words 2i (hidden-function draw) and 2i + 1 (readout
draw), so shots are pure functions of (seed, index): any sharding or
chunking of the loop reproduces the same records bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import rng
from .errors import UnsupportedShape
from .oracle import BoolFunc, canonical_one_bit_family
from .protocol import OUTCOME_COUNT, protocol_distribution

_CHUNK = 1 << 16


@dataclass(frozen=True)
class ShotRecord:
    """One protocol shot: what was hidden, what was read, whether they match."""

    hidden_function_index: int
    outcome: int
    correct: bool


@dataclass(frozen=True)
class SampleSummary:
    """Aggregate of a protocol run."""

    shots: int
    successes: int
    frequency: float
    std_error: float
    seed: int


@lru_cache(maxsize=1)
def _canonical_cdfs() -> np.ndarray:
    fam = canonical_one_bit_family()
    dists = np.array([protocol_distribution(f) for f in fam.members])
    cdfs = np.cumsum(dists, axis=1)
    cdfs.setflags(write=False)
    return cdfs


def run_shots(shots: int, seed: int) -> SampleSummary:
    """Sample the canonical protocol with a uniformly hidden function."""
    if shots < 1:
        raise ValueError(f"need at least one shot, got {shots}")
    cdfs = _canonical_cdfs()
    successes = 0
    for t0 in range(0, shots, _CHUNK):
        count = min(_CHUNK, shots - t0)
        u = rng.uniform_block(seed, 2 * t0, 2 * count)
        u_hidden = u[0::2]
        u_outcome = u[1::2]
        hidden = np.minimum((u_hidden * OUTCOME_COUNT).astype(np.int64), OUTCOME_COUNT - 1)
        outcome = np.minimum(
            np.sum(cdfs[hidden] <= u_outcome[:, None], axis=1), OUTCOME_COUNT - 1
        )
        successes += int(np.sum(outcome == hidden))
    frequency = successes / shots
    std_error = math.sqrt(frequency * (1.0 - frequency) / shots)
    return SampleSummary(
        shots=shots,
        successes=successes,
        frequency=frequency,
        std_error=std_error,
        seed=seed,
    )


def iter_shots(shots: int, seed: int):
    """Yield the individual ShotRecords of run_shots, one stream word pair each.

    The scalar arithmetic here matches the vectorized path of
    :func:`run_shots` operation for operation.
    """
    if shots < 1:
        raise ValueError(f"need at least one shot, got {shots}")
    cdfs = _canonical_cdfs()
    for i in range(shots):
        u_hidden = rng.uniform(seed, 2 * i)
        u_outcome = rng.uniform(seed, 2 * i + 1)
        hidden = min(int(u_hidden * OUTCOME_COUNT), OUTCOME_COUNT - 1)
        outcome = min(int(np.sum(cdfs[hidden] <= u_outcome)), OUTCOME_COUNT - 1)
        yield ShotRecord(hidden, outcome, outcome == hidden)


def joint_histogram(shots: int, seed: int) -> np.ndarray:
    """(hidden, outcome) counts for the exact stream run_shots consumes.

    Entry [i, j] counts shots whose hidden function was i and readout was j;
    the diagonal sum equals run_shots(shots, seed).successes.
    """
    if shots < 1:
        raise ValueError(f"need at least one shot, got {shots}")
    cdfs = _canonical_cdfs()
    joint = np.zeros((OUTCOME_COUNT, OUTCOME_COUNT), dtype=np.int64)
    for t0 in range(0, shots, _CHUNK):
        count = min(_CHUNK, shots - t0)
        u = rng.uniform_block(seed, 2 * t0, 2 * count)
        hidden = np.minimum((u[0::2] * OUTCOME_COUNT).astype(np.int64), OUTCOME_COUNT - 1)
        outcome = np.minimum(
            np.sum(cdfs[hidden] <= u[1::2][:, None], axis=1), OUTCOME_COUNT - 1
        )
        np.add.at(joint, (hidden, outcome), 1)
    return joint


def sample_outcomes(probs, shots: int, seed: int) -> np.ndarray:
    """Histogram of inverse-CDF draws from an arbitrary distribution.

    Shot i consumes stream word i.  Returns integer counts, one bin per
    outcome, summing to ``shots``.
    """
    if shots < 1:
        raise ValueError(f"need at least one shot, got {shots}")
    p = np.asarray(probs, dtype=np.float64).reshape(-1)
    if p.size < 1 or np.any(p < 0.0) or abs(float(np.sum(p)) - 1.0) > 1e-9:
        raise ValueError("probabilities must be non-negative and sum to 1")
    cdf = np.cumsum(p)
    counts = np.zeros(p.size, dtype=np.int64)
    for t0 in range(0, shots, _CHUNK):
        count = min(_CHUNK, shots - t0)
        u = rng.uniform_block(seed, t0, count)
        outcome = np.minimum(np.sum(cdf[None, :] <= u[:, None], axis=1), p.size - 1)
        counts += np.bincount(outcome, minlength=p.size)
    return counts


def run_shots_fixed(f: BoolFunc, shots: int, seed: int) -> np.ndarray:
    """Outcome histogram of the protocol with the hidden function pinned."""
    if f.n != 1 or f.m != 1:
        raise UnsupportedShape(
            f"fixed-function sampling needs an n=m=1 function, got n={f.n}, m={f.m}"
        )
    return sample_outcomes(protocol_distribution(f), shots, seed)
