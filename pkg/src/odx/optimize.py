"""Numerical rediscovery of the optimal probe.

The search maximizes the square-root-measurement success over probe states
for a fixed oracle family.  Parameters are 2*d reals read as interleaved
(re, im) amplitude pairs and normalized at evaluation time, so the search
space is effectively the projective sphere rather than the unitary group;
the objective only ever depends on the prepared probe.

The local search is a hand-rolled Nelder-Mead simplex (reflection 1,
expansion 2, contraction 1/2, shrink 1/2) because the objective contains
an eigendecomposition whose derivative is awkward exactly at degenerate
optima.  Restarts draw their starting points from independent substreams
of one master seed (rng.spawn(seed, restart_index)), and the restart
results combine by maximum with ties going to the lowest restart index, so
any evaluation order or parallel schedule gives the same answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING

import numpy as np

from . import _kernels, rng
from .discrim import DEFAULT_RANK_TOL
from .errors import SizeMismatch, ZeroVector
from .linalg import StateVector
from .oracle import oracle_permutation

if TYPE_CHECKING:
    from .oracle import OracleFamily

# Per-restart simplex budget and default value-spread tolerance.
MAX_EVALS = 20_000
DEFAULT_TOL = 1e-10
_SIMPLEX_STEP = 0.25


@dataclass(frozen=True)
class OptimizationResult:
    """Best probe found, its value, and the per-restart audit trail."""

    best_probe: StateVector
    best_value: float
    restarts_run: int
    evaluations: int
    per_restart_values: tuple[float, ...]
    seed: int


@lru_cache(maxsize=64)
def _family_arrays(fam: "OracleFamily") -> tuple[np.ndarray, np.ndarray]:
    # gathers[i] is the amplitude-source map of member i's oracle: the
    # post-oracle state of a probe v is v[gathers[i]].
    gathers = np.stack([np.argsort(oracle_permutation(f)) for f in fam.members])
    priors = np.array(fam.priors, dtype=np.float64)
    gathers.setflags(write=False)
    priors.setflags(write=False)
    return gathers, priors


def _params_to_probe(params: np.ndarray) -> np.ndarray:
    z = params[0::2] + 1j * params[1::2]
    return z / np.linalg.norm(z)


def objective(params, fam: "OracleFamily") -> float:
    """SRM success of the probe encoded by interleaved (re, im) parameters."""
    arr = np.asarray(params, dtype=np.float64).reshape(-1)
    dim = 1 << fam.num_qubits
    if arr.size != 2 * dim:
        raise SizeMismatch(f"need {2 * dim} parameters for this family, got {arr.size}")
    if float(np.max(np.abs(arr))) < 1e-14:
        raise ZeroVector("all probe parameters below 1e-14")
    gathers, priors = _family_arrays(fam)
    return _kernels.pgm_average(_params_to_probe(arr), gathers, priors, DEFAULT_RANK_TOL)


def _nelder_mead(fn, x0: np.ndarray, tol: float, max_evals: int):
    """Minimize fn from x0; returns (best_x, best_value, evaluations)."""
    d = x0.size
    points = [x0.copy()]
    for i in range(d):
        step = x0.copy()
        step[i] += _SIMPLEX_STEP
        points.append(step)
    values = [fn(p) for p in points]
    evals = d + 1

    while evals < max_evals:
        order = sorted(range(d + 1), key=lambda k: values[k])
        points = [points[k] for k in order]
        values = [values[k] for k in order]
        if values[d] - values[0] < tol:
            break

        centroid = np.mean(points[:d], axis=0)
        worst = points[d]
        reflected = centroid + (centroid - worst)
        fr = fn(reflected)
        evals += 1

        if fr < values[0]:
            expanded = centroid + 2.0 * (centroid - worst)
            fe = fn(expanded)
            evals += 1
            if fe < fr:
                points[d], values[d] = expanded, fe
            else:
                points[d], values[d] = reflected, fr
        elif fr < values[d - 1]:
            points[d], values[d] = reflected, fr
        else:
            if fr < values[d]:
                contracted = centroid + 0.5 * (centroid - worst)
            else:
                contracted = centroid - 0.5 * (centroid - worst)
            fc = fn(contracted)
            evals += 1
            if fc < min(fr, values[d]):
                points[d], values[d] = contracted, fc
            else:
                # Shrink toward the best vertex.
                for i in range(1, d + 1):
                    points[i] = points[0] + 0.5 * (points[i] - points[0])
                    values[i] = fn(points[i])
                evals += d

    best = min(range(d + 1), key=lambda k: values[k])
    return points[best], values[best], evals


def optimize_probe(
    fam: "OracleFamily",
    restarts: int = 16,
    seed: int = 7,
    tol: float = DEFAULT_TOL,
) -> OptimizationResult:
    """Multi-start simplex maximization of the SRM success over probes."""
    if restarts < 1:
        raise ValueError(f"need at least one restart, got {restarts}")
    dim = 1 << fam.num_qubits
    d = 2 * dim

    def neg(x: np.ndarray) -> float:
        if float(np.max(np.abs(x))) < 1e-14:
            return math.inf
        return -objective(x, fam)

    per_restart: list[float] = []
    candidates: list[np.ndarray] = []
    total_evals = 0
    for r in range(restarts):
        start = rng.gauss_block(rng.spawn(seed, r), 0, d)
        start /= np.linalg.norm(start)
        best_x, best_neg, evals = _nelder_mead(neg, start, tol, MAX_EVALS)
        per_restart.append(-best_neg)
        candidates.append(best_x)
        total_evals += evals

    winner = max(range(restarts), key=lambda r: (per_restart[r], -r))
    probe = StateVector(_params_to_probe(np.asarray(candidates[winner])))
    return OptimizationResult(
        best_probe=probe,
        best_value=per_restart[winner],
        restarts_run=restarts,
        evaluations=total_evals,
        per_restart_values=tuple(per_restart),
        seed=seed,
    )


def random_probe_scan(fam: "OracleFamily", trials: int, seed: int) -> float:
    """Max objective over uniformly random probes; a crude independent bound.

    Trial t reads its Gaussian components from positions [t*d, (t+1)*d) of
    the seed's stream, so any chunking of the loop gives identical results.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    gathers, priors = _family_arrays(fam)
    dim = 1 << fam.num_qubits
    d = 2 * dim
    best = -math.inf
    chunk = 4096
    for t0 in range(0, trials, chunk):
        count = min(chunk, trials - t0)
        block = rng.gauss_block(seed, t0 * d, count * d).reshape(count, d)
        for row in block:
            value = _kernels.pgm_average(
                _params_to_probe(row), gathers, priors, DEFAULT_RANK_TOL
            )
            if value > best:
                best = value
    return best
