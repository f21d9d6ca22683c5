"""State discrimination: measurements, success probabilities, certificates.

The central objects are an :class:`Ensemble` of prior-weighted pure states
and a :class:`Povm` measuring it.  The square-root measurement is built
from rho^(-1/2) on the support of the ensemble average; the fixed guessing
rule everywhere is outcome m selects hypothesis m.  Optimality of a
measurement is certified numerically from the standard minimum-error
conditions rather than assumed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import (
    EmptyEnsemble,
    NegativeEigenvalue,
    NotPsd,
    NotUnitary,
    SizeMismatch,
    UnsupportedShape,
    WidthMismatch,
)
from .linalg import StateVector, hermitian_eig, is_psd, is_unitary, pinv_sqrt

if TYPE_CHECKING:
    from .oracle import OracleFamily

# Support detection threshold for rho^(-1/2); matches the linalg clamp.
DEFAULT_RANK_TOL = 1e-10


class Ensemble:
    """Prior-weighted pure states of a common width.

    ``states`` is a 2-D complex array, one unit-norm state per row, paired
    with ``priors`` (non-negative, summing to 1 within 1e-12).
    """

    __slots__ = ("priors", "states")

    def __init__(self, priors, states) -> None:
        p = np.array(priors, dtype=np.float64).reshape(-1)
        if p.size == 0:
            raise EmptyEnsemble("ensemble needs at least one state")
        try:
            s = np.array(states, dtype=np.complex128)
        except ValueError as exc:
            raise WidthMismatch(f"states do not share a width: {exc}") from None
        if s.ndim == 1:
            s = s.reshape(1, -1)
        if s.ndim != 2:
            raise WidthMismatch(f"expected a 2-D state array, got ndim={s.ndim}")
        if s.shape[0] != p.size:
            raise SizeMismatch(f"{p.size} priors for {s.shape[0]} states")
        if np.any(p < 0.0):
            raise ValueError("priors must be non-negative")
        total = float(np.sum(p))
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"priors sum to {total!r}, expected 1 within 1e-12")
        norms = np.sum(np.abs(s) ** 2, axis=1)
        worst = float(np.max(np.abs(norms - 1.0)))
        if worst > 1e-12:
            raise ValueError(f"a state deviates from unit norm by {worst:.3e}")
        p.setflags(write=False)
        s.setflags(write=False)
        self.priors = p
        self.states = s

    @property
    def size(self) -> int:
        return self.states.shape[0]

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def items(self):
        """Pairs (prior, StateVector) in ensemble order."""
        return [(float(p), StateVector(row)) for p, row in zip(self.priors, self.states)]


class Povm:
    """Positive operator-valued measure: PSD elements summing to identity."""

    __slots__ = ("elements",)

    def __init__(self, elements, tol: float = 1e-10) -> None:
        elems = tuple(np.array(e, dtype=np.complex128) for e in elements)
        if not elems:
            raise ValueError("a POVM needs at least one element")
        dim = elems[0].shape[0]
        for e in elems:
            if e.shape != (dim, dim):
                raise SizeMismatch(f"element shape {e.shape} differs from ({dim}, {dim})")
            if not is_psd(e, tol):
                raise NotPsd(f"POVM element is not PSD within {tol:.0e}")
        total = sum(elems)
        dev = float(np.max(np.abs(total - np.eye(dim))))
        if dev > tol:
            raise ValueError(f"POVM elements sum deviates from identity by {dev:.3e}")
        for e in elems:
            e.setflags(write=False)
        self.elements = elems

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]


@dataclass(frozen=True)
class DiscriminationReport:
    """Success probabilities plus the certificates a report should carry."""

    per_hypothesis_success: tuple[float, ...]
    average_success: float
    gram_eigenvalues: tuple[float, ...]
    optimality_residual: float
    notes: str


def gram(e: Ensemble) -> np.ndarray:
    """Gram matrix of the ensemble states: entry (i, j) = <psi_i|psi_j>."""
    return e.states.conj() @ e.states.T


def average_state(e: Ensemble) -> np.ndarray:
    """Density matrix of the prior-weighted mixture."""
    return (e.states.T * e.priors) @ e.states.conj()


def srm(e: Ensemble, rank_tol: float = DEFAULT_RANK_TOL) -> Povm:
    """Square-root measurement of the ensemble.

    Element i is p_i * S|psi_i><psi_i|S with S = rho^(-1/2) on the support
    of rho; the null-space projector of rho is split equally across all
    elements so the POVM completes to identity.
    """
    rho = average_state(e)
    s = pinv_sqrt(rho, rank_tol)
    w, v = hermitian_eig(rho)
    null_cols = v[:, w <= rank_tol]
    null_proj = null_cols @ null_cols.conj().T
    share = null_proj / e.size
    elements = []
    for i in range(e.size):
        vec = s @ e.states[i]
        elem = e.priors[i] * np.outer(vec, vec.conj()) + share
        elements.append((elem + elem.conj().T) / 2.0)
    return Povm(elements)


def measurement_from_unitary(u: np.ndarray) -> Povm:
    """Projective measurement 'apply u, read the computational basis'.

    Outcome m projects onto |chi_m> = u^dagger |m>, the conjugated m-th row
    of u.
    """
    a = np.asarray(u, dtype=np.complex128)
    if not is_unitary(a, 1e-10):
        raise NotUnitary("measurement preprocessing matrix is not unitary within 1e-10")
    return Povm([np.outer(a[m].conj(), a[m]) for m in range(a.shape[0])])


def success_probability(e: Ensemble, p: Povm) -> DiscriminationReport:
    """Evaluate the fixed guessing rule: outcome m selects hypothesis m."""
    if p.size != e.size:
        raise SizeMismatch(f"{p.size} POVM elements for {e.size} hypotheses")
    if p.dim != e.dim:
        raise SizeMismatch(f"POVM dimension {p.dim} vs state dimension {e.dim}")
    per = []
    for i in range(e.size):
        vec = e.states[i]
        val = (vec.conj() @ p.elements[i] @ vec).real
        per.append(min(1.0, max(0.0, float(val))))
    avg = float(np.dot(e.priors, per))
    eigs, _ = hermitian_eig(gram(e))
    residual, _ = optimality_conditions(e, p)
    return DiscriminationReport(
        per_hypothesis_success=tuple(per),
        average_success=avg,
        gram_eigenvalues=tuple(float(x) for x in eigs),
        optimality_residual=residual,
        notes="guessing rule: outcome m selects hypothesis m",
    )


def srm_success_gu(gram_eigenvalues, n_states: int) -> float:
    """Average SRM success of an equiprobable geometrically uniform ensemble.

    Uses the spectral form (sum_i sqrt(lambda_i))^2 / N^2.  Only valid when
    the ensemble actually is equiprobable and geometrically uniform; pair
    with :func:`check_gu`.
    """
    w = np.asarray(gram_eigenvalues, dtype=np.float64).reshape(-1)
    if w.size != n_states:
        raise SizeMismatch(f"{w.size} eigenvalues for {n_states} states")
    if np.any(w < -1e-10):
        raise NegativeEigenvalue(
            f"Gram eigenvalue {float(np.min(w)):.3e} below the -1e-10 clamp window"
        )
    w = np.where(np.abs(w) <= 1e-10, 0.0, w)
    return float(np.sum(np.sqrt(w)) ** 2 / n_states**2)


def check_gu(e: Ensemble, group) -> bool:
    """Whether the states are the orbit of state 0 under a closed matrix group.

    True iff the first listed matrix is the identity, state_i equals
    group_i @ state_0 within 1e-10 for every i, and every pairwise product
    of group members matches some listed member within 1e-10.
    """
    mats = [np.asarray(g, dtype=np.complex128) for g in group]
    if len(mats) != e.size:
        raise SizeMismatch(f"{len(mats)} group elements for {e.size} states")
    dim = e.dim
    if float(np.max(np.abs(mats[0] - np.eye(dim)))) > 1e-10:
        return False
    base = e.states[0]
    for i, g in enumerate(mats):
        if float(np.max(np.abs(e.states[i] - g @ base))) > 1e-10:
            return False
    for a in mats:
        for b in mats:
            prod = a @ b
            if not any(float(np.max(np.abs(prod - c))) <= 1e-10 for c in mats):
                return False
    return True


def optimality_conditions(e: Ensemble, p: Povm) -> tuple[float, float]:
    """Minimum-error certificates for a measurement on an ensemble.

    Returns ``(hermiticity_residual, min_eig_gap)`` where the residual is
    the max entry of |Gamma - Gamma^dagger| for
    Gamma = sum_i p_i |psi_i><psi_i| E_i, and the gap is the smallest
    eigenvalue over j of sym(Gamma) - p_j |psi_j><psi_j|.  The measurement
    is optimal iff the residual vanishes and the gap is non-negative (up to
    tolerance).
    """
    if p.size != e.size:
        raise SizeMismatch(f"{p.size} POVM elements for {e.size} hypotheses")
    if p.dim != e.dim:
        raise SizeMismatch(f"POVM dimension {p.dim} vs state dimension {e.dim}")
    dim = e.dim
    gamma = np.zeros((dim, dim), dtype=np.complex128)
    for i in range(e.size):
        proj = np.outer(e.states[i], e.states[i].conj())
        gamma += e.priors[i] * (proj @ p.elements[i])
    residual = float(np.max(np.abs(gamma - gamma.conj().T)))
    sym = (gamma + gamma.conj().T) / 2.0
    gap = np.inf
    for j in range(e.size):
        proj = np.outer(e.states[j], e.states[j].conj())
        w, _ = hermitian_eig(sym - e.priors[j] * proj)
        gap = min(gap, float(w[0]))
    return residual, gap


def classical_one_query_best(fam: "OracleFamily") -> float:
    """Best deterministic classical one-query strategy, by exhaustion.

    A strategy picks a query point x and a guess map from the observed bit
    to a hypothesis index; returns the best average success.  Only one-bit
    to one-bit families are supported.
    """
    if fam.n != 1 or fam.m != 1:
        raise UnsupportedShape(
            f"classical baseline handles n=m=1 families only, got n={fam.n}, m={fam.m}"
        )
    size = len(fam.members)
    best = 0.0
    for query in (0, 1):
        observed = [f(query) for f in fam.members]
        for guess in itertools.product(range(size), repeat=2):
            value = sum(
                prior
                for prior, obs, i in zip(fam.priors, observed, range(size))
                if guess[obs] == i
            )
            best = max(best, value)
    return best
