"""Pure-Python (numpy) implementations of the hot kernels.

These are the fallback backend and the reference the compiled module
``odx._kernels._fast`` is tested against.  Both backends implement the same
arithmetic: a cyclic Jacobi eigensolver for Hermitian matrices and the
square-root-measurement success probability for permutation-orbit ensembles.
"""

from __future__ import annotations

import math

import numpy as np

# Cyclic Jacobi stopping rule: off-diagonal Frobenius norm below OFF_TOL
# (with a relative floor so badly scaled inputs cannot stall), at most
# MAX_SWEEPS full sweeps.
OFF_TOL = 1e-13
MAX_SWEEPS = 100


def _off_norm(a: np.ndarray) -> float:
    n = a.shape[0]
    s = 0.0
    for p in range(n - 1):
        for q in range(p + 1, n):
            z = a[p, q]
            s += z.real * z.real + z.imag * z.imag
    return math.sqrt(2.0 * s)


def jacobi_eigh(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with ``a ~= v @ diag(w) @ v.conj().T`` and the columns
    of ``v`` orthonormal.  No ordering of ``w`` is promised; callers impose
    their own convention.
    """
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        return np.array([a[0, 0].real]), v

    floor = max(OFF_TOL, 1e-15 * math.sqrt(abs((a * a.conj()).sum().real)))
    for _ in range(MAX_SWEEPS):
        if _off_norm(a) <= floor:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                absb = abs(apq)
                if absb < 1e-300:
                    continue
                ph = apq / absb
                tau = (a[q, q].real - a[p, p].real) / (2.0 * absb)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = sgn / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                phc = ph.conjugate()

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * phc * col_q
                a[:, q] = s * col_p + c * phc * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * ph * row_q
                a[q, :] = s * row_p + c * ph * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * phc * vec_q
                v[:, q] = s * vec_p + c * phc * vec_q

    return a.diagonal().real.copy(), v


def pgm_average(
    probe: np.ndarray,
    gathers: np.ndarray,
    priors: np.ndarray,
    rank_tol: float,
) -> float:
    """Average success of the square-root measurement on a permutation orbit.

    ``gathers[i, j]`` is the source index in ``probe`` for amplitude ``j`` of
    hypothesis state ``i`` (the inverse of the oracle's basis permutation).
    Equivalent to building the ensemble, forming its square-root measurement
    and evaluating the average success directly; this is the hot path used by
    the probe optimizer.
    """
    states = probe[gathers]
    rho = (states.T * priors) @ states.conj()
    w, v = jacobi_eigh(rho)
    inv_sqrt = np.where(w > rank_tol, 1.0 / np.sqrt(np.where(w > rank_tol, w, 1.0)), 0.0)
    s = (v * inv_sqrt) @ v.conj().T
    quad = np.einsum("ia,ab,ib->i", states.conj(), s, states).real
    return float(np.sum(priors * priors * quad * quad))
