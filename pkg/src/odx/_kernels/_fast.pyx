# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled kernels: cyclic Jacobi eigensolver and SRM average success.

Mirrors ``odx._kernels._pure`` operation for operation; the test suite
holds both backends to the same contracts, and either can serve the
package (see ODX_PURE_PYTHON).
"""

import numpy as np

from libc.math cimport fabs, sqrt

cdef double OFF_TOL = 1e-13
cdef int MAX_SWEEPS = 100


cdef double _off_norm(double complex[:, :] a, Py_ssize_t n):
    cdef double s = 0.0
    cdef Py_ssize_t p, q
    cdef double complex z
    for p in range(n - 1):
        for q in range(p + 1, n):
            z = a[p, q]
            s += z.real * z.real + z.imag * z.imag
    return sqrt(2.0 * s)


def jacobi_eigh(a):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with no eigenvalue ordering promised; matches the
    pure backend's convergence rule (off-diagonal Frobenius norm under
    max(1e-13, 1e-15 * ||a||_F), at most 100 sweeps).
    """
    work = np.array(a, dtype=np.complex128, order="C")
    cdef Py_ssize_t n = work.shape[0]
    vecs = np.eye(n, dtype=np.complex128)
    if n == 1:
        return np.array([work[0, 0].real]), vecs

    cdef double complex[:, :] A = work
    cdef double complex[:, :] V = vecs
    cdef Py_ssize_t i, j, p, q, sweep
    cdef double complex apq, ph, phc, vp, vq
    cdef double absb, tau, sgn, t, c, s, frob

    frob = 0.0
    for i in range(n):
        for j in range(n):
            apq = A[i, j]
            frob += apq.real * apq.real + apq.imag * apq.imag
    cdef double floor_ = max(OFF_TOL, 1e-15 * sqrt(frob))

    for sweep in range(MAX_SWEEPS):
        if _off_norm(A, n) <= floor_:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                absb = sqrt(apq.real * apq.real + apq.imag * apq.imag)
                if absb < 1e-300:
                    continue
                ph = apq / absb
                tau = (A[q, q].real - A[p, p].real) / (2.0 * absb)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = sgn / (fabs(tau) + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                phc = ph.conjugate()

                for i in range(n):
                    vp = A[i, p]
                    vq = A[i, q]
                    A[i, p] = c * vp - s * phc * vq
                    A[i, q] = s * vp + c * phc * vq
                for j in range(n):
                    vp = A[p, j]
                    vq = A[q, j]
                    A[p, j] = c * vp - s * ph * vq
                    A[q, j] = s * vp + c * ph * vq
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real

                for i in range(n):
                    vp = V[i, p]
                    vq = V[i, q]
                    V[i, p] = c * vp - s * phc * vq
                    V[i, q] = s * vp + c * phc * vq

    w = np.empty(n, dtype=np.float64)
    cdef double[:] W = w
    for i in range(n):
        W[i] = A[i, i].real
    return w, vecs


def pgm_average(probe, gathers, priors, double rank_tol):
    """Average success of the square-root measurement on a permutation orbit.

    Same contract as the pure backend: ``gathers[i, j]`` is the source
    index in ``probe`` of amplitude j of hypothesis state i.
    """
    states = np.asarray(probe, dtype=np.complex128)[gathers]
    pv = np.asarray(priors, dtype=np.float64)
    rho = (states.T * pv) @ states.conj()
    w, v = jacobi_eigh(rho)
    inv_sqrt = np.where(w > rank_tol, 1.0 / np.sqrt(np.where(w > rank_tol, w, 1.0)), 0.0)
    s = (v * inv_sqrt) @ v.conj().T
    quad = np.einsum("ia,ab,ib->i", states.conj(), s, states).real
    return float(np.sum(pv * pv * quad * quad))
