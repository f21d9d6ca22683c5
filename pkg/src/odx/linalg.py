"""Dense complex linear algebra at desk scale.

Everything here operates on small (dimension <= ~64) numpy arrays of
complex128.  Matrices are plain ndarrays; the only wrapper type is
:class:`StateVector`, which pins down the qubit-ordering convention used
throughout the package: qubit 0 is the most significant bit, so the
two-qubit basis state |q0 q1> sits at index 2*q0 + q1.
"""

from __future__ import annotations

import math

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, IndexOutOfRange, NotHermitian, NotPsd, ZeroVector

# Eigenvalues inside [-PSD_CLAMP, PSD_CLAMP] are treated as exact zeros by
# psd_sqrt: the lower half absorbs roundoff per the PSD precondition, and the
# upper half keeps sqrt() from turning 1e-16 of assembly noise into 1e-8 of
# output error on genuinely singular inputs (rank-deficient Gram matrices).
PSD_CLAMP = 1e-10

# Near-equal eigenvalues (gap <= EIG_TIE_TOL) count as a tie; inside a tie
# block the eigenvector lexicographic order decides.
EIG_TIE_TOL = 1e-9


def _square(m: np.ndarray) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(np.float64))):
        raise ValueError("matrix contains NaN or Inf entries")
    return a


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two square complex matrices."""
    return np.kron(_square(a), _square(b))


def is_hermitian(m: np.ndarray, tol: float = 1e-10) -> bool:
    """Whether ``m`` equals its conjugate transpose within ``tol`` entrywise."""
    a = _square(m)
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def is_unitary(m: np.ndarray, tol: float = 1e-10) -> bool:
    """Whether ``m @ m.conj().T`` equals the identity within ``tol`` entrywise."""
    a = _square(m)
    eye = np.eye(a.shape[0])
    return bool(np.max(np.abs(a @ a.conj().T - eye)) <= tol)


def is_psd(m: np.ndarray, tol: float = 1e-10) -> bool:
    """Whether ``m`` is Hermitian within ``tol`` with eigenvalues >= ``-tol``."""
    a = _square(m)
    if not is_hermitian(a, tol):
        return False
    w, _ = _kernels.jacobi_eigh((a + a.conj().T) / 2.0)
    return bool(np.min(w) >= -tol)


def _canonical_phase(col: np.ndarray) -> np.ndarray:
    # Rotate so the first non-negligible component is real and positive.
    for z in col:
        if abs(z) > 1e-12:
            return col * (z.conjugate() / abs(z))
    return col


def hermitian_eig(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix with a deterministic ordering.

    Parameters
    ----------
    m : ndarray
        Square matrix, Hermitian within 1e-10.

    Returns
    -------
    w : ndarray
        Real eigenvalues sorted ascending.  Ties (gap <= 1e-9) are broken by
        the lexicographic order of the phase-canonicalized eigenvectors.
    v : ndarray
        Orthonormal eigenvectors as columns, ``v[:, i]`` paired with ``w[i]``.
        Each column is rotated so its first non-negligible component is real
        and positive.

    Raises
    ------
    NotHermitian
        If ``m`` deviates from its conjugate transpose by more than 1e-10.
    """
    a = _square(m)
    dev = float(np.max(np.abs(a - a.conj().T)))
    if dev > 1e-10:
        raise NotHermitian(f"matrix deviates from Hermitian by {dev:.3e}")
    w, v = _kernels.jacobi_eigh((a + a.conj().T) / 2.0)

    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    for j in range(v.shape[1]):
        v[:, j] = _canonical_phase(v[:, j])

    # Reorder within near-degenerate runs so the output does not depend on
    # the rotation order the solver happened to use.
    n = len(w)
    i = 0
    while i < n:
        j = i + 1
        while j < n and w[j] - w[j - 1] <= EIG_TIE_TOL:
            j += 1
        if j - i > 1:
            block = sorted(
                range(i, j),
                key=lambda k: tuple((z.real, z.imag) for z in v[:, k]),
            )
            w[i:j] = w[block]
            v[:, i:j] = v[:, block]
        i = j
    return w, v


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues inside ``[-1e-10, 1e-10]`` are clamped to zero before taking
    square roots; anything below that window raises.

    Raises
    ------
    NotHermitian
        If ``m`` is not Hermitian within 1e-10.
    NotPsd
        If an eigenvalue lies below -1e-10.
    """
    w, v = hermitian_eig(m)
    if w[0] < -PSD_CLAMP:
        raise NotPsd(f"eigenvalue {w[0]:.3e} below the -{PSD_CLAMP:.0e} clamp window")
    w = np.where(np.abs(w) <= PSD_CLAMP, 0.0, w)
    root = (v * np.sqrt(w)) @ v.conj().T
    return (root + root.conj().T) / 2.0


def pinv_sqrt(m: np.ndarray, rank_tol: float) -> np.ndarray:
    """Inverse square root of a PSD matrix on its support.

    Eigenvalues above ``rank_tol`` contribute ``lambda**-0.5`` on their
    eigenspace; the rest of the spectrum maps to zero.

    Raises
    ------
    NotHermitian
        If ``m`` is not Hermitian within 1e-10.
    NotPsd
        If an eigenvalue lies below -1e-10.
    """
    w, v = hermitian_eig(m)
    if w[0] < -PSD_CLAMP:
        raise NotPsd(f"eigenvalue {w[0]:.3e} below the -{PSD_CLAMP:.0e} clamp window")
    g = np.where(w > rank_tol, 1.0 / np.sqrt(np.where(w > rank_tol, w, 1.0)), 0.0)
    res = (v * g) @ v.conj().T
    return (res + res.conj().T) / 2.0


class StateVector:
    """Normalized pure state on ``num_qubits`` qubits.

    Qubit 0 is the most significant bit of the basis index: on two qubits,
    |q0 q1> lives at index ``2*q0 + q1``.
    """

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, amplitudes) -> None:
        arr = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        n = arr.shape[0]
        if n < 1 or n & (n - 1) != 0:
            raise DimensionMismatch(f"amplitude count {n} is not a power of two")
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("amplitudes contain NaN or Inf")
        norm_sq = float(np.sum(np.abs(arr) ** 2))
        if abs(norm_sq - 1.0) > 1e-12:
            raise ValueError(f"squared norm {norm_sq!r} deviates from 1 by more than 1e-12")
        self.num_qubits = n.bit_length() - 1
        self.amplitudes = arr
        arr.setflags(write=False)

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> "StateVector":
        """Computational basis state |index> on ``num_qubits`` qubits."""
        dim = 1 << num_qubits
        if not 0 <= index < dim:
            raise IndexOutOfRange(f"basis index {index} outside [0, {dim})")
        amps = np.zeros(dim, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps)

    @classmethod
    def normalized(cls, amplitudes) -> "StateVector":
        """Scale an arbitrary nonzero amplitude list to unit norm."""
        arr = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        norm = float(np.linalg.norm(arr))
        if norm < 1e-14:
            raise ZeroVector("cannot normalize a (near-)zero amplitude vector")
        return cls(arr / norm)

    def probabilities(self) -> np.ndarray:
        """Born-rule outcome probabilities over the computational basis."""
        return np.abs(self.amplitudes) ** 2

    def __repr__(self) -> str:
        return f"StateVector(num_qubits={self.num_qubits}, amplitudes={self.amplitudes!r})"
