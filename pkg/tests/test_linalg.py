import math

import numpy as np
import pytest

from odx import rng
from odx.errors import DimensionMismatch, IndexOutOfRange, NotHermitian, NotPsd, ZeroVector
from odx.linalg import (
    StateVector,
    hermitian_eig,
    is_hermitian,
    is_psd,
    is_unitary,
    kron,
    pinv_sqrt,
    psd_sqrt,
)

I2 = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)


def random_hermitian(n, seed):
    re = rng.gauss_block(seed, 0, n * n).reshape(n, n)
    im = rng.gauss_block(seed + 1, 0, n * n).reshape(n, n)
    a = re + 1j * im
    return (a + a.conj().T) / 2.0


def random_psd(n, seed):
    a = random_hermitian(n, seed)
    return a @ a.conj().T


class TestKron:
    def test_identity_times_x_swaps_pairs(self):
        m = kron(I2, X)
        v = np.zeros(4)
        v[0] = 1.0
        assert np.array_equal(m @ v, np.eye(4)[1])
        v = np.zeros(4)
        v[2] = 1.0
        assert np.array_equal(m @ v, np.eye(4)[3])

    def test_identity_squared(self):
        assert np.array_equal(kron(I2, I2), np.eye(4))

    def test_hadamard_pair_on_00(self):
        state = np.zeros(4, dtype=np.complex128)
        state[0] = 1.0
        out = kron(H, H) @ state
        assert np.allclose(out, 0.5 * np.ones(4), atol=1e-15)

    def test_associativity_on_random_triples(self):
        for i in range(100):
            a = rng.gauss_block(10 + i, 0, 4).reshape(2, 2) + 1j * rng.gauss_block(
                1000 + i, 0, 4
            ).reshape(2, 2)
            b = rng.gauss_block(20 + i, 0, 4).reshape(2, 2) + 1j * rng.gauss_block(
                2000 + i, 0, 4
            ).reshape(2, 2)
            c = rng.gauss_block(30 + i, 0, 4).reshape(2, 2) + 1j * rng.gauss_block(
                3000 + i, 0, 4
            ).reshape(2, 2)
            left = kron(kron(a, b), c)
            right = kron(a, kron(b, c))
            assert np.max(np.abs(left - right)) < 1e-12

    def test_rejects_non_square(self):
        with pytest.raises(DimensionMismatch):
            kron(np.ones((2, 3)), I2)


class TestPredicates:
    def test_unitary(self):
        assert is_unitary(H)
        assert not is_unitary(np.array([[1, 1], [0, 1]], dtype=complex))

    def test_hermitian(self):
        assert is_hermitian(X)
        assert not is_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_psd(self):
        assert is_psd(np.diag([1.0, 0.0]))
        assert not is_psd(np.diag([1.0, -1.0]))

    def test_nan_rejected(self):
        bad = np.array([[np.nan, 0], [0, 1]], dtype=complex)
        with pytest.raises(ValueError):
            is_hermitian(bad)


class TestHermitianEig:
    def test_diagonal_sorted_ascending(self):
        w, _ = hermitian_eig(np.diag([2.0, 1.0]))
        assert np.allclose(w, [1.0, 2.0], atol=1e-14)

    def test_pauli_x_spectrum(self):
        w, _ = hermitian_eig(X)
        assert np.allclose(w, [-1.0, 1.0], atol=1e-14)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_reconstruction_and_orthonormality(self):
        for i in range(25):
            n = 2 + i % 7
            a = random_hermitian(n, 500 + 13 * i)
            w, v = hermitian_eig(a)
            assert np.max(np.abs((v * w) @ v.conj().T - a)) < 1e-9
            assert np.max(np.abs(v.conj().T @ v - np.eye(n))) < 1e-9
            assert np.all(np.diff(w) >= -1e-9)
            for j in range(n):
                assert np.max(np.abs(a @ v[:, j] - w[j] * v[:, j])) < 1e-9

    def test_phase_canonicalization(self):
        a = random_hermitian(5, 901)
        _, v = hermitian_eig(a)
        for j in range(5):
            col = v[:, j]
            lead = next(z for z in col if abs(z) > 1e-12)
            assert abs(lead.imag) < 1e-10
            assert lead.real > 0

    def test_deterministic_on_repeat(self):
        a = random_hermitian(6, 333)
        w1, v1 = hermitian_eig(a)
        w2, v2 = hermitian_eig(a)
        assert np.array_equal(w1, w2)
        assert np.array_equal(v1, v2)

    def test_matches_numpy_spectrum(self):
        for i in range(10):
            a = random_hermitian(8, 7000 + i)
            w, _ = hermitian_eig(a)
            assert np.max(np.abs(w - np.linalg.eigvalsh(a))) < 1e-10


class TestPsdSqrt:
    def test_diagonal(self):
        assert np.allclose(psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-12)

    def test_identity(self):
        assert np.allclose(psd_sqrt(np.eye(3)), np.eye(3), atol=1e-12)

    def test_square_recovers_input(self):
        for i in range(20):
            n = 2 + i % 5
            m = random_psd(n, 4000 + 11 * i)
            r = psd_sqrt(m)
            assert np.max(np.abs(r @ r - m)) < 1e-9
            assert is_hermitian(r, 1e-12)

    def test_clamps_tiny_negative(self):
        m = np.diag([1.0, -5e-11])
        r = psd_sqrt(m)
        assert r[1, 1] == 0.0

    def test_clamps_tiny_positive_to_zero(self):
        # sqrt of assembly noise must not leak 1e-8 into the result
        r = psd_sqrt(np.diag([1.0, 1e-16]))
        assert r[1, 1] == 0.0

    def test_rejects_indefinite(self):
        with pytest.raises(NotPsd):
            psd_sqrt(np.diag([1.0, -1e-9]))


class TestPinvSqrt:
    def test_diagonal_with_null_space(self):
        out = pinv_sqrt(np.diag([4.0, 0.0]), 1e-10)
        assert np.allclose(out, np.diag([0.5, 0.0]), atol=1e-14)

    def test_identity(self):
        assert np.allclose(pinv_sqrt(np.eye(3), 1e-10), np.eye(3), atol=1e-14)

    def test_commutes_with_input(self):
        for i in range(10):
            m = random_psd(5, 6000 + i)
            s = pinv_sqrt(m, 1e-10)
            assert np.max(np.abs(s @ m - m @ s)) < 1e-9

    def test_inverse_square_on_support(self):
        m = random_psd(4, 6100)
        s = pinv_sqrt(m, 1e-10)
        # s^2 m is the support projector, so applying it to m returns m
        assert np.max(np.abs(s @ s @ m - m @ s @ s)) < 1e-9
        assert np.max(np.abs((s @ s @ m) @ m - m)) < 1e-8

    def test_rejects_indefinite(self):
        with pytest.raises(NotPsd):
            pinv_sqrt(np.diag([1.0, -1.0]), 1e-10)


class TestStateVector:
    def test_basis_msb_convention(self):
        s = StateVector.basis(2, 2)
        # index 2 is |10>: qubit 0 (most significant) is 1
        assert s.amplitudes[2] == 1.0
        assert s.num_qubits == 2

    def test_norm_enforced(self):
        with pytest.raises(ValueError):
            StateVector([1.0 + 1e-6, 0.0])

    def test_power_of_two_enforced(self):
        with pytest.raises(DimensionMismatch):
            StateVector([1.0, 0.0, 0.0])

    def test_basis_index_range(self):
        with pytest.raises(IndexOutOfRange):
            StateVector.basis(2, 4)

    def test_normalized_constructor(self):
        s = StateVector.normalized([3.0, 4.0])
        assert np.allclose(s.amplitudes, [0.6, 0.8], atol=1e-15)

    def test_normalized_rejects_zero(self):
        with pytest.raises(ZeroVector):
            StateVector.normalized([0.0, 0.0])

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            StateVector([np.nan, 0.0])

    def test_probabilities(self):
        s = StateVector.normalized([1.0, 1.0j])
        assert np.allclose(s.probabilities(), [0.5, 0.5], atol=1e-15)

    def test_amplitudes_read_only(self):
        s = StateVector.basis(1, 0)
        with pytest.raises(ValueError):
            s.amplitudes[0] = 0.0
