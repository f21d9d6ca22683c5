import math

import numpy as np
import pytest

from odx import rng
from odx.circuit import (
    Circuit,
    apply,
    circuit_unitary,
    cnot,
    equal_up_to_global_phase,
    gate_matrix,
    h,
    oracle_call,
    phase_aligned_difference,
    ry,
    ry_matrix,
    x,
)
from odx.errors import DimensionMismatch, IndexOutOfRange, WidthMismatch
from odx.linalg import StateVector, is_unitary, kron
from odx.oracle import BoolFunc, oracle_unitary
from odx.protocol import constants, probe_state

H2 = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)
X2 = np.array([[0, 1], [1, 0]], dtype=np.complex128)


class TestGateMatrix:
    def test_cnot_msb_control_swaps_2_3(self):
        u = gate_matrix(cnot(0, 1), 2)
        perm = [int(np.argmax(np.abs(u[:, i]))) for i in range(4)]
        assert perm == [0, 1, 3, 2]

    def test_cnot_lsb_control_swaps_1_3(self):
        u = gate_matrix(cnot(1, 0), 2)
        perm = [int(np.argmax(np.abs(u[:, i]))) for i in range(4)]
        assert perm == [0, 3, 2, 1]

    def test_h_on_second_qubit_is_ixh(self):
        assert np.allclose(gate_matrix(h(1), 2), kron(np.eye(2), H2), atol=1e-15)

    def test_ry_prepares_probe_second_amplitudes(self):
        c = constants()
        out = ry_matrix(c.theta0) @ np.array([1.0, 0.0])
        assert abs(out[0] - math.sqrt(2) * c.a) < 1e-15
        assert abs(out[1] - math.sqrt(2) * c.b) < 1e-15

    def test_oracle_gate_embeds_on_leading_qubits(self):
        f = BoolFunc(1, 1, (0, 1))
        u = gate_matrix(oracle_call(f), 3)
        assert np.array_equal(u, kron(oracle_unitary(f), np.eye(2)))

    def test_index_guard(self):
        with pytest.raises(IndexOutOfRange):
            gate_matrix(h(2), 2)

    def test_cnot_rejects_equal_qubits(self):
        with pytest.raises(ValueError):
            cnot(1, 1)

    def test_cnot_equals_oracle_of_identity_bit(self):
        assert np.array_equal(gate_matrix(cnot(0, 1), 2), oracle_unitary(BoolFunc(1, 1, (0, 1))))


class TestCircuitUnitary:
    def test_empty_is_identity(self):
        assert np.array_equal(circuit_unitary(Circuit(2, ())), np.eye(4))

    def test_hadamard_involution(self):
        u = circuit_unitary(Circuit(1, (h(0), h(0))))
        assert np.max(np.abs(u - np.eye(2))) < 1e-15

    def test_application_order_is_left_to_right(self):
        # X then H on one qubit: matrix must be H @ X
        u = circuit_unitary(Circuit(1, (x(0), h(0))))
        assert np.allclose(u, H2 @ X2, atol=1e-15)

    def test_unitarity_of_random_circuits(self):
        for i in range(20):
            circ = _random_circuit(2 + i % 3, 12, 5000 + i)
            assert is_unitary(circuit_unitary(circ), 1e-10)

    def test_gate_index_validated_at_construction(self):
        with pytest.raises(IndexOutOfRange):
            Circuit(1, (cnot(0, 1),))


class TestApply:
    def test_x_on_msb(self):
        out = apply(Circuit(2, (x(0),)), StateVector.basis(2, 0))
        assert out.amplitudes[2] == 1.0

    def test_oracle_on_probe(self):
        c = constants()
        out = apply(Circuit(2, (oracle_call(BoolFunc(1, 1, (0, 1))),)), probe_state())
        expected = np.array([c.a, c.b, c.b, c.a])
        assert np.max(np.abs(out.amplitudes - expected)) < 1e-15

    def test_width_checked(self):
        with pytest.raises(WidthMismatch):
            apply(Circuit(2, ()), StateVector.basis(1, 0))

    def test_matches_unitary_on_random_circuits(self):
        # acceptance-grade property: >= 100 random circuits
        count = 0
        for i in range(105):
            num_qubits = 2 + i % 3
            circ = _random_circuit(num_qubits, 10, 31_000 + i)
            state = _random_state(num_qubits, 62_000 + i)
            via_apply = apply(circ, state).amplitudes
            via_matrix = circuit_unitary(circ) @ state.amplitudes
            assert np.max(np.abs(via_apply - via_matrix)) < 1e-10
            count += 1
        assert count >= 100

    def test_norm_preserved(self):
        for i in range(10):
            circ = _random_circuit(3, 15, 91_000 + i)
            out = apply(circ, _random_state(3, 17_000 + i))
            assert abs(float(np.sum(np.abs(out.amplitudes) ** 2)) - 1.0) < 1e-12


class TestGlobalPhase:
    def test_negated_matrix_matches(self):
        assert equal_up_to_global_phase(-H2, H2, 1e-12)

    def test_imaginary_phase_matches(self):
        assert equal_up_to_global_phase(1j * H2, H2, 1e-12)

    def test_same_matrix_matches(self):
        assert equal_up_to_global_phase(H2, H2, 1e-12)

    def test_different_matrices_do_not(self):
        assert not equal_up_to_global_phase(H2, X2, 1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            equal_up_to_global_phase(H2, np.eye(4), 1e-12)

    def test_phase_anchored_at_largest_entry(self):
        phase, diff = phase_aligned_difference(np.exp(0.3j) * H2, H2)
        assert abs(phase - np.exp(0.3j)) < 1e-12
        assert np.max(np.abs(diff)) < 1e-12

    def test_zero_matrices(self):
        z = np.zeros((2, 2))
        assert equal_up_to_global_phase(z, z, 1e-12)
        assert not equal_up_to_global_phase(H2, z, 1e-12)


def _random_state(num_qubits, seed):
    dim = 1 << num_qubits
    z = rng.gauss_block(seed, 0, 2 * dim)
    return StateVector.normalized(z[0::2] + 1j * z[1::2])


def _random_circuit(num_qubits, depth, seed):
    # mixes every gate kind, including an oracle on the leading qubits
    gates = []
    u = rng.uniform_block(seed, 0, 3 * depth)
    for i in range(depth):
        kind = int(u[3 * i] * 5)
        q = int(u[3 * i + 1] * num_qubits)
        if kind == 0:
            gates.append(h(q))
        elif kind == 1:
            gates.append(x(q))
        elif kind == 2:
            gates.append(ry(q, 2.0 * math.pi * u[3 * i + 2]))
        elif kind == 3:
            other = (q + 1 + int(u[3 * i + 2] * (num_qubits - 1))) % num_qubits
            if other == q:
                other = (q + 1) % num_qubits
            gates.append(cnot(q, other))
        else:
            table_bits = int(u[3 * i + 2] * 4)
            gates.append(oracle_call(BoolFunc(1, 1, (table_bits & 1, (table_bits >> 1) & 1))))
    return Circuit(num_qubits, tuple(gates))
