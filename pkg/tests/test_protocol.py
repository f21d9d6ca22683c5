import math

import numpy as np
import pytest

from odx.circuit import apply, circuit_unitary, equal_up_to_global_phase
from odx.discrim import srm, success_probability
from odx.errors import UnsupportedShape
from odx.linalg import StateVector, is_unitary
from odx.oracle import BoolFunc, canonical_one_bit_family, post_oracle_states
from odx.protocol import (
    OUTCOME_COUNT,
    constants,
    gate_counts,
    prep_circuit,
    probe_schmidt_residual,
    probe_state,
    protocol_circuit,
    protocol_distribution,
    readout_circuit,
    readout_matrix,
)


class TestConstants:
    def test_closed_forms(self):
        c = constants()
        r2, r3 = math.sqrt(2), math.sqrt(3)
        assert abs(c.a - (1 + r2) / (2 * r3)) < 1e-15
        assert abs(c.b - (1 - r2) / (2 * r3)) < 1e-15
        assert abs(c.gamma - 1 / (2 * r2)) < 1e-15
        assert abs(c.alpha - (0.5 + c.gamma)) < 1e-15
        assert abs(c.beta - (0.5 - c.gamma)) < 1e-15

    def test_probe_normalization_identity(self):
        c = constants()
        assert abs(2 * c.a**2 + 2 * c.b**2 - 1.0) < 1e-15

    def test_rotation_angle_prepares_amplitude_ratio(self):
        # sin(theta0/2) = (sqrt 2 - 2) / (2 sqrt 3) = b * sqrt 2
        c = constants()
        assert abs(math.sin(c.theta0 / 2.0) - c.b * math.sqrt(2)) < 1e-15
        assert abs(math.cos(c.theta0 / 2.0) - c.a * math.sqrt(2)) < 1e-15

    def test_readout_angles(self):
        c = constants()
        expected = (-3 * math.pi / 4, -math.pi / 2, math.pi / 4, math.pi / 2)
        got = (c.theta1, c.theta2, c.theta3, c.theta4)
        assert got == expected


class TestProbe:
    def test_amplitudes(self):
        c = constants()
        amps = probe_state().amplitudes
        assert np.max(np.abs(amps - np.array([c.a, c.b, c.a, c.b]))) < 1e-15

    def test_prep_circuit_reaches_probe(self):
        out = apply(prep_circuit(), StateVector.basis(2, 0))
        assert np.max(np.abs(out.amplitudes - probe_state().amplitudes)) < 1e-12

    def test_prep_uses_no_entangling_gate(self):
        assert all(g.kind in ("h", "ry") for g in prep_circuit().gates)

    def test_schmidt_residual_is_exactly_zero(self):
        assert probe_schmidt_residual() == 0.0


class TestReadout:
    def test_matrix_is_unitary(self):
        assert is_unitary(readout_matrix(), 1e-12)

    def test_matrix_entries(self):
        c = constants()
        u = readout_matrix()
        assert abs(u[0, 0] - c.gamma) < 1e-15
        assert abs(u[0, 2] - c.alpha) < 1e-15
        assert abs(u[2, 1] - c.beta) < 1e-15
        assert abs(u[3, 3] + c.gamma) < 1e-15

    def test_circuit_realizes_matrix(self):
        u = circuit_unitary(readout_circuit())
        assert equal_up_to_global_phase(u, readout_matrix(), 1e-10)

    def test_perturbed_circuit_does_not(self):
        u = circuit_unitary(readout_circuit(theta_offsets=[0.1, 0.0, 0.0, 0.0]))
        assert not equal_up_to_global_phase(u, readout_matrix(), 1e-10)

    def test_offsets_validated(self):
        with pytest.raises(ValueError):
            readout_circuit(theta_offsets=[0.1, 0.2])

    def test_zero_offsets_change_nothing(self):
        u0 = circuit_unitary(readout_circuit())
        u1 = circuit_unitary(readout_circuit(theta_offsets=[0.0] * 4))
        assert np.array_equal(u0, u1)

    def test_rows_map_hypothesis_states_to_outcomes(self):
        ens = post_oracle_states(probe_state(), canonical_one_bit_family())
        u = readout_matrix()
        for i in range(4):
            overlap = abs(u[i] @ ens.states[i]) ** 2
            assert abs(overlap - 0.75) < 1e-12


class TestFullProtocol:
    def test_distribution_of_constant_zero(self):
        probs = protocol_distribution(BoolFunc(1, 1, (0, 0)))
        expected = [0.75, 1 / 12, 1 / 12, 1 / 12]
        assert np.max(np.abs(np.array(probs) - expected)) < 1e-12

    def test_each_hypothesis_lands_on_its_outcome(self):
        fam = canonical_one_bit_family()
        diag = []
        for i, f in enumerate(fam.members):
            probs = protocol_distribution(f)
            assert len(probs) == OUTCOME_COUNT
            assert abs(sum(probs) - 1.0) < 1e-12
            diag.append(probs[i])
        for p in diag:
            assert abs(p - 0.75) < 1e-12
        average = sum(p * q for p, q in zip(fam.priors, diag))
        assert abs(average - 0.75) < 1e-12

    def test_matches_square_root_measurement(self):
        fam = canonical_one_bit_family()
        ens = post_oracle_states(probe_state(), fam)
        report = success_probability(ens, srm(ens))
        for f, expected in zip(fam.members, report.per_hypothesis_success):
            i = fam.members.index(f)
            assert abs(protocol_distribution(f)[i] - expected) < 1e-9

    def test_rejects_wider_functions(self):
        with pytest.raises(UnsupportedShape):
            protocol_circuit(BoolFunc(2, 1, (0, 0, 0, 0)))

    def test_gate_counts(self):
        counts = gate_counts()
        assert counts == {
            "prep": {"h": 1, "ry": 1, "cnot": 0},
            "readout": {"h": 2, "ry": 4, "cnot": 2},
            "two_qubit_total": 2,
        }

    def test_circuit_gate_sequence(self):
        circ = protocol_circuit(BoolFunc(1, 1, (0, 1)))
        kinds = [g.kind for g in circ.gates]
        assert kinds.count("oracle") == 1
        assert kinds.index("oracle") == 2  # after the two prep gates
        assert circ.num_qubits == 2
