"""The worked two-qubit identification protocol in closed form.

One query suffices to identify an unknown one-bit function drawn uniformly
from {constant 0, constant 1, identity, NOT} with average success 3/4:
prepare a fixed product probe, query the oracle once, apply a fixed
two-qubit readout unitary, and read the computational basis; outcome m is
the guess for hypothesis m.

Every constant here is built from its closed-form expression (square roots
and arcsin evaluated at runtime, never decimal literals), so derived
quantities agree with the constructions to machine precision.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, apply, cnot, h, oracle_call, ry
from .errors import UnsupportedShape
from .linalg import StateVector
from .oracle import BoolFunc

OUTCOME_COUNT = 4


@dataclass(frozen=True)
class ProtocolConstants:
    """Closed-form amplitudes, readout-matrix entries, and rotation angles.

    The probe is (a, b, a, b).  The readout matrix is built from
    gamma = 1/(2*sqrt(2)), alpha = 1/2 + gamma, beta = 1/2 - gamma.
    theta0 prepares the probe's second-qubit rotation; theta1..theta4 are
    the rotation angles of the two-CNOT readout realization.
    """

    a: float
    b: float
    gamma: float
    alpha: float
    beta: float
    theta0: float
    theta1: float
    theta2: float
    theta3: float
    theta4: float


def constants() -> ProtocolConstants:
    r2 = math.sqrt(2.0)
    r3 = math.sqrt(3.0)
    gamma = 1.0 / (2.0 * r2)
    return ProtocolConstants(
        a=(1.0 + r2) / (2.0 * r3),
        b=(1.0 - r2) / (2.0 * r3),
        gamma=gamma,
        alpha=0.5 + gamma,
        beta=0.5 - gamma,
        theta0=2.0 * math.asin((r2 - 2.0) / (2.0 * r3)),
        theta1=-3.0 * math.pi / 4.0,
        theta2=-math.pi / 2.0,
        theta3=math.pi / 4.0,
        theta4=math.pi / 2.0,
    )


def probe_state() -> StateVector:
    """The optimal probe (a, b, a, b); a product state, no entangling gate."""
    c = constants()
    return StateVector([c.a, c.b, c.a, c.b])


def prep_circuit() -> Circuit:
    """Probe preparation from |00>: H on the input qubit, R_y on the output."""
    c = constants()
    return Circuit(2, (h(0), ry(1, c.theta0)))


def readout_matrix() -> np.ndarray:
    """The 4x4 readout unitary mapping hypothesis states onto basis outcomes."""
    c = constants()
    g, al, be = c.gamma, c.alpha, c.beta
    return np.array(
        [
            [g, -g, al, be],
            [-g, g, be, al],
            [al, be, -g, g],
            [be, al, g, -g],
        ],
        dtype=np.complex128,
    )


def readout_circuit(theta_offsets=None) -> Circuit:
    """Two-CNOT realization of the readout unitary.

    ``theta_offsets``, when given, adds four perturbations to the rotation
    angles; the default realizes the readout matrix up to global phase.
    """
    c = constants()
    angles = [c.theta1, c.theta2, c.theta3, c.theta4]
    if theta_offsets is not None:
        offsets = [float(v) for v in theta_offsets]
        if len(offsets) != 4:
            raise ValueError(f"need 4 angle offsets, got {len(offsets)}")
        angles = [t + d for t, d in zip(angles, offsets)]
    t1, t2, t3, t4 = angles
    return Circuit(
        2,
        (
            h(1),
            cnot(1, 0),
            ry(0, t1),
            ry(1, t2),
            cnot(0, 1),
            ry(0, t3),
            ry(1, t4),
            h(1),
        ),
    )


def protocol_circuit(f: BoolFunc) -> Circuit:
    """Preparation, one oracle call, readout: the full identification circuit."""
    if f.n != 1 or f.m != 1:
        raise UnsupportedShape(
            f"protocol circuit is defined for n=m=1 functions, got n={f.n}, m={f.m}"
        )
    gates = prep_circuit().gates + (oracle_call(f),) + readout_circuit().gates
    return Circuit(2, gates)


def protocol_distribution(f: BoolFunc) -> list[float]:
    """Outcome probabilities of the full circuit on |00>, one per hypothesis."""
    out = apply(protocol_circuit(f), StateVector.basis(2, 0))
    return [float(p) for p in out.probabilities()]


def _kind_counts(circ: Circuit) -> Counter:
    return Counter(g.kind for g in circ.gates)


def gate_counts() -> dict:
    """Gate counts scanned from the preparation and readout circuits.

    Two-qubit total excludes the oracle call itself.
    """
    prep = _kind_counts(prep_circuit())
    readout = _kind_counts(readout_circuit())
    return {
        "prep": {"h": prep["h"], "ry": prep["ry"], "cnot": prep["cnot"]},
        "readout": {"h": readout["h"], "ry": readout["ry"], "cnot": readout["cnot"]},
        "two_qubit_total": prep["cnot"] + readout["cnot"],
    }


def probe_schmidt_residual() -> float:
    """Second singular value of the probe's 2x2 amplitude matrix.

    Computed as |det| / s_max, which is exact for 2x2 matrices and avoids
    the floating-point noise floor of the small eigenvalue of M^dagger M;
    zero means the probe is a product state.
    """
    amps = probe_state().amplitudes
    m = amps.reshape(2, 2)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    g = m.conj().T @ m
    mean = (g[0, 0].real + g[1, 1].real) / 2.0
    radius = math.hypot((g[0, 0].real - g[1, 1].real) / 2.0, abs(g[0, 1]))
    return float(abs(det) / math.sqrt(mean + radius))
