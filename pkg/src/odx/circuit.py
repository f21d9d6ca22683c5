"""Gate-level circuits and statevector simulation.

Gates are listed in temporal order; the circuit unitary is therefore the
reversed matrix product (later gates multiply on the left).  Qubit 0 is the
most significant basis bit, matching :class:`odx.linalg.StateVector`, so a
single-qubit gate on qubit q embeds as I(2^q) (x) u (x) I(2^(width-q-1)).

R_y follows the real-rotation convention

    R_y(theta) = [[cos(theta/2), -sin(theta/2)],
                  [sin(theta/2),  cos(theta/2)]]

i.e. exp(-i theta Y / 2); all closed-form angles in :mod:`odx.protocol`
assume it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, WidthMismatch
from .linalg import StateVector, kron
from .oracle import BoolFunc, oracle_unitary

_H = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0)
_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)


def ry_matrix(theta: float) -> np.ndarray:
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


@dataclass(frozen=True)
class Gate:
    """One gate: kind in {"h", "x", "ry", "cnot", "oracle"}.

    ``qubits`` holds the target (and control first for "cnot"); an oracle
    call carries its function in ``func`` and acts on the leading
    ``func.num_qubits`` qubits of the register.
    """

    kind: str
    qubits: tuple[int, ...]
    theta: float = 0.0
    func: BoolFunc | None = None


def h(q: int) -> Gate:
    return Gate("h", (q,))


def x(q: int) -> Gate:
    return Gate("x", (q,))


def ry(q: int, theta: float) -> Gate:
    return Gate("ry", (q,), theta=float(theta))


def cnot(control: int, target: int) -> Gate:
    if control == target:
        raise ValueError(f"control and target coincide (qubit {control})")
    return Gate("cnot", (control, target))


def oracle_call(f: BoolFunc) -> Gate:
    return Gate("oracle", (), func=f)


@dataclass(frozen=True)
class Circuit:
    """Fixed-width register with gates applied in list order."""

    num_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.num_qubits < 1:
            raise ValueError(f"register width must be positive, got {self.num_qubits}")
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.num_qubits:
                    raise IndexOutOfRange(
                        f"{g.kind} gate touches qubit {q}, register has {self.num_qubits}"
                    )
            if g.kind == "oracle" and g.func.num_qubits > self.num_qubits:
                raise IndexOutOfRange(
                    f"oracle needs {g.func.num_qubits} qubits, register has {self.num_qubits}"
                )


def _embed_single(u: np.ndarray, q: int, num_qubits: int) -> np.ndarray:
    left = np.eye(1 << q, dtype=np.complex128)
    right = np.eye(1 << (num_qubits - q - 1), dtype=np.complex128)
    return kron(kron(left, u), right)


@lru_cache(maxsize=4096)
def _gate_matrix(g: Gate, num_qubits: int) -> np.ndarray:
    if g.kind == "h":
        u = _embed_single(_H, g.qubits[0], num_qubits)
    elif g.kind == "x":
        u = _embed_single(_X, g.qubits[0], num_qubits)
    elif g.kind == "ry":
        u = _embed_single(ry_matrix(g.theta), g.qubits[0], num_qubits)
    elif g.kind == "cnot":
        control, target = g.qubits
        dim = 1 << num_qubits
        cbit = 1 << (num_qubits - 1 - control)
        tbit = 1 << (num_qubits - 1 - target)
        u = np.zeros((dim, dim), dtype=np.complex128)
        for i in range(dim):
            j = i ^ tbit if i & cbit else i
            u[j, i] = 1.0
    elif g.kind == "oracle":
        rest = np.eye(1 << (num_qubits - g.func.num_qubits), dtype=np.complex128)
        u = kron(oracle_unitary(g.func), rest)
    else:
        raise ValueError(f"unknown gate kind {g.kind!r}")
    u.setflags(write=False)
    return u


def gate_matrix(g: Gate, num_qubits: int) -> np.ndarray:
    """Full-register unitary of one gate under the q0-most-significant order.

    Gates are immutable, so matrices are memoized per (gate, width); the
    returned array is read-only.
    """
    for q in g.qubits:
        if not 0 <= q < num_qubits:
            raise IndexOutOfRange(
                f"{g.kind} gate touches qubit {q}, register has {num_qubits}"
            )
    if g.kind == "oracle" and g.func.num_qubits > num_qubits:
        raise IndexOutOfRange(
            f"oracle needs {g.func.num_qubits} qubits, register has {num_qubits}"
        )
    return _gate_matrix(g, num_qubits)


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Product of the gate matrices in application order."""
    u = np.eye(1 << c.num_qubits, dtype=np.complex128)
    for g in c.gates:
        u = gate_matrix(g, c.num_qubits) @ u
    return u


def apply(c: Circuit, s: StateVector) -> StateVector:
    """Run the circuit on a state, one gate at a time."""
    if s.num_qubits != c.num_qubits:
        raise WidthMismatch(
            f"state has {s.num_qubits} qubits, circuit has {c.num_qubits}"
        )
    amps = s.amplitudes.copy()
    for g in c.gates:
        amps = gate_matrix(g, c.num_qubits) @ amps
    return StateVector(amps)


def phase_aligned_difference(u: np.ndarray, v: np.ndarray) -> tuple[complex, np.ndarray]:
    """Unit phase c anchored at v's largest entry, and the residual u - c*v."""
    a = np.asarray(u, dtype=np.complex128)
    b = np.asarray(v, dtype=np.complex128)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape {a.shape} vs {b.shape}")
    flat = int(np.argmax(np.abs(b)))
    i, j = np.unravel_index(flat, b.shape)
    pivot = b[i, j]
    if abs(pivot) == 0.0:
        return 1.0 + 0.0j, a - b
    c = a[i, j] / pivot
    if abs(c) < 1e-12:
        c = 1.0 + 0.0j
    else:
        c = c / abs(c)
    return complex(c), a - c * b


def equal_up_to_global_phase(u: np.ndarray, v: np.ndarray, tol: float = 1e-10) -> bool:
    """Whether u = c*v within tol entrywise for some unit complex c."""
    a = np.asarray(u, dtype=np.complex128)
    b = np.asarray(v, dtype=np.complex128)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape {a.shape} vs {b.shape}")
    if float(np.max(np.abs(b))) <= tol:
        return bool(np.max(np.abs(a)) <= tol)
    _, diff = phase_aligned_difference(a, b)
    return bool(np.max(np.abs(diff)) <= tol)
