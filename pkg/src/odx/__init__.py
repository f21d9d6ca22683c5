"""Minimum-error one-query identification of Boolean oracles.

The package builds the closed-form two-qubit protocol that identifies a
hidden one-bit function in a single oracle query with the best possible
average success of 3/4, certifies its optimality numerically, and
rediscovers the optimum by independent search.  See the README for the
CLI (``odx verify`` and friends) and file formats.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND
from .circuit import (
    Circuit,
    Gate,
    apply,
    circuit_unitary,
    cnot,
    equal_up_to_global_phase,
    gate_matrix,
    h,
    oracle_call,
    ry,
    x,
)
from .discrim import (
    DiscriminationReport,
    Ensemble,
    Povm,
    check_gu,
    classical_one_query_best,
    gram,
    measurement_from_unitary,
    optimality_conditions,
    srm,
    srm_success_gu,
    success_probability,
)
from .errors import OdxError, ParseError
from .linalg import (
    StateVector,
    hermitian_eig,
    is_hermitian,
    is_psd,
    is_unitary,
    kron,
    pinv_sqrt,
    psd_sqrt,
)
from .optimize import OptimizationResult, objective, optimize_probe, random_probe_scan
from .oracle import (
    BoolFunc,
    OracleFamily,
    canonical_one_bit_family,
    enumerate_functions,
    full_family,
    oracle_unitary,
    parse_family,
    parse_truth_table,
    post_oracle_states,
)
from .protocol import (
    ProtocolConstants,
    constants,
    gate_counts,
    probe_state,
    prep_circuit,
    protocol_circuit,
    protocol_distribution,
    readout_circuit,
    readout_matrix,
)
from .sample import (
    SampleSummary,
    ShotRecord,
    iter_shots,
    run_shots,
    run_shots_fixed,
    sample_outcomes,
)
