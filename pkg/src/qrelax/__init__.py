"""Quantum relaxation for MaxCut: (3,1) code encoding, VQE and rounding."""

from .encoding import (
    Observable,
    PauliAxis,
    QubitAssignment,
    assign_qubits,
    build_diagonal_hamiltonian,
    build_relaxed_hamiltonian,
    encode_classical_state,
)
from .graph import (
    CutSolution,
    Graph,
    assign_random_signs,
    brute_force_max_cut,
    cut_value,
    generate_regular,
    greedy_color,
    read_graph,
    write_graph,
)
from .rounding import RoundingReport, magic_basis_rotation, magic_round, pauli_round
from .sim import CNOT, U1q, Ry, Rz, StateVector, apply_gate, expectation, init_zero, sample_product_basis
from .vqe import (
    AnsatzSpec,
    EntanglementPattern,
    VqeResult,
    build_ansatz,
    nft_optimize,
    prepare_state,
)

__version__ = "0.1.0"
