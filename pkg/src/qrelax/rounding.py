"""Pauli rounding and magic-state rounding of a relaxed state into a cut."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .encoding import AXES, INV_SQRT3, Observable, PauliAxis, QubitAssignment, bloch_to_amplitudes
from .graph import Graph, cut_value
from .sim import (
    HADAMARD,
    I2,
    S_DAG,
    CompiledObservable,
    StateVector,
    index_to_bits,
    sample_batched_bases,
    sample_product_basis,
)

DEFAULT_SHOTS = 1000
ZERO_ESTIMATE = 1e-12
MAGIC_BATCH_AMPLITUDES = 1 << 20

# Sign patterns of the four magic bases, basis index 1..4.
MAGIC_SIGNS = {
    1: (1, 1, 1),
    2: (1, -1, -1),
    3: (-1, 1, -1),
    4: (-1, -1, 1),
}

PAULI_BASIS_ROTATION = {
    PauliAxis.X: HADAMARD,
    PauliAxis.Y: HADAMARD @ S_DAG,
    PauliAxis.Z: I2,
}


@dataclass
class RoundingReport:
    best_bits: np.ndarray
    best_value: float
    mode: str
    per_shot_values: list[float] = field(default_factory=list)
    shot_bits: Optional[np.ndarray] = None


def magic_basis_rotation(i: int) -> np.ndarray:
    """Unitary taking the ``+`` state of magic basis ``i`` to |0> (and ``-`` to |1>)."""
    if i not in MAGIC_SIGNS:
        raise ValueError(f"magic basis index must be 1..4, got {i}")
    psi = bloch_to_amplitudes(np.array(MAGIC_SIGNS[i]) * INV_SQRT3)
    return np.array([[psi[0].conjugate(), psi[1].conjugate()], [-psi[1], psi[0]]])


MAGIC_ROTATIONS = np.stack([magic_basis_rotation(i) for i in (1, 2, 3, 4)])


def magic_decode(basis: int, outcome: int) -> tuple[int, int, int]:
    """(x_X, x_Y, x_Z) bits read from one qubit's magic measurement."""
    flip = -1 if outcome else 1
    return tuple(0 if flip * s > 0 else 1 for s in MAGIC_SIGNS[basis])


def _vertex_bits_from_estimates(est: np.ndarray, rng) -> np.ndarray:
    bits = (est < 0).astype(np.int8)
    zero = np.abs(est) <= ZERO_ESTIMATE
    if zero.any():
        bits[zero] = rng.integers(0, 2, size=int(zero.sum()))
    return bits


def pauli_round(s: StateVector, a: QubitAssignment, g: Graph, mode: Union[str, int] = "exact", rng=None) -> RoundingReport:
    """Decode each vertex from the sign of its assigned Pauli expectation.

    ``mode="exact"`` uses exact expectations; an integer ``mode`` is the shot
    count for each of the three global X, Y and Z measurement passes.
    """
    if s.num_qubits != a.num_qubits:
        raise ValueError(f"state has {s.num_qubits} qubits, assignment needs {a.num_qubits}")
    rng = np.random.default_rng(rng)
    if mode == "exact":
        est = np.array([
            CompiledObservable(Observable(0.0, [(1.0, {a.qubit[v]: a.axis[v]})]), s.num_qubits).expectation(s.amps)
            for v in range(a.num_vertices)
        ])
        label = "pauli-exact"
    else:
        shots = int(mode)
        if shots < 1:
            raise ValueError("shot count must be positive")
        means = {}
        for axis in AXES:
            samples = sample_product_basis(s, [PAULI_BASIS_ROTATION[axis]] * s.num_qubits, shots, rng)
            means[axis] = 1.0 - 2.0 * samples.mean(axis=0)
        est = np.array([means[a.axis[v]][a.qubit[v]] for v in range(a.num_vertices)])
        label = "pauli-shots"
    bits = _vertex_bits_from_estimates(est, rng)
    return RoundingReport(bits, cut_value(g, bits), label)


def _decode_table(a: QubitAssignment):
    # table[basis-1, outcome, vertex's axis] -> bit
    table = np.zeros((4, 2, 3), dtype=np.int8)
    for i in range(4):
        for o in range(2):
            table[i, o] = magic_decode(i + 1, o)
    axis_idx = np.array([AXES.index(ax) for ax in a.axis], dtype=np.int64)
    return table, np.array(a.qubit, dtype=np.int64), axis_idx


def magic_round(
    s_oracle: Union[StateVector, Callable[[], StateVector]],
    a: QubitAssignment,
    g: Graph,
    shots: int = DEFAULT_SHOTS,
    rng=None,
    keep_shots: bool = False,
) -> RoundingReport:
    """Measure every qubit in an independently drawn magic basis, ``shots`` times.

    The relaxed state is pure, so it is prepared once and each shot samples
    its own rotated distribution. Randomness is consumed in chunks whose size
    depends only on the qubit count, so a longer run extends a shorter one
    with the same seed. ``keep_shots`` retains every decoded bitstring.
    """
    if shots < 1:
        raise ValueError("shot count must be positive")
    s = s_oracle() if callable(s_oracle) else s_oracle
    if s.num_qubits != a.num_qubits:
        raise ValueError(f"state has {s.num_qubits} qubits, assignment needs {a.num_qubits}")
    rng = np.random.default_rng(rng)
    q = s.num_qubits
    table, vq, vax = _decode_table(a)
    u, v, w = g.edge_arrays()
    values = []
    kept = []
    best_bits, best_value = None, -np.inf
    chunk = max(1, min(1024, MAGIC_BATCH_AMPLITUDES >> q))
    done = 0
    while done < shots:
        bases = rng.integers(0, 4, size=(chunk, q))
        outcomes = index_to_bits(sample_batched_bases(s.amps, q, MAGIC_ROTATIONS[bases], rng), q)
        take = min(chunk, shots - done)
        bases, outcomes = bases[:take], outcomes[:take]
        vertex_bits = table[bases[:, vq], outcomes[:, vq], vax]
        cuts = (vertex_bits[:, u] != vertex_bits[:, v]) @ w if len(w) else np.zeros(take)
        values.extend(float(c) for c in cuts)
        if keep_shots:
            kept.append(vertex_bits)
        k = int(np.argmax(cuts))
        if cuts[k] > best_value:
            best_value, best_bits = float(cuts[k]), vertex_bits[k].copy()
        done += take
    shot_bits = np.concatenate(kept) if keep_shots else None
    return RoundingReport(best_bits, cut_value(g, best_bits), "magic", values, shot_bits)
