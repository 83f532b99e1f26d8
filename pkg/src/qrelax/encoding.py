"""(3,1) random-access-code encoding of MaxCut onto qubits.

Each qubit carries up to three same-colored vertices on the X, Y and Z axes.
Qubits holding fewer than three vertices are still encoded as full
three-bit code states, with the unused axes fixed as if their bit were 0;
this keeps the relaxed energy of every encoded bitstring equal to its cut.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .graph import Graph, is_proper_coloring
from .sim import StateVector

INV_SQRT3 = 1.0 / np.sqrt(3.0)


class PauliAxis(str, Enum):
    X = "X"
    Y = "Y"
    Z = "Z"

    def __str__(self):
        return self.value


AXES = (PauliAxis.X, PauliAxis.Y, PauliAxis.Z)


@dataclass(frozen=True)
class QubitAssignment:
    """Vertex ``i`` lives on ``qubit[i]`` along ``axis[i]``."""

    qubit: tuple[int, ...]
    axis: tuple[PauliAxis, ...]
    num_qubits: int

    @property
    def num_vertices(self) -> int:
        return len(self.qubit)

    def slots(self) -> dict[int, tuple[int, PauliAxis]]:
        return {v: (self.qubit[v], self.axis[v]) for v in range(self.num_vertices)}

    def vertices_on(self, q: int) -> dict[PauliAxis, int]:
        return {self.axis[v]: v for v in range(self.num_vertices) if self.qubit[v] == q}


@dataclass
class Observable:
    """Real-weighted Pauli sum ``constant * I + sum(coeff * P)``."""

    constant: float = 0.0
    terms: list[tuple[float, dict[int, PauliAxis]]] = field(default_factory=list)

    def __neg__(self) -> Observable:
        return Observable(-self.constant, [(-c, dict(p)) for c, p in self.terms])

    def to_dict(self) -> dict:
        return {
            "constant": self.constant,
            "terms": [
                {"coeff": c, "paulis": {str(k): str(a) for k, a in sorted(p.items())}}
                for c, p in self.terms
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> Observable:
        terms = []
        for t in d["terms"]:
            paulis = {int(k): PauliAxis(a) for k, a in t["paulis"].items()}
            if not paulis:
                raise ValueError("identity terms belong in 'constant'")
            terms.append((float(t["coeff"]), paulis))
        return cls(float(d["constant"]), terms)

    @classmethod
    def from_json(cls, text: str) -> Observable:
        return cls.from_dict(json.loads(text))


def assign_qubits(g: Graph, colors) -> QubitAssignment:
    """Chunk each color class (ascending vertex index) into groups of at most three."""
    colors = np.asarray(colors)
    if not is_proper_coloring(g, colors):
        raise ValueError("coloring is not proper for this graph")
    classes = defaultdict(list)
    for v in range(g.n):
        classes[int(colors[v])].append(v)
    qubit = [0] * g.n
    axis = [PauliAxis.X] * g.n
    nq = 0
    for c in sorted(classes):
        members = classes[c]
        for start in range(0, len(members), 3):
            for ax, v in zip(AXES, members[start:start + 3]):
                qubit[v] = nq
                axis[v] = ax
            nq += 1
    return QubitAssignment(tuple(qubit), tuple(axis), nq)


def build_relaxed_hamiltonian(g: Graph, a: QubitAssignment) -> Observable:
    if a.num_vertices != g.n:
        raise ValueError(f"assignment covers {a.num_vertices} vertices, graph has {g.n}")
    terms = []
    for u, v, w in g.edges:
        if a.qubit[u] == a.qubit[v]:
            raise ValueError(f"edge ({u}, {v}) has both endpoints on qubit {a.qubit[u]}")
        terms.append((-1.5 * w, {a.qubit[u]: a.axis[u], a.qubit[v]: a.axis[v]}))
    return Observable(0.5 * sum(w for _, _, w in g.edges), terms)


def build_diagonal_hamiltonian(g: Graph) -> Observable:
    """Standard one-qubit-per-vertex cut Hamiltonian."""
    terms = [(-0.5 * w, {u: PauliAxis.Z, v: PauliAxis.Z}) for u, v, w in g.edges]
    return Observable(0.5 * sum(w for _, _, w in g.edges), terms)


def bloch_to_amplitudes(r) -> np.ndarray:
    """Pure single-qubit state with unit Bloch vector ``r``."""
    rx, ry, rz = r
    theta = np.arccos(np.clip(rz, -1.0, 1.0))
    phi = np.arctan2(ry, rx)
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def qrac_bloch_vector(x_bits) -> np.ndarray:
    return (1 - 2 * np.asarray(x_bits, dtype=float)) * INV_SQRT3


def qubit_code_bits(a: QubitAssignment, bits) -> np.ndarray:
    """Per-qubit (X, Y, Z) bit triples, padding unused axes with 0."""
    triples = np.zeros((a.num_qubits, 3), dtype=np.int8)
    for v in range(a.num_vertices):
        triples[a.qubit[v], AXES.index(a.axis[v])] = bits[v]
    return triples


def encode_classical_state(a: QubitAssignment, bits) -> StateVector:
    bits = np.asarray(bits)
    if bits.shape != (a.num_vertices,):
        raise ValueError(f"expected {a.num_vertices} bits, got shape {bits.shape}")
    amps = np.ones(1, dtype=complex)
    for triple in qubit_code_bits(a, bits):
        # kron(new, old) puts the new qubit above all earlier ones
        amps = np.kron(bloch_to_amplitudes(qrac_bloch_vector(triple)), amps)
    return StateVector(a.num_qubits, amps)
