"""Dense pure-state simulator.

Qubit 0 is the least-significant bit of the amplitude index. Gates act in
place on the amplitude buffer through reshaped views; the public
``apply_gate`` works on a copy.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

import numpy as np
from numba import njit

if TYPE_CHECKING:
    from .encoding import Observable

MAX_QUBITS = 24

I2 = np.eye(2, dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S_DAG = np.array([[1, 0], [0, -1j]], dtype=complex)


@dataclass
class StateVector:
    num_qubits: int
    amps: np.ndarray

    def copy(self) -> StateVector:
        return StateVector(self.num_qubits, self.amps.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


@dataclass(frozen=True)
class Ry:
    qubit: int
    angle: float


@dataclass(frozen=True)
class Rz:
    qubit: int
    angle: float


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise ValueError("CNOT control and target must differ")


@dataclass(frozen=True, eq=False)
class U1q:
    qubit: int
    matrix: np.ndarray


Gate = Union[Ry, Rz, CNOT, U1q]


def ry_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(phi: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * phi), 0], [0, np.exp(0.5j * phi)]], dtype=complex)


def init_zero(q: int) -> StateVector:
    if not 1 <= q <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {q}")
    amps = np.zeros(1 << q, dtype=complex)
    amps[0] = 1.0
    return StateVector(q, amps)


@njit(cache=True)
def _apply_1q_kernel(amps, k, u00, u01, u10, u11):
    stride = 1 << k
    for base in range(0, amps.size, 2 * stride):
        for i in range(base, base + stride):
            a0 = amps[i]
            a1 = amps[i + stride]
            amps[i] = u00 * a0 + u01 * a1
            amps[i + stride] = u10 * a0 + u11 * a1


@njit(cache=True)
def _apply_cnot_kernel(amps, control, target):
    cbit = 1 << control
    tbit = 1 << target
    for i in range(amps.size):
        if (i & cbit) and not (i & tbit):
            j = i | tbit
            tmp = amps[i]
            amps[i] = amps[j]
            amps[j] = tmp


def apply_1q_inplace(amps: np.ndarray, q: int, k: int, u: np.ndarray) -> None:
    _apply_1q_kernel(amps, k, complex(u[0, 0]), complex(u[0, 1]), complex(u[1, 0]), complex(u[1, 1]))


def apply_cnot_inplace(amps: np.ndarray, q: int, control: int, target: int) -> None:
    _apply_cnot_kernel(amps, control, target)


def _check_qubit(k: int, q: int) -> None:
    if not 0 <= k < q:
        raise IndexError(f"qubit {k} out of range for {q} qubits")


def apply_gate(s: StateVector, g: Gate) -> StateVector:
    out = s.copy()
    q = s.num_qubits
    if isinstance(g, CNOT):
        _check_qubit(g.control, q)
        _check_qubit(g.target, q)
        apply_cnot_inplace(out.amps, q, g.control, g.target)
        return out
    _check_qubit(g.qubit, q)
    if isinstance(g, Ry):
        u = ry_matrix(g.angle)
    elif isinstance(g, Rz):
        u = rz_matrix(g.angle)
    elif isinstance(g, U1q):
        u = np.asarray(g.matrix, dtype=complex)
        if u.shape != (2, 2):
            raise ValueError("U1q matrix must be 2x2")
    else:
        raise TypeError(f"unknown gate {g!r}")
    apply_1q_inplace(out.amps, q, g.qubit, u)
    return out


_AXIS_FLIP = {"X": True, "Y": True, "Z": False}
_AXIS_PHASE = {"X": False, "Y": True, "Z": True}


class CompiledObservable:
    """Pauli sum regrouped by bit-flip mask for repeated exact expectations.

    For a Pauli string P with flip mask f and phase mask z,
    ``P|j> = i^{#Y} (-1)^{popcount(j & z)} |j ^ f>``, so all terms sharing f
    collapse into a single weight vector over basis indices.
    """

    def __init__(self, o: Observable, num_qubits: int):
        self.num_qubits = num_qubits
        self.constant = float(o.constant)
        dim = 1 << num_qubits
        idx = np.arange(dim, dtype=np.int64)
        groups: dict[int, np.ndarray] = {}
        for coeff, paulis in o.terms:
            flip = zmask = ny = 0
            for k, axis in paulis.items():
                k = int(k)
                _check_qubit(k, num_qubits)
                axis = getattr(axis, "value", axis)
                if _AXIS_FLIP[axis]:
                    flip |= 1 << k
                if _AXIS_PHASE[axis]:
                    zmask |= 1 << k
                ny += axis == "Y"
            sign = 1.0 - 2.0 * (np.bitwise_count(idx & zmask) & 1)
            w = coeff * (1j**ny) * sign
            if flip in groups:
                groups[flip] = groups[flip] + w
            else:
                groups[flip] = w.astype(complex)
        self._flips = np.array(sorted(groups), dtype=np.int64)
        self._weights = np.array([groups[f] for f in self._flips], dtype=complex).reshape(-1, dim)

    def expectation(self, amps: np.ndarray) -> float:
        return self.constant + _grouped_expectation(amps, self._flips, self._weights)


@njit(cache=True)
def _grouped_expectation(amps, flips, weights):
    total = 0.0
    for g in range(flips.size):
        f = flips[g]
        for j in range(amps.size):
            total += (np.conj(amps[j ^ f]) * weights[g, j] * amps[j]).real
    return total


def expectation(s: StateVector, o: Observable) -> float:
    """Exact ``<s|O|s>`` for a weighted Pauli sum."""
    return CompiledObservable(o, s.num_qubits).expectation(s.amps)


def _check_unitary(u: np.ndarray) -> None:
    if u.shape != (2, 2) or not np.allclose(u.conj().T @ u, I2, atol=1e-9, rtol=0):
        raise ValueError("basis rotation is not a 2x2 unitary within 1e-9")


def index_to_bits(idx: np.ndarray, q: int) -> np.ndarray:
    return ((np.asarray(idx)[:, None] >> np.arange(q)) & 1).astype(np.uint8)


def _draw(probs: np.ndarray, u: np.ndarray) -> np.ndarray:
    cum = np.cumsum(probs, axis=-1)
    return np.minimum(np.searchsorted(cum, u * cum[-1], side="right"), len(cum) - 1)


def sample_product_basis(s: StateVector, rotations, shots: int, rng) -> np.ndarray:
    """Measure after per-qubit basis changes; returns a ``(shots, q)`` bit array."""
    q = s.num_qubits
    if len(rotations) != q:
        raise ValueError(f"need one rotation per qubit ({q}), got {len(rotations)}")
    amps = s.amps.copy()
    for k, u in enumerate(rotations):
        u = np.asarray(u, dtype=complex)
        _check_unitary(u)
        apply_1q_inplace(amps, q, k, u)
    idx = _draw(np.abs(amps) ** 2, rng.random(shots))
    return index_to_bits(idx, q)


def sample_batched_bases(amps: np.ndarray, q: int, unitaries: np.ndarray, rng) -> np.ndarray:
    """One shot per row of ``unitaries`` (shape ``(B, q, 2, 2)``), each with its own basis.

    Returns the sampled basis-state indices, shape ``(B,)``.
    """
    u = rng.random(unitaries.shape[0])
    return _batched_kernel(amps, np.ascontiguousarray(unitaries, dtype=np.complex128), u)


@njit(cache=True)
def _batched_kernel(amps, unitaries, uniforms):
    out = np.empty(unitaries.shape[0], dtype=np.int64)
    work = np.empty_like(amps)
    for b in range(unitaries.shape[0]):
        work[:] = amps
        for k in range(unitaries.shape[1]):
            m = unitaries[b, k]
            _apply_1q_kernel(work, k, m[0, 0], m[0, 1], m[1, 0], m[1, 1])
        total = 0.0
        for j in range(work.size):
            total += work[j].real ** 2 + work[j].imag ** 2
        target = uniforms[b] * total
        acc = 0.0
        pick = work.size - 1
        for j in range(work.size):
            acc += work[j].real ** 2 + work[j].imag ** 2
            if acc > target:
                pick = j
                break
        out[b] = pick
    return out
