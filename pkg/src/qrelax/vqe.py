"""Hardware-efficient Ry-Rz ansatz and the NFT sequential optimizer."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Callable, Optional

import numpy as np
from numba import njit

from .encoding import Observable, QubitAssignment, qubit_code_bits, qrac_bloch_vector
from .graph import Graph
from .sim import (
    CompiledObservable,
    StateVector,
    _apply_1q_kernel,
    _apply_cnot_kernel,
    init_zero,
)

DEGENERATE_AMPLITUDE = 1e-12


class EntanglementPattern(str, Enum):
    COMPATIBLE = "compatible"
    LINEAR = "linear"
    RANDOM = "random"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class AnsatzSpec:
    """Rotation layer, then ``layers`` repetitions of (CNOT layer, rotation layer).

    Parameters are laid out layer-major, then by qubit, then (Ry, Rz).
    """

    num_qubits: int
    layers: int
    ent_pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.layers < 0:
            raise ValueError("layer count must be >= 0")
        for c, t in self.ent_pairs:
            if c == t or not (0 <= c < self.num_qubits and 0 <= t < self.num_qubits):
                raise ValueError(f"bad CNOT pair ({c}, {t}) for {self.num_qubits} qubits")

    @property
    def param_count(self) -> int:
        return 2 * self.num_qubits * (self.layers + 1)


@dataclass
class VqeResult:
    params: np.ndarray
    energy: float
    objective: float
    trace: list[float] = field(default_factory=list)


def compatible_pairs(g: Graph, a: QubitAssignment) -> list[tuple[int, int]]:
    pairs = set()
    for u, v, _ in g.edges:
        qu, qv = a.qubit[u], a.qubit[v]
        if qu == qv:
            raise ValueError(f"edge ({u}, {v}) endpoints share qubit {qu}")
        pairs.add((min(qu, qv), max(qu, qv)))
    return sorted(pairs)


def build_ansatz(pattern, layers: int, a: QubitAssignment, g: Optional[Graph] = None, seed=None) -> AnsatzSpec:
    pattern = EntanglementPattern(pattern)
    q = a.num_qubits
    if pattern is EntanglementPattern.LINEAR:
        pairs = [(i, i + 1) for i in range(q - 1)]
    else:
        if g is None:
            raise ValueError(f"{pattern} entanglement needs the graph")
        pairs = compatible_pairs(g, a)
        if pattern is EntanglementPattern.RANDOM:
            pool = list(combinations(range(q), 2))
            if len(pairs) > len(pool):
                raise ValueError(f"cannot draw {len(pairs)} distinct pairs from {len(pool)}")
            rng = np.random.default_rng(seed)
            chosen = rng.choice(len(pool), size=len(pairs), replace=False)
            pairs = sorted(pool[i] for i in chosen)
    return AnsatzSpec(q, layers, tuple(pairs))


@njit(cache=True)
def _apply_rotations(amps, angles):
    # Rz(phi) @ Ry(theta) on every qubit
    for k in range(angles.shape[0]):
        c = np.cos(0.5 * angles[k, 0])
        s = np.sin(0.5 * angles[k, 0])
        em = np.exp(-0.5j * angles[k, 1])
        ep = np.exp(0.5j * angles[k, 1])
        _apply_1q_kernel(amps, k, em * c, -em * s, ep * s, ep * c)


@njit(cache=True)
def _apply_entangler(amps, pairs):
    for p in range(pairs.shape[0]):
        _apply_cnot_kernel(amps, pairs[p, 0], pairs[p, 1])


@njit(cache=True)
def _run_kernel(amps, angles, start, pairs):
    _apply_rotations(amps, angles[start])
    for layer in range(start + 1, angles.shape[0]):
        _apply_entangler(amps, pairs)
        _apply_rotations(amps, angles[layer])


def _pair_array(spec: AnsatzSpec) -> np.ndarray:
    return np.array(spec.ent_pairs, dtype=np.int64).reshape(-1, 2)


def _run_layers(spec: AnsatzSpec, angles: np.ndarray, start: int, amps: np.ndarray) -> np.ndarray:
    # amps is the state right before rotation layer `start`; mutated in place
    _run_kernel(amps, angles, start, _pair_array(spec))
    return amps


def prepare_state(spec: AnsatzSpec, params) -> StateVector:
    params = np.asarray(params, dtype=float)
    if params.shape != (spec.param_count,):
        raise ValueError(f"expected {spec.param_count} parameters, got shape {params.shape}")
    s = init_zero(spec.num_qubits)
    angles = params.reshape(spec.layers + 1, spec.num_qubits, 2)
    _run_layers(spec, angles, 0, s.amps)
    return s


def random_init_params(spec: AnsatzSpec, rng) -> np.ndarray:
    return rng.uniform(0.0, 2 * np.pi, size=spec.param_count)


def product_params_for_bits(a: QubitAssignment, bits) -> np.ndarray:
    """Depth-0 parameters that prepare the encoded state of ``bits`` (up to global phase)."""
    params = np.zeros((a.num_qubits, 2))
    for k, triple in enumerate(qubit_code_bits(a, np.asarray(bits))):
        rx, ry, rz = qrac_bloch_vector(triple)
        params[k] = np.arccos(rz), np.arctan2(ry, rx)
    return params.ravel()


def fit_sinusoid(e0: float, e_plus: float, e_minus: float):
    """Amplitude, phase offset and mean of ``a*cos(delta) + c`` sampled at delta = 0, ±pi/2.

    Returns ``(a, delta0, c)`` where the current point sits at ``theta0 = b + delta0``.
    """
    c = 0.5 * (e_plus + e_minus)
    y = 0.5 * (e_minus - e_plus)
    x = e0 - c
    return float(np.hypot(x, y)), float(np.arctan2(y, x)), c


def nft_optimize(
    spec: AnsatzSpec,
    objective: Observable,
    init_params,
    sweeps: int,
    callback: Optional[Callable[[int, int, np.ndarray, float], None]] = None,
) -> VqeResult:
    """Minimize ``objective`` by exact single-parameter sinusoid minimization.

    ``objective`` is the negated relaxed Hamiltonian; ``VqeResult.energy`` and
    ``trace`` report the un-negated value. ``callback(sweep, index, params,
    predicted)`` fires after every parameter update.
    """
    if sweeps < 1:
        raise ValueError("need at least one sweep")
    params = np.array(init_params, dtype=float)
    if params.shape != (spec.param_count,):
        raise ValueError(f"expected {spec.param_count} parameters, got shape {params.shape}")
    q = spec.num_qubits
    op = CompiledObservable(objective, q)
    angles = params.reshape(spec.layers + 1, q, 2)
    zero = init_zero(q).amps
    pairs = _pair_array(spec)

    def evaluate(layer, base):
        amps = base.copy()
        _run_kernel(amps, angles, layer, pairs)
        return op.expectation(amps)

    current = evaluate(0, zero)
    trace = []
    for sweep in range(sweeps):
        base = zero
        for layer in range(spec.layers + 1):
            if layer > 0:
                base = base.copy()
                _apply_rotations(base, angles[layer - 1])
                _apply_entangler(base, pairs)
            for k in range(q):
                for slot in range(2):
                    theta0 = angles[layer, k, slot]
                    angles[layer, k, slot] = theta0 + np.pi / 2
                    e_plus = evaluate(layer, base)
                    angles[layer, k, slot] = theta0 - np.pi / 2
                    e_minus = evaluate(layer, base)
                    amp, delta0, c = fit_sinusoid(current, e_plus, e_minus)
                    if amp < DEGENERATE_AMPLITUDE:
                        angles[layer, k, slot] = theta0
                    else:
                        angles[layer, k, slot] = np.mod(theta0 - delta0 + np.pi, 2 * np.pi)
                        current = c - amp
                    if callback is not None:
                        j = (layer * q + k) * 2 + slot
                        callback(sweep, j, params.copy(), current)
        current = evaluate(0, zero)
        trace.append(-current)
    return VqeResult(params=params, energy=-current, objective=current, trace=trace)
