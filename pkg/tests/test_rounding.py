import itertools

import numpy as np
import pytest

from oracles import PAULI, magic_projector, qrac_density
from qrelax.encoding import assign_qubits, build_relaxed_hamiltonian, encode_classical_state
from qrelax.graph import Graph, cut_value, generate_regular, greedy_color
from qrelax.rounding import (
    MAGIC_SIGNS,
    magic_basis_rotation,
    magic_decode,
    magic_round,
    pauli_round,
)
from qrelax.sim import init_zero
from qrelax.vqe import build_ansatz, nft_optimize, prepare_state, random_init_params


def _instance(n, seed):
    g = generate_regular(n, 3, seed)
    return g, assign_qubits(g, greedy_color(g))


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_magic_rotation(i):
    v = magic_basis_rotation(i)
    assert np.allclose(v.conj().T @ v, np.eye(2), atol=1e-12)
    for outcome in (0, 1):
        rotated = v @ magic_projector(MAGIC_SIGNS[i], outcome) @ v.conj().T
        assert rotated[outcome, outcome].real == pytest.approx(1.0, abs=1e-12)


def test_magic_rotation_bad_index():
    with pytest.raises(ValueError):
        magic_basis_rotation(5)


def test_magic_decode_examples():
    assert magic_decode(1, 0) == (0, 0, 0)
    assert magic_decode(1, 1) == (1, 1, 1)
    assert magic_decode(2, 0) == (0, 1, 1)
    assert magic_decode(3, 0) == (1, 0, 1)
    assert magic_decode(4, 0) == (1, 1, 0)
    assert magic_decode(4, 1) == (0, 0, 1)
    # the 8 (basis, outcome) pairs decode to the 8 distinct triples
    assert len({magic_decode(i, o) for i in range(1, 5) for o in (0, 1)}) == 8


def test_magic_bases_match_conjugated_definitions():
    mu = magic_projector((1, 1, 1), 0)
    for i, p in zip((2, 3, 4), "XYZ"):
        assert np.allclose(PAULI[p] @ mu @ PAULI[p], magic_projector(MAGIC_SIGNS[i], 0))


def test_pauli_exact_decodes_all_single_qubit_encodings():
    g = Graph(3)
    a = assign_qubits(g, [0, 0, 0])
    for triple in itertools.product((0, 1), repeat=3):
        rep = pauli_round(encode_classical_state(a, list(triple)), a, g)
        assert tuple(rep.best_bits) == triple


def test_pauli_exact_recovers_encoding():
    rng = np.random.default_rng(0)
    for seed in range(20):
        g, a = _instance(16, seed)
        bits = rng.integers(0, 2, g.n)
        rep = pauli_round(encode_classical_state(a, bits), a, g)
        assert np.array_equal(rep.best_bits, bits)
        assert rep.best_value == cut_value(g, bits)


def test_pauli_zero_estimate_is_random():
    g = Graph(1)
    a = assign_qubits(g, [0])
    seen = {int(pauli_round(init_zero(1), a, g, "exact", seed).best_bits[0]) for seed in range(40)}
    assert seen == {0, 1}


def test_pauli_shots_agree_with_exact():
    # product state with every |<P>| = 1/sqrt(3) > 0.1: Hoeffding makes a sign error negligible
    rng = np.random.default_rng(1)
    g, a = _instance(12, 4)
    bits = rng.integers(0, 2, g.n)
    s = encode_classical_state(a, bits)
    exact = pauli_round(s, a, g)
    shots = pauli_round(s, a, g, 100_000, rng)
    assert np.array_equal(exact.best_bits, shots.best_bits)
    assert shots.mode == "pauli-shots"


def test_pauli_rejects_mismatch():
    g, a = _instance(12, 0)
    with pytest.raises(ValueError):
        pauli_round(init_zero(a.num_qubits + 1), a, g)
    with pytest.raises(ValueError):
        magic_round(init_zero(a.num_qubits + 1), a, g, 10)


def test_magic_decode_frequencies_match_overlaps():
    g = Graph(6)
    a = assign_qubits(g, [0] * 6)
    rng = np.random.default_rng(2)
    bits = rng.integers(0, 2, 6)
    shots = 100_000
    rep = magic_round(encode_classical_state(a, bits), a, g, shots, rng, keep_shots=True)
    assert rep.shot_bits.shape == (shots, 6)
    for q in range(2):
        encoded = tuple(bits[3 * q:3 * q + 3])
        rho = qrac_density(encoded)
        decoded = rep.shot_bits[:, 3 * q:3 * q + 3]
        for i in range(1, 5):
            for o in (0, 1):
                p = max(0.25 * np.trace(magic_projector(MAGIC_SIGNS[i], o) @ rho).real, 0.0)
                freq = np.mean(np.all(decoded == magic_decode(i, o), axis=1))
                assert abs(freq - p) <= 4 * np.sqrt(p * (1 - p) / shots) + 1e-12


def test_magic_report_invariants():
    g, a = _instance(14, 1)
    h = build_relaxed_hamiltonian(g, a)
    spec = build_ansatz("linear", 1, a, g)
    res = nft_optimize(spec, -h, random_init_params(spec, np.random.default_rng(0)), 3)
    s = prepare_state(spec, res.params)
    rep = magic_round(lambda: s, a, g, 500, 3)
    assert len(rep.per_shot_values) == 500
    assert rep.best_value == max(rep.per_shot_values)
    assert rep.best_value == cut_value(g, rep.best_bits)


def test_magic_best_nondecreasing_in_shots():
    g, a = _instance(16, 2)
    s = encode_classical_state(a, np.zeros(g.n, dtype=int))
    prev = -np.inf
    runs = {}
    for shots in (1, 10, 100, 700, 1500, 3000):
        rep = magic_round(s, a, g, shots, np.random.default_rng(11))
        assert rep.best_value >= prev
        prev = rep.best_value
        runs[shots] = rep.per_shot_values
    assert runs[3000][:1500] == runs[1500]


def test_magic_seeded():
    g, a = _instance(10, 0)
    s = encode_classical_state(a, np.ones(g.n, dtype=int))
    r1 = magic_round(s, a, g, 300, 5)
    r2 = magic_round(s, a, g, 300, 5)
    assert r1.per_shot_values == r2.per_shot_values
