import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import PAULI, dense_matrix
from qrelax.encoding import Observable, PauliAxis
from qrelax.sim import (
    CNOT,
    HADAMARD,
    I2,
    Ry,
    Rz,
    StateVector,
    U1q,
    apply_gate,
    expectation,
    init_zero,
    sample_product_basis,
)

X, Y, Z = PauliAxis.X, PauliAxis.Y, PauliAxis.Z


def _random_state(q, rng):
    amps = rng.normal(size=1 << q) + 1j * rng.normal(size=1 << q)
    return StateVector(q, amps / np.linalg.norm(amps))


def test_init_zero():
    assert np.array_equal(init_zero(1).amps, [1, 0])
    assert np.array_equal(init_zero(2).amps, [1, 0, 0, 0])
    with pytest.raises(ValueError):
        init_zero(25)
    with pytest.raises(ValueError):
        init_zero(0)


def test_ry_pi_flips():
    s = apply_gate(init_zero(1), Ry(0, np.pi))
    assert np.allclose(s.amps, [0, 1], atol=1e-15)


def test_cnot_makes_bell_state():
    plus = apply_gate(init_zero(2), Ry(0, np.pi / 2))
    bell = apply_gate(plus, CNOT(0, 1))
    assert np.allclose(bell.amps, [1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2)])


def test_rz_is_diagonal():
    rng = np.random.default_rng(1)
    s = _random_state(3, rng)
    for theta in rng.uniform(0, 2 * np.pi, 5):
        t = apply_gate(s, Rz(1, theta))
        assert np.allclose(t.probabilities(), s.probabilities(), atol=1e-14)
    t = apply_gate(init_zero(1), Rz(0, 0.7))
    assert np.allclose(t.amps, [np.exp(-0.35j), 0])


def test_gate_matrices_against_dense():
    rng = np.random.default_rng(2)
    s = _random_state(3, rng)
    theta = 0.913
    ry = np.cos(theta / 2) * PAULI["I"] - 1j * np.sin(theta / 2) * PAULI["Y"]
    rz = np.cos(theta / 2) * PAULI["I"] - 1j * np.sin(theta / 2) * PAULI["Z"]
    for gate, u in [(Ry(1, theta), ry), (Rz(1, theta), rz)]:
        full = np.kron(np.kron(I2, u), I2)
        assert np.allclose(apply_gate(s, gate).amps, full @ s.amps, atol=1e-14)
    # CNOT control 2 target 0 as an explicit permutation
    perm = np.array([i ^ 1 if i & 4 else i for i in range(8)])
    assert np.allclose(apply_gate(s, CNOT(2, 0)).amps, s.amps[perm])


def test_apply_gate_errors():
    with pytest.raises(IndexError):
        apply_gate(init_zero(2), Ry(2, 0.1))
    with pytest.raises(IndexError):
        apply_gate(init_zero(2), CNOT(0, 5))
    with pytest.raises(ValueError):
        CNOT(1, 1)


def test_apply_gate_does_not_mutate_input():
    s = init_zero(2)
    apply_gate(s, Ry(0, 1.0))
    assert np.array_equal(s.amps, [1, 0, 0, 0])


def test_norm_after_long_random_circuit():
    rng = np.random.default_rng(3)
    q = 6
    s = init_zero(q)
    for _ in range(1000):
        kind = rng.integers(4)
        if kind == 0:
            s = apply_gate(s, Ry(int(rng.integers(q)), rng.uniform(0, 7)))
        elif kind == 1:
            s = apply_gate(s, Rz(int(rng.integers(q)), rng.uniform(0, 7)))
        elif kind == 2:
            c, t = rng.choice(q, 2, replace=False)
            s = apply_gate(s, CNOT(int(c), int(t)))
        else:
            s = apply_gate(s, U1q(int(rng.integers(q)), HADAMARD))
    assert abs(s.norm() - 1) <= 1e-9


def test_expectation_examples():
    assert expectation(init_zero(1), Observable(0.0, [(1.0, {0: Z})])) == 1.0
    bell = StateVector(2, np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2))
    assert expectation(bell, Observable(0.0, [(1.0, {0: X, 1: X})])) == pytest.approx(1.0)
    assert expectation(bell, Observable(0.0, [(1.0, {0: Y, 1: Y})])) == pytest.approx(-1.0)
    assert expectation(bell, Observable(0.25, [(1.0, {0: Z})])) == pytest.approx(0.25)


def test_expectation_index_error():
    with pytest.raises(IndexError):
        expectation(init_zero(2), Observable(0.0, [(1.0, {3: Z})]))


def _random_observable(q, rng, terms=6):
    out = []
    for _ in range(terms):
        support = rng.choice(q, size=int(rng.integers(1, q + 1)), replace=False)
        out.append((float(rng.normal()), {int(k): PauliAxis("XYZ"[rng.integers(3)]) for k in support}))
    return Observable(float(rng.normal()), out)


def test_expectation_matches_dense_kron():
    rng = np.random.default_rng(4)
    for _ in range(200):
        q = int(rng.integers(1, 5))
        s = _random_state(q, rng)
        o = _random_observable(q, rng)
        dense = np.vdot(s.amps, dense_matrix(o, q) @ s.amps)
        assert abs(dense.imag) <= 1e-10
        assert expectation(s, o) == pytest.approx(dense.real, abs=1e-10)


@settings(max_examples=100)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1), st.sampled_from("XYZ"))
def test_single_pauli_expectation_bounded(q, seed, axis):
    rng = np.random.default_rng(seed)
    s = _random_state(q, rng)
    k = int(rng.integers(q))
    e = expectation(s, Observable(0.0, [(1.0, {k: PauliAxis(axis)})]))
    assert -1 - 1e-9 <= e <= 1 + 1e-9


def test_sampling_deterministic_state():
    out = sample_product_basis(init_zero(1), [I2], 100, np.random.default_rng(0))
    assert out.shape == (100, 1) and not out.any()


def test_sampling_plus_state():
    plus = apply_gate(init_zero(1), Ry(0, np.pi / 2))
    out = sample_product_basis(plus, [I2], 100_000, np.random.default_rng(1))
    assert abs(out.mean() - 0.5) <= 0.01


def test_sampling_hadamard_basis_uniform():
    shots = 100_000
    out = sample_product_basis(init_zero(1), [HADAMARD], shots, np.random.default_rng(2))
    assert abs(out.mean() - 0.5) <= 4 * np.sqrt(0.25 / shots)
    # and |+> in the Hadamard basis is deterministic
    plus = apply_gate(init_zero(1), Ry(0, np.pi / 2))
    assert not sample_product_basis(plus, [HADAMARD], 1000, np.random.default_rng(3)).any()


def test_sampling_consistent_with_exact_z():
    rng = np.random.default_rng(5)
    q = 4
    s = _random_state(q, rng)
    shots = 100_000
    out = sample_product_basis(s, [I2] * q, shots, rng)
    for k in range(q):
        exact = expectation(s, Observable(0.0, [(1.0, {k: Z})]))
        emp = 1 - 2 * out[:, k].mean()
        se = np.sqrt(max(1 - exact**2, 1e-12) / shots)
        assert abs(emp - exact) <= 5 * se


def test_sampling_seeded():
    s = _random_state(3, np.random.default_rng(6))
    a = sample_product_basis(s, [HADAMARD] * 3, 500, np.random.default_rng(9))
    b = sample_product_basis(s, [HADAMARD] * 3, 500, np.random.default_rng(9))
    assert np.array_equal(a, b)


def test_sampling_rejects_non_unitary():
    with pytest.raises(ValueError):
        sample_product_basis(init_zero(1), [np.array([[1, 1], [0, 1]])], 10, np.random.default_rng(0))
    with pytest.raises(ValueError):
        sample_product_basis(init_zero(2), [I2], 10, np.random.default_rng(0))
