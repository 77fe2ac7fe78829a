import numpy as np
import pytest
from conftest import make_random_circuit

from lre.bench import ghz_mirror
from lre.circuit import Circuit, FoldMode, chunk_circuit, fold_circuit, gate
from lre.errors import SimulationError
from lre.noise_sim import (
    DensityMatrix,
    DiagonalObservable,
    NoiseModel,
    ZeroProjector,
    apply_damping,
    apply_gate,
    damping_kraus,
    estimate_expectation,
    simulate_exact,
    trace_distance,
)


def test_damping_kraus_is_trace_preserving():
    e0, e1 = damping_kraus(0.3)
    np.testing.assert_allclose(e0.conj().T @ e0 + e1.conj().T @ e1, np.eye(2), atol=1e-15)
    with pytest.raises(ValueError):
        damping_kraus(1.5)


def test_damping_relaxes_excited_state():
    rho = DensityMatrix(n=1, entries=np.array([[0, 0], [0, 1]], dtype=complex))
    out = apply_damping(rho, 0, 0.04)
    np.testing.assert_allclose(out.entries, np.diag([0.04, 0.96]), atol=1e-15)


def test_hadamard_then_damping():
    rho = simulate_exact(Circuit(width=1, layers=[[gate("H", 0)]]), NoiseModel(p1=0.04, p2=0.08))
    expected = np.array([[0.52, 0.5 * np.sqrt(0.96)], [0.5 * np.sqrt(0.96), 0.48]])
    np.testing.assert_allclose(rho.entries, expected, atol=1e-12)


def test_cnot_control_is_first_qubit(noiseless):
    c = Circuit(width=3, layers=[[gate("X", 0)], [gate("CNOT", 0, 2)]])
    probs = simulate_exact(c, noiseless).probabilities()
    assert probs[0b101] == pytest.approx(1.0)


def test_idle_qubits_are_not_damped():
    c = Circuit(width=2, layers=[[gate("X", 1)], [gate("H", 0)], [gate("H", 0)]])
    probs = simulate_exact(c, NoiseModel(p1=0.1, p2=0.2)).probabilities()
    # qubit 1 saw one damping channel only
    assert probs[0b01] + probs[0b11] == pytest.approx(0.9)


def test_state_stays_physical(rng, noisy):
    for _ in range(10):
        rho = simulate_exact(make_random_circuit(rng, 3, 5), noisy)
        assert rho.trace() == pytest.approx(1.0, abs=1e-12)
        assert rho.is_hermitian()
        assert np.all(rho.probabilities() >= -1e-12)


def test_mirror_circuits(noiseless, noisy):
    for n in (1, 2, 3, 4):
        circuit = ghz_mirror(n)
        assert simulate_exact(circuit, noiseless).expectation(ZeroProjector()) == pytest.approx(1.0, abs=1e-12)
    assert simulate_exact(ghz_mirror(2), noisy).expectation(ZeroProjector()) < 1.0


def test_width_limit():
    c = Circuit(width=5, layers=[[gate("H", 0)]])
    with pytest.raises(SimulationError):
        simulate_exact(c, NoiseModel(), max_qubits=4)


def test_noiseless_folding_preserves_state(rng, noiseless):
    for _ in range(50):
        n = int(rng.integers(1, 5))
        c = make_random_circuit(rng, n, int(rng.integers(1, 9)))
        reference = simulate_exact(c, noiseless)
        chunking = chunk_circuit(c, int(rng.integers(1, c.depth + 1)))
        lambdas = [int(x) for x in rng.choice([1, 3, 5, 7], size=len(chunking))]
        for mode in FoldMode:
            folded = fold_circuit(c, chunking, lambdas, mode)
            assert folded.depth == sum(lam * size for lam, size in zip(lambdas, chunking.sizes))
            assert trace_distance(simulate_exact(folded, noiseless), reference) < 1e-10


def test_folding_amplifies_noise(noisy):
    c = ghz_mirror(2)
    base = estimate_expectation(c, noisy).value
    folded = estimate_expectation(fold_circuit(c, chunk_circuit(c, 1), (3,)), noisy).value
    assert folded < base < 1.0


def test_diagonal_observable_from_bitstrings():
    obs = DiagonalObservable.from_bitstrings({"00": 1.0, "11": -1.0}, 2)
    assert obs.weights == (1.0, 0.0, 0.0, -1.0)
    with pytest.raises(ValueError):
        DiagonalObservable.from_bitstrings({"0": 1.0}, 2)
    with pytest.raises(ValueError):
        obs.diagonal(3)


def test_estimate_expectation_exact_and_sampled(noisy):
    c = ghz_mirror(2)
    exact = estimate_expectation(c, noisy)
    assert exact.shots == 0
    assert exact.value == exact.exact_value

    a = estimate_expectation(c, noisy, shots=10_000, seed=3)
    b = estimate_expectation(c, noisy, shots=10_000, seed=3)
    assert a == b
    assert a.exact_value == pytest.approx(exact.value)
    # five standard deviations of a projector estimate
    assert abs(a.value - exact.value) < 5 * 0.5 / np.sqrt(10_000)
    with pytest.raises(ValueError):
        estimate_expectation(c, noisy, shots=-1)


def test_trace_distance_of_orthogonal_states():
    zero = DensityMatrix.zero_state(1)
    one = DensityMatrix(n=1, entries=np.diag([0.0, 1.0]).astype(complex))
    assert trace_distance(zero, one) == pytest.approx(1.0)
    assert trace_distance(zero, zero) == pytest.approx(0.0)


def test_apply_gate_basics(noiseless):
    rho = apply_gate(DensityMatrix.zero_state(1), gate("X", 0))
    np.testing.assert_allclose(rho.entries, np.diag([0, 1]), atol=1e-15)
    rho = apply_gate(DensityMatrix.zero_state(1), gate("H", 0))
    np.testing.assert_allclose(rho.entries, 0.5 * np.ones((2, 2)), atol=1e-15)
    ten = apply_gate(DensityMatrix.zero_state(2), gate("X", 0))
    out = apply_gate(ten, gate("CNOT", 0, 1))
    assert out.probabilities()[0b11] == pytest.approx(1.0)
    with pytest.raises(SimulationError):
        apply_gate(DensityMatrix.zero_state(1), gate("CNOT", 0, 1))


def test_empty_circuit_and_zero_damping():
    rho = simulate_exact(Circuit(width=2), NoiseModel())
    np.testing.assert_array_equal(rho.entries, DensityMatrix.zero_state(2).entries)
    assert apply_damping(rho, 1, 0.0) is rho


def test_sampled_estimate_converges():
    c = Circuit(width=1, layers=[[gate("H", 0)]])
    est = estimate_expectation(c, NoiseModel(p1=0.04), shots=10**6, seed=21)
    assert est.exact_value == pytest.approx(0.52)
    assert abs(est.value - 0.52) < 0.0015


@pytest.mark.parametrize("n", [2, 3])
def test_folding_any_chunk_lowers_ghz_value(n, noisy):
    c = ghz_mirror(n)
    chunking = chunk_circuit(c, c.depth)
    base = estimate_expectation(c, noisy).value
    for k in range(c.depth):
        lambdas = [1] * c.depth
        lambdas[k] = 3
        assert estimate_expectation(fold_circuit(c, chunking, lambdas), noisy).value < base
