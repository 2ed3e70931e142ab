"""Statevector execution, sampling, and counts-based estimation."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import embedded_pauli, random_program, random_state
from spinsim import ir
from spinsim.backend import (
    Counts,
    Statevector,
    expectation,
    estimate_observable_from_counts,
    estimate_with_sigma,
    outcome_value,
    product_state,
    run_statevector,
    sample_counts,
)
from spinsim.errors import BasisMismatchError, TooLargeError
from spinsim.hamiltonian import PauliTerm


def program_of(num_qubits, gates):
    return ir.Program(num_qubits=num_qubits, gates=tuple(gates))


class TestExecution:
    def test_empty_program_is_identity(self):
        state = run_statevector(program_of(2, []))
        np.testing.assert_allclose(state.amplitudes, [1, 0, 0, 0])

    def test_x_flips_qubit_zero(self):
        program = program_of(2, [ir.Gate("x", (0,))])
        state = run_statevector(program)
        np.testing.assert_allclose(state.amplitudes, [0, 0, 1, 0])

    def test_h_makes_uniform_superposition(self):
        program = program_of(1, [ir.Gate("h", (0,))])
        state = run_statevector(program)
        np.testing.assert_allclose(state.amplitudes, [1, 1] / np.sqrt(2))

    def test_bell_state(self):
        program = program_of(2, [ir.Gate("h", (0,)), ir.Gate("cnot", (0, 1))])
        state = run_statevector(program)
        np.testing.assert_allclose(
            state.amplitudes, [1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2)]
        )

    def test_initial_state_respected(self):
        initial = product_state(["down", "up"])
        program = program_of(2, [ir.Gate("cnot", (0, 1))])
        state = run_statevector(program, initial=initial)
        np.testing.assert_allclose(state.amplitudes, [0, 0, 0, 1])

    def test_size_guard_uses_max_qubits(self):
        program = program_of(3, [])
        with pytest.raises(TooLargeError):
            run_statevector(program, max_qubits=2)

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=60, deadline=None)
    def test_matches_dense_unitary(self, seed):
        rng = np.random.default_rng(seed)
        program = random_program(rng, max_qubits=5, max_gates=25)
        initial = random_state(rng, program.num_qubits)
        got = run_statevector(program, initial=initial).amplitudes
        want = ir.unitary_of(program) @ initial.amplitudes
        np.testing.assert_allclose(got, want, atol=1e-10)

    def test_norm_drift_stays_below_budget(self):
        rng = np.random.default_rng(5)
        program = random_program(rng, max_qubits=6, max_gates=400, min_qubits=6)
        state = run_statevector(program)
        drift = abs(np.linalg.norm(state.amplitudes) - 1.0)
        assert drift <= 1e-12 * max(len(program.gates), 1)


class TestProductState:
    def test_all_up_is_zero_index(self):
        state = product_state(["up", "up", "up"])
        assert state.amplitudes[0] == 1.0

    def test_site_one_is_most_significant_bit(self):
        state = product_state(["down", "up", "up"])
        assert state.amplitudes[4] == 1.0

    def test_last_site_is_least_significant_bit(self):
        state = product_state(["up", "up", "down"])
        assert state.amplitudes[1] == 1.0


class TestExpectation:
    def test_z_on_ground_and_flipped(self):
        term = [PauliTerm(1.0, ((1, "z"),))]
        assert expectation(product_state(["up"]), term) == pytest.approx(1.0)
        assert expectation(product_state(["down"]), term) == pytest.approx(-1.0)

    def test_identity_offset_term(self):
        term = [PauliTerm(2.5, ())]
        assert expectation(product_state(["up", "up"]), term) == pytest.approx(2.5)

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_matches_dense_oracle(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 5))
        state = random_state(rng, n)
        terms = []
        for _ in range(int(rng.integers(1, 5))):
            support = sorted(
                rng.choice(np.arange(1, n + 1), size=int(rng.integers(1, n + 1)), replace=False)
            )
            factors = tuple((int(s), str(rng.choice(["x", "y", "z"]))) for s in support)
            terms.append(PauliTerm(float(rng.normal()), factors))
        dense = sum(t.coefficient * embedded_pauli(t.factors, n) for t in terms)
        want = np.vdot(state.amplitudes, dense @ state.amplitudes).real
        assert expectation(state, terms) == pytest.approx(want, abs=1e-10)


class TestSampling:
    def test_deterministic_outcome(self):
        state = product_state(["down"])
        counts = sample_counts(state, shots=100, seed=0)
        assert counts.counts == {"1": 100}

    def test_same_seed_same_counts(self):
        rng = np.random.default_rng(2)
        state = random_state(rng, 3)
        a = sample_counts(state, shots=500, seed=42)
        b = sample_counts(state, shots=500, seed=42)
        assert a.counts == b.counts

    def test_different_seed_usually_differs(self):
        rng = np.random.default_rng(2)
        state = random_state(rng, 3)
        a = sample_counts(state, shots=500, seed=1)
        b = sample_counts(state, shots=500, seed=2)
        assert a.counts != b.counts

    def test_total_equals_shots(self):
        rng = np.random.default_rng(7)
        state = random_state(rng, 4)
        counts = sample_counts(state, shots=1234, seed=3)
        assert counts.total == 1234

    def test_nonpositive_shots_rejected(self):
        with pytest.raises(ValueError):
            sample_counts(product_state(["up"]), shots=0, seed=0)

    def test_frequencies_within_five_sigma(self):
        shots = 100_000
        program = program_of(1, [ir.Gate("h", (0,))])
        state = run_statevector(program)
        counts = sample_counts(state, shots=shots, seed=11)
        p = 0.5
        sigma = np.sqrt(p * (1 - p) * shots)
        assert abs(counts.counts["0"] - p * shots) <= 5 * sigma


class TestCountsEstimation:
    def test_outcome_value_sign_convention(self):
        term = [PauliTerm(1.0, ((1, "z"),))]
        assert outcome_value("0", term) == 1.0
        assert outcome_value("1", term) == -1.0

    def test_outcome_value_multi_site(self):
        term = [PauliTerm(2.0, ((1, "z"), (3, "z")))]
        assert outcome_value("101", term) == 2.0
        assert outcome_value("100", term) == -2.0

    def test_x_terms_rejected(self):
        with pytest.raises(BasisMismatchError):
            outcome_value("0", [PauliTerm(1.0, ((1, "x"),))])
        with pytest.raises(BasisMismatchError):
            estimate_observable_from_counts(
                Counts({"0": 5}), [PauliTerm(1.0, ((1, "y"),))]
            )

    def test_estimate_averages_counts(self):
        counts = Counts({"0": 75, "1": 25})
        term = [PauliTerm(1.0, ((1, "z"),))]
        assert estimate_observable_from_counts(counts, term) == pytest.approx(0.5)

    def test_empty_counts_rejected(self):
        with pytest.raises(ValueError):
            estimate_observable_from_counts(Counts({}), [PauliTerm(1.0, ((1, "z"),))])

    def test_sigma_zero_for_deterministic_outcomes(self):
        counts = Counts({"00": 100})
        mean, sigma = estimate_with_sigma(counts, [PauliTerm(1.0, ((1, "z"),))])
        assert mean == 1.0
        assert sigma == 0.0

    def test_sigma_matches_binomial(self):
        counts = Counts({"0": 50, "1": 50})
        mean, sigma = estimate_with_sigma(counts, [PauliTerm(1.0, ((1, "z"),))])
        assert mean == pytest.approx(0.0)
        assert sigma == pytest.approx(0.1)

    def test_estimate_converges_to_expectation(self):
        shots = 100_000
        rng = np.random.default_rng(13)
        state = random_state(rng, 3)
        terms = [PauliTerm(1.0, ((1, "z"),)), PauliTerm(0.5, ((2, "z"), (3, "z")))]
        counts = sample_counts(state, shots=shots, seed=21)
        mean, sigma = estimate_with_sigma(counts, terms)
        exact = expectation(state, terms)
        assert abs(mean - exact) <= 5 * max(sigma, 1e-12)


class TestStatevectorValidation:
    def test_length_must_match_qubit_count(self):
        with pytest.raises(ValueError):
            Statevector(2, np.array([1.0, 0.0], dtype=complex))

    def test_norm_reports_drift(self):
        state = Statevector(1, np.array([1.0, 1.0], dtype=complex))
        assert state.norm() == pytest.approx(np.sqrt(2.0))
