import numpy as np
import pytest
from scipy.stats import chisquare

from qclust.statevector import (
    RegisterLayout,
    StateVector,
    apply_effect,
    apply_label_unitary,
    enumerate_outcomes,
    prepare_superposition,
    sample_outcomes,
)
from qclust.unsharp import EffectOperator, build_effect, normalize_effect_family


def basis_state(code: int, label: int, layout: RegisterLayout) -> StateVector:
    amps = np.zeros(layout.size, dtype=np.complex128)
    amps[(code << layout.m) | label] = 1.0
    return StateVector(layout=layout, amplitudes=amps)


def random_state(layout: RegisterLayout, seed: int) -> StateVector:
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=layout.size) + 1j * rng.normal(size=layout.size)
    return StateVector(layout=layout, amplitudes=amps / np.linalg.norm(amps))


def cnot_matrix(control: int, target: int, width: int) -> np.ndarray:
    dim = 1 << width
    mat = np.zeros((dim, dim))
    for col in range(dim):
        row = col ^ (1 << target) if (col >> control) & 1 else col
        mat[row, col] = 1.0
    return mat


def label_copy_matrix(n: int, m: int) -> np.ndarray:
    """The CNOT cascade as an explicit matrix product; independent oracle."""
    u = np.eye(1 << (n + m))
    for j in range(m):
        u = cnot_matrix(control=m + n - 1 - j, target=m - 1 - j, width=n + m) @ u
    return u


class TestRegisterLayout:
    def test_cap_enforced(self):
        with pytest.raises(ValueError, match="cap"):
            RegisterLayout(n=20, m=10)

    def test_env_cap_override(self, monkeypatch):
        monkeypatch.setenv("CLUSTER_MAX_QUBITS", "26")
        RegisterLayout(n=20, m=6)  # allowed under the raised cap

    def test_split_index(self):
        layout = RegisterLayout(n=4, m=2)
        assert layout.split_index((0b1011 << 2) | 0b10) == (0b1011, 0b10)


class TestPrepareSuperposition:
    def test_two_codes_no_ancilla(self):
        state = prepare_superposition([2, 3], RegisterLayout(n=2, m=0))
        expected = np.array([0, 0, 1 / np.sqrt(2), 1 / np.sqrt(2)], dtype=complex)
        np.testing.assert_allclose(state.amplitudes, expected)

    def test_single_code_is_basis_state(self):
        state = prepare_superposition([5], RegisterLayout(n=3, m=1))
        expected = np.zeros(16, dtype=complex)
        expected[5 << 1] = 1.0
        np.testing.assert_array_equal(state.amplitudes, expected)

    def test_all_codes_full_uniform(self):
        n = 3
        state = prepare_superposition(range(1 << n), RegisterLayout(n=n, m=2))
        on_label_zero = state.amplitudes[[c << 2 for c in range(1 << n)]]
        np.testing.assert_allclose(on_label_zero, 2 ** (-n / 2))
        assert state.norm() == pytest.approx(1.0)

    def test_multiplicity_weighting(self):
        state = prepare_superposition([1, 1, 1, 2], RegisterLayout(n=2, m=0), "multiplicity")
        np.testing.assert_allclose(state.amplitudes[1], np.sqrt(3 / 4))
        np.testing.assert_allclose(state.amplitudes[2], np.sqrt(1 / 4))

    def test_duplicates_collapse_under_uniform_distinct(self):
        state = prepare_superposition([3, 3, 3], RegisterLayout(n=2, m=0))
        assert state.amplitudes[3] == pytest.approx(1.0)

    def test_empty_codes_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            prepare_superposition([], RegisterLayout(n=2, m=0))

    def test_out_of_range_code_rejected(self):
        with pytest.raises(ValueError, match="code 4"):
            prepare_superposition([4], RegisterLayout(n=2, m=0))


class TestApplyLabelUnitary:
    def test_copies_top_bits_onto_ancillae(self):
        layout = RegisterLayout(n=4, m=2)
        state = apply_label_unitary(basis_state(0b1011, 0b00, layout))
        expected = basis_state(0b1011, 0b10, layout)
        np.testing.assert_array_equal(state.amplitudes, expected.amplitudes)

    def test_zero_state_unchanged(self):
        layout = RegisterLayout(n=4, m=2)
        state = apply_label_unitary(basis_state(0, 0, layout))
        np.testing.assert_array_equal(state.amplitudes, basis_state(0, 0, layout).amplitudes)

    def test_four_codes_entangle_with_distinct_labels(self):
        layout = RegisterLayout(n=4, m=2)
        state = apply_label_unitary(prepare_superposition([0, 5, 10, 15], layout))
        outcomes = enumerate_outcomes(state)
        assert set(outcomes) == {(0, 0), (5, 1), (10, 2), (15, 3)}

    def test_matches_explicit_cnot_cascade_matrix(self):
        layout = RegisterLayout(n=4, m=2)
        u = label_copy_matrix(4, 2)
        for index in range(layout.size):
            amps = np.zeros(layout.size, dtype=np.complex128)
            amps[index] = 1.0
            got = apply_label_unitary(StateVector(layout=layout, amplitudes=amps))
            np.testing.assert_array_equal(got.amplitudes, u[:, index].astype(complex))

    def test_involution_bit_exact(self):
        layout = RegisterLayout(n=5, m=3)
        state = random_state(layout, seed=11)
        twice = apply_label_unitary(apply_label_unitary(state))
        np.testing.assert_array_equal(twice.amplitudes, state.amplitudes)

    def test_norm_preserved(self):
        for seed in range(5):
            layout = RegisterLayout(n=6, m=2)
            state = random_state(layout, seed)
            assert apply_label_unitary(state).norm() == pytest.approx(state.norm(), abs=1e-12)

    def test_label_always_equals_top_bits_exhaustive(self):
        for n in range(1, 7):
            for m in range(1, n + 1):
                layout = RegisterLayout(n=n, m=m)
                state = prepare_superposition(range(1 << n), layout)
                outcomes = enumerate_outcomes(apply_label_unitary(state))
                for code, label in outcomes:
                    assert label == code >> (n - m)

    def test_no_ancilla_rejected(self):
        with pytest.raises(ValueError, match="ancilla"):
            apply_label_unitary(prepare_superposition([0], RegisterLayout(n=2, m=0)))

    def test_more_ancillae_than_distance_bits_rejected(self):
        with pytest.raises(ValueError, match="label bits"):
            apply_label_unitary(prepare_superposition([0], RegisterLayout(n=2, m=3)))


class TestEnumerateOutcomes:
    def test_basis_state_is_deterministic(self):
        layout = RegisterLayout(n=3, m=1)
        assert enumerate_outcomes(basis_state(5, 1, layout)) == {(5, 1): pytest.approx(1.0)}

    def test_two_term_superposition(self):
        layout = RegisterLayout(n=2, m=1)
        amps = np.zeros(layout.size, dtype=np.complex128)
        amps[0 << 1] = amps[3 << 1] = 1 / np.sqrt(2)
        outcomes = enumerate_outcomes(StateVector(layout=layout, amplitudes=amps))
        assert outcomes == {(0, 0): pytest.approx(0.5), (3, 0): pytest.approx(0.5)}

    def test_label_marginals_count_codes_per_bucket(self):
        layout = RegisterLayout(n=4, m=2)
        codes = [1, 2, 3, 6, 9, 13, 14, 15]
        state = apply_label_unitary(prepare_superposition(codes, layout))
        outcomes = enumerate_outcomes(state)
        marginal: dict[int, float] = {}
        for (_, label), p in outcomes.items():
            marginal[label] = marginal.get(label, 0.0) + p
        per_bucket = {0: 3, 1: 1, 2: 1, 3: 3}  # top-2-bit census of the codes
        for label, count in per_bucket.items():
            assert marginal[label] == pytest.approx(count / len(codes))

    def test_unnormalized_rejected(self):
        layout = RegisterLayout(n=2, m=0)
        bad = StateVector(layout=layout, amplitudes=np.full(4, 0.7, dtype=np.complex128))
        with pytest.raises(ValueError, match="normalized"):
            enumerate_outcomes(bad)


class TestSampleOutcomes:
    def test_basis_state_always_same_draw(self):
        layout = RegisterLayout(n=3, m=1)
        counts = sample_outcomes(basis_state(5, 1, layout), shots=64, seed=1)
        assert counts == {(5, 1): 64}

    def test_fifty_fifty_concentrates(self):
        state = prepare_superposition([0, 3], RegisterLayout(n=2, m=0))
        counts = sample_outcomes(state, shots=100_000, seed=23)
        for key in ((0, 0), (3, 0)):
            assert abs(counts[key] / 100_000 - 0.5) < 0.01

    def test_seed_reproducibility(self):
        state = prepare_superposition([0, 1, 2, 3], RegisterLayout(n=2, m=0))
        a = sample_outcomes(state, shots=1000, seed=99)
        b = sample_outcomes(state, shots=1000, seed=99)
        assert a == b

    def test_born_rule_chi_square(self):
        layout = RegisterLayout(n=3, m=0)
        state = random_state(layout, seed=5)
        probs = enumerate_outcomes(state)
        counts = sample_outcomes(state, shots=100_000, seed=17)
        keys = sorted(probs)
        observed = [counts.get(k, 0) for k in keys]
        expected = [probs[k] * 100_000 for k in keys]
        _, p_value = chisquare(observed, expected)
        assert p_value > 0.001

    def test_zero_shots_rejected(self):
        state = prepare_superposition([0], RegisterLayout(n=1, m=0))
        with pytest.raises(ValueError, match="shots"):
            sample_outcomes(state, shots=0, seed=0)


class TestApplyEffect:
    def test_identity_effect_is_noop(self):
        layout = RegisterLayout(n=3, m=0)
        state = random_state(layout, seed=2)
        identity = EffectOperator(center=0, delta=1.0, weights=np.ones(8))
        out, prob = apply_effect(state, identity)
        assert prob == pytest.approx(1.0)
        np.testing.assert_allclose(out.amplitudes, state.amplitudes)

    def test_projector_effect_sharp_limit(self):
        layout = RegisterLayout(n=2, m=0)
        state = prepare_superposition([1, 2], layout)
        weights = np.zeros(4)
        weights[2] = 1.0
        projector = EffectOperator(center=2, delta=1.0, weights=weights)
        out, prob = apply_effect(state, projector)
        assert prob == pytest.approx(0.5)
        expected = np.zeros(4, dtype=complex)
        expected[2] = 1.0
        np.testing.assert_allclose(out.amplitudes, expected)

    def test_gaussian_effect_amplitude_ratios(self):
        layout = RegisterLayout(n=3, m=0)
        state = prepare_superposition([4, 5, 6], layout)
        out, _ = apply_effect(state, build_effect(center=5, delta=1.0, n=3))
        side = np.exp(-0.25)  # sqrt of the one-step Gaussian weight ratio
        ratio = np.abs(out.amplitudes[4]) / np.abs(out.amplitudes[5])
        assert ratio == pytest.approx(side, abs=1e-12)
        assert np.abs(out.amplitudes[6]) / np.abs(out.amplitudes[5]) == pytest.approx(side, abs=1e-12)
        assert out.norm() == pytest.approx(1.0)

    def test_effect_acts_as_identity_on_ancillae(self):
        layout = RegisterLayout(n=2, m=1)
        amps = np.zeros(layout.size, dtype=np.complex128)
        amps[(1 << 1) | 1] = 1.0  # code 1, label 1
        state = StateVector(layout=layout, amplitudes=amps)
        out, prob = apply_effect(state, build_effect(center=1, delta=1.0, n=2))
        assert prob == pytest.approx(1.0 / np.sqrt(2 * np.pi))
        np.testing.assert_allclose(np.abs(out.amplitudes[(1 << 1) | 1]), 1.0)

    def test_dimension_mismatch_rejected(self):
        state = prepare_superposition([0], RegisterLayout(n=3, m=0))
        with pytest.raises(ValueError, match="distance qubits"):
            apply_effect(state, build_effect(center=0, delta=1.0, n=2))

    def test_annihilating_effect_rejected(self):
        layout = RegisterLayout(n=2, m=0)
        state = prepare_superposition([0], layout)
        weights = np.zeros(4)
        weights[3] = 1.0
        dead = EffectOperator(center=3, delta=1.0, weights=weights)
        with pytest.raises(ValueError, match="annihilates"):
            apply_effect(state, dead)

    def test_complete_family_probabilities_sum_to_one(self):
        layout = RegisterLayout(n=4, m=0)
        family = normalize_effect_family(n=4, delta=2.0)
        for seed in range(3):
            state = random_state(layout, seed)
            total = sum(apply_effect(state, effect)[1] for effect in family)
            assert total == pytest.approx(1.0, abs=1e-9)
