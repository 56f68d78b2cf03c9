import numpy as np
import pytest

from ceqaoa.encoded import BlockLayout, EncodedState, uniform_initial_state
from ceqaoa.hamiltonian import TspInstance, anchor, build_cost_diagonal
from ceqaoa.layers import (
    LayerSchedule,
    MixerNormalization,
    apply_mixer,
    apply_phase,
    mixer_block_matrix,
    mixer_spectrum,
    run_circuit,
)

from oracles import dense_block_mixer, kron_mixer, random_symmetric_instance

RAW = MixerNormalization.RAW
OVER_N = MixerNormalization.OVER_N


def small_diag(n_cities=4, seed=0, start=0):
    inst = TspInstance("t", n_cities, random_symmetric_instance(n_cities, seed))
    return build_cost_diagonal(anchor(inst, start))


def random_state(layout, seed):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=layout.D) + 1j * rng.normal(size=layout.D)
    return EncodedState(layout, amps / np.linalg.norm(amps))


class TestNormalization:
    def test_scales(self):
        assert RAW.scale(5) == 1.0
        assert OVER_N.scale(5) == 0.2
        assert MixerNormalization.OVER_N_MINUS_1.scale(5) == 0.25


class TestSchedule:
    def test_constant(self):
        s = LayerSchedule.constant(0.1, 0.2, 3)
        assert s.depth == 3
        assert s.pairs == ((0.1, 0.2),) * 3

    def test_rejects_empty_and_nonfinite(self):
        with pytest.raises(ValueError):
            LayerSchedule(())
        with pytest.raises(ValueError):
            LayerSchedule(((np.inf, 0.0),))
        with pytest.raises(ValueError):
            LayerSchedule.constant(0, 0, 0)


class TestPhase:
    def test_gamma_zero_identity(self):
        diag = small_diag()
        state = uniform_initial_state(diag.layout)
        out = apply_phase(state, 0.0, diag)
        assert np.array_equal(out.amplitudes, state.amplitudes)

    def test_probabilities_unchanged(self):
        diag = small_diag(seed=3)
        state = random_state(diag.layout, 4)
        out = apply_phase(state, 1.234, diag)
        assert np.allclose(out.probabilities(), state.probabilities(), atol=1e-14)

    def test_phase_arithmetic(self):
        # energy 2 at gamma pi/2 multiplies the amplitude by -1
        lay = BlockLayout(2, 1)
        diag_vec = np.array([2.0, 0.0])
        from ceqaoa.hamiltonian import CostDiagonal

        diag = CostDiagonal(lay, diag_vec, np.zeros(2), 1.0)
        state = EncodedState(lay, np.array([1.0, 0.0], dtype=complex))
        out = apply_phase(state, np.pi / 2, diag)
        assert abs(out.amplitudes[0] + 1.0) < 1e-15

    def test_layout_mismatch(self):
        diag = small_diag()
        with pytest.raises(ValueError):
            apply_phase(uniform_initial_state(BlockLayout(3, 2)), 0.1, diag)


class TestMixerBlockMatrix:
    def test_beta_zero_identity(self):
        assert np.allclose(mixer_block_matrix(4, 0.0, RAW), np.eye(4), atol=1e-15)

    def test_worked_column(self):
        u = mixer_block_matrix(3, np.pi, RAW)
        assert np.allclose(u[:, 0], [-1 / 3, 2 / 3, 2 / 3], atol=1e-12)

    def test_unitarity_sweep(self):
        rng = np.random.default_rng(5)
        for n in range(2, 17):
            for beta in rng.uniform(-2 * np.pi, 2 * np.pi, 100):
                u = mixer_block_matrix(n, beta, RAW)
                assert np.max(np.abs(u.conj().T @ u - np.eye(n))) < 1e-12

    def test_against_eigendecomposition(self):
        rng = np.random.default_rng(6)
        for n in range(2, 9):
            for beta in rng.uniform(-np.pi, np.pi, 10):
                dense = dense_block_mixer(n, beta)
                assert np.max(np.abs(dense - mixer_block_matrix(n, beta, RAW))) < 1e-10

    def test_normalization_rescales_angle(self):
        n, beta = 5, 0.9
        assert np.allclose(
            mixer_block_matrix(n, beta, OVER_N), mixer_block_matrix(n, beta / n, RAW), atol=1e-14
        )


class TestApplyMixer:
    def test_beta_zero(self):
        lay = BlockLayout(3, 2)
        state = random_state(lay, 7)
        out = apply_mixer(state, 0.0, RAW)
        assert np.allclose(out.amplitudes, state.amplitudes, atol=1e-15)

    def test_uniform_is_eigenvector(self):
        lay = BlockLayout(4, 3)
        state = uniform_initial_state(lay)
        beta = 0.77
        out = apply_mixer(state, beta, OVER_N)
        phase = np.exp(-1j * (beta / lay.n) * (lay.n - 1) * lay.m)
        assert np.max(np.abs(out.amplitudes - phase * state.amplitudes)) < 1e-12
        assert np.max(np.abs(out.probabilities() - 1 / lay.D)) < 1e-12

    def test_single_block_example(self):
        lay = BlockLayout(3, 1)
        state = EncodedState(lay, np.array([1, 0, 0], dtype=complex))
        out = apply_mixer(state, np.pi, RAW)
        assert np.allclose(out.probabilities(), [1 / 9, 4 / 9, 4 / 9], atol=1e-12)

    def test_factorization_against_kron(self):
        lay = BlockLayout(3, 2)
        for seed, beta in [(8, 0.3), (9, 1.9), (10, -0.8)]:
            state = random_state(lay, seed)
            expected = kron_mixer(3, 2, beta) @ state.amplitudes
            out = apply_mixer(state, beta, RAW)
            assert np.max(np.abs(out.amplitudes - expected)) < 1e-12

    def test_norm_preserved(self):
        lay = BlockLayout(5, 3)
        state = random_state(lay, 11)
        out = apply_mixer(state, 2.1, OVER_N)
        assert abs(np.vdot(out.amplitudes, out.amplitudes).real - 1) < 1e-10


class TestRunCircuit:
    def test_zero_angles_give_uniform(self):
        diag = small_diag()
        out = run_circuit(diag, LayerSchedule.constant(0.0, 0.0))
        assert np.allclose(out.amplitudes, uniform_initial_state(diag.layout).amplitudes, atol=1e-14)

    def test_gamma_zero_keeps_uniform_probabilities(self):
        diag = small_diag(seed=12)
        for beta in (0.4, 1.3, 2.9):
            out = run_circuit(diag, LayerSchedule.constant(0.0, beta))
            assert np.max(np.abs(out.probabilities() - 1 / diag.layout.D)) < 1e-12

    def test_norm_across_depths(self):
        diag = small_diag(seed=13)
        rng = np.random.default_rng(14)
        for p in (1, 2, 5):
            pairs = tuple((rng.uniform(0, np.pi), rng.uniform(0, np.pi)) for _ in range(p))
            out = run_circuit(diag, LayerSchedule(pairs))
            assert abs(np.vdot(out.amplitudes, out.amplitudes).real - 1) < 1e-10

    def test_order_phase_then_mixer(self):
        diag = small_diag(seed=15)
        sched = LayerSchedule.constant(0.8, 0.5)
        manual = apply_mixer(
            apply_phase(uniform_initial_state(diag.layout), 0.8, diag), 0.5, OVER_N
        )
        auto = run_circuit(diag, sched, OVER_N)
        assert np.array_equal(auto.amplitudes, manual.amplitudes)


class TestSpectrum:
    def test_raw_examples(self):
        s = mixer_spectrum(4, RAW)
        assert np.allclose(np.sort(s.eigenvalues), [-1, -1, -1, 3], atol=1e-9)
        assert abs(s.gap - 4) < 1e-9
        assert abs(mixer_spectrum(2, RAW).gap - 2) < 1e-12

    def test_normalized_gap(self):
        for n in range(2, 17):
            assert abs(mixer_spectrum(n, OVER_N).gap - 1.0) < 1e-12
