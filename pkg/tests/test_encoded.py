import numpy as np
import pytest

from ceqaoa.encoded import (
    BlockLayout,
    BlockPermutation,
    DimensionCapError,
    EncodedState,
    apply_block_permutation,
    index_to_label,
    label_to_index,
    overlap_probability,
    uniform_initial_state,
)


class TestBlockLayout:
    def test_dimension(self):
        assert BlockLayout(3, 3).D == 27
        assert BlockLayout(4, 3).D == 64

    @pytest.mark.parametrize("n,m", [(1, 3), (0, 1), (3, 0)])
    def test_rejects_bad_geometry(self, n, m):
        with pytest.raises(ValueError):
            BlockLayout(n, m)

    def test_dimension_cap(self, monkeypatch):
        monkeypatch.setenv("CEQAOA_MAX_DIM", "100")
        with pytest.raises(DimensionCapError):
            BlockLayout(5, 3)
        BlockLayout(4, 3)  # 64 <= 100

    def test_cap_env_override_allows_more(self, monkeypatch):
        monkeypatch.setenv("CEQAOA_MAX_DIM", str(12**12))
        BlockLayout(12, 12)


class TestLabelIndexing:
    def test_examples(self):
        lay = BlockLayout(3, 3)
        assert label_to_index(lay, (0, 0, 0)) == 0
        assert label_to_index(lay, (1, 2, 0)) == 15  # 1*9 + 2*3 + 0
        assert label_to_index(lay, (2, 2, 2)) == 26

    def test_inverse_examples(self):
        lay = BlockLayout(3, 3)
        assert index_to_label(lay, 0) == (0, 0, 0)
        assert index_to_label(lay, 15) == (1, 2, 0)
        assert index_to_label(lay, 26) == (2, 2, 2)

    def test_round_trip_exhaustive(self):
        lay = BlockLayout(3, 4)
        for idx in range(lay.D):
            label = index_to_label(lay, idx)
            assert label_to_index(lay, label) == idx

    def test_out_of_range(self):
        lay = BlockLayout(3, 2)
        with pytest.raises(ValueError):
            label_to_index(lay, (0, 3))
        with pytest.raises(ValueError):
            label_to_index(lay, (0, 0, 0))
        with pytest.raises(ValueError):
            index_to_label(lay, 9)
        with pytest.raises(ValueError):
            index_to_label(lay, -1)

    def test_symbol_columns_match_labels(self):
        lay = BlockLayout(4, 3)
        labels = lay.all_labels()
        for idx in range(0, lay.D, 7):
            assert tuple(int(v) for v in labels[idx]) == index_to_label(lay, idx)


class TestEncodedState:
    def test_uniform_values(self):
        lay = BlockLayout(3, 3)
        state = uniform_initial_state(lay)
        assert np.allclose(state.probabilities(), 1 / 27, atol=1e-15)
        assert np.all(state.amplitudes.imag == 0)
        assert np.all(state.amplitudes.real > 0)

    def test_uniform_small_cases(self):
        s = uniform_initial_state(BlockLayout(2, 1))
        assert np.allclose(s.amplitudes, [1 / np.sqrt(2)] * 2)
        s = uniform_initial_state(BlockLayout(4, 3))
        assert np.allclose(s.probabilities(), 1 / 64)

    def test_norm_checked(self):
        lay = BlockLayout(2, 1)
        with pytest.raises(ValueError):
            EncodedState(lay, np.array([1.0, 1.0]))
        with pytest.raises(ValueError):
            EncodedState(lay, np.array([1.0, 0.0, 0.0]))

    def test_norm_tolerance_is_tight(self):
        lay = BlockLayout(2, 1)
        EncodedState(lay, np.array([1.0 + 4e-11, 0.0]))  # within 1e-10 on the square
        with pytest.raises(ValueError):
            EncodedState(lay, np.array([1.0 + 1e-9, 0.0]))


class TestBlockPermutation:
    def test_validates(self):
        with pytest.raises(ValueError):
            BlockPermutation(((0, 0),))
        BlockPermutation(((1, 0), (0, 1)))

    def test_identity_and_uniform_invariance(self):
        lay = BlockLayout(3, 2)
        state = uniform_initial_state(lay)
        ident = BlockPermutation.identity(lay)
        out = apply_block_permutation(state, ident)
        assert np.array_equal(out.amplitudes, state.amplitudes)
        rng = np.random.default_rng(0)
        out = apply_block_permutation(state, BlockPermutation.random(lay, rng))
        assert np.array_equal(out.amplitudes, state.amplitudes)

    def test_single_block_swap(self):
        lay = BlockLayout(2, 1)
        state = EncodedState(lay, np.array([0.6, 0.8], dtype=complex))
        out = apply_block_permutation(state, BlockPermutation(((1, 0),)))
        assert np.array_equal(out.amplitudes, np.array([0.8, 0.6], dtype=complex))

    def test_action_on_labels(self):
        # output amplitude at P(x) equals input amplitude at x
        lay = BlockLayout(3, 2)
        rng = np.random.default_rng(1)
        amps = rng.normal(size=lay.D) + 1j * rng.normal(size=lay.D)
        amps /= np.linalg.norm(amps)
        state = EncodedState(lay, amps)
        perm = BlockPermutation.random(lay, rng)
        out = apply_block_permutation(state, perm)
        for idx in range(lay.D):
            x = index_to_label(lay, idx)
            moved = label_to_index(lay, perm.apply_to_label(x))
            assert out.amplitudes[moved] == state.amplitudes[idx]

    def test_group_action(self):
        lay = BlockLayout(3, 3)
        rng = np.random.default_rng(2)
        amps = rng.normal(size=lay.D) + 1j * rng.normal(size=lay.D)
        amps /= np.linalg.norm(amps)
        state = EncodedState(lay, amps)
        p = BlockPermutation.random(lay, rng)
        q = BlockPermutation.random(lay, rng)
        via_two = apply_block_permutation(apply_block_permutation(state, p), q)
        via_one = apply_block_permutation(state, p.then(q))
        assert np.array_equal(via_two.amplitudes, via_one.amplitudes)
        undone = apply_block_permutation(apply_block_permutation(state, p), p.inverse())
        assert np.array_equal(undone.amplitudes, state.amplitudes)

    def test_dimension_mismatch(self):
        lay = BlockLayout(3, 2)
        state = uniform_initial_state(lay)
        with pytest.raises(ValueError):
            apply_block_permutation(state, BlockPermutation(((1, 0), (0, 1))))
        with pytest.raises(ValueError):
            apply_block_permutation(state, BlockPermutation(((0, 1, 2),)))

    def test_norm_preserved_random_sweep(self):
        lay = BlockLayout(4, 3)
        rng = np.random.default_rng(3)
        for _ in range(10):
            amps = rng.normal(size=lay.D) + 1j * rng.normal(size=lay.D)
            amps /= np.linalg.norm(amps)
            state = EncodedState(lay, amps)
            out = apply_block_permutation(state, BlockPermutation.random(lay, rng))
            assert abs(np.vdot(out.amplitudes, out.amplitudes).real - 1) < 1e-10


class TestOverlap:
    def test_uniform(self):
        lay = BlockLayout(3, 3)
        state = uniform_initial_state(lay)
        assert abs(overlap_probability(state, (0, 1, 2)) - 1 / 27) < 1e-15

    def test_basis_state(self):
        lay = BlockLayout(3, 2)
        amps = np.zeros(lay.D, dtype=complex)
        amps[label_to_index(lay, (2, 1))] = 1.0
        state = EncodedState(lay, amps)
        assert overlap_probability(state, (2, 1)) == 1.0
        assert overlap_probability(state, (0, 0)) == 0.0
