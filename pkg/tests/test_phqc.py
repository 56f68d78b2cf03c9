import math

import numpy as np
import pytest

from ceqaoa.encoded import BlockLayout, EncodedState, label_to_index, uniform_initial_state
from ceqaoa.hamiltonian import TspInstance, anchor, brute_force_optimum, build_cost_diagonal, tour_cost
from ceqaoa.layers import LayerSchedule
from ceqaoa.phqc import (
    AngleGrid,
    ShotSet,
    default_grid,
    derive_seed,
    exact_success_probability,
    phqc_solve,
    required_shots,
    sample_shots,
    score_shots,
    square_grid,
)

from oracles import random_asymmetric_instance, random_symmetric_instance

MATRIX_4 = np.array(
    [[0, 10, 15, 20], [10, 0, 35, 25], [15, 35, 0, 30], [20, 25, 30, 0]], dtype=float
)


def example_4():
    return anchor(TspInstance("ex4", 4, MATRIX_4), 0)


class TestGrids:
    def test_default_grid_points(self):
        g = default_grid(4)
        assert len(g.gammas) == len(g.betas) == 5
        assert math.pi / 2 in g.gammas and 3 * math.pi / 4 in g.betas
        assert g.size == 25

    def test_default_grid_n6_contains_table_angles(self):
        g = default_grid(6)
        assert 5 * math.pi / 6 in g.gammas and 4 * math.pi / 6 in g.betas

    def test_default_grid_n3_has_16_points(self):
        assert default_grid(3).size == 16

    def test_square_grid(self):
        g = square_grid(20)
        assert g.size == 400
        assert g.gammas[0] == 0.0 and g.gammas[-1] == pytest.approx(math.pi)

    def test_validation(self):
        with pytest.raises(ValueError):
            AngleGrid((), (0.0,))
        with pytest.raises(ValueError):
            AngleGrid((1.0, 0.5), (0.0,))


class TestSampling:
    def test_basis_state_all_shots_equal(self):
        lay = BlockLayout(3, 2)
        amps = np.zeros(lay.D, dtype=complex)
        amps[label_to_index(lay, (2, 0))] = 1.0
        shots = sample_shots(EncodedState(lay, amps), 50, seed=1)
        assert shots.counts == {(2, 0): 50}

    def test_uniform_counts_within_five_sigma(self):
        lay = BlockLayout(3, 3)
        shots = sample_shots(uniform_initial_state(lay), 27000, seed=2)
        sigma = math.sqrt(27000 * (1 / 27) * (26 / 27))
        assert sum(shots.counts.values()) == 27000
        for cnt in shots.counts.values():
            assert abs(cnt - 1000) <= 5 * sigma

    def test_same_seed_identical(self):
        lay = BlockLayout(3, 3)
        state = uniform_initial_state(lay)
        a = sample_shots(state, 500, seed=7)
        b = sample_shots(state, 500, seed=7)
        assert a.counts == b.counts

    def test_shotset_validation(self):
        lay = BlockLayout(2, 2)
        with pytest.raises(ValueError):
            ShotSet(lay, {(0, 0): 2}, 3)
        with pytest.raises(ValueError):
            ShotSet(lay, {(0, 5): 3}, 3)

    def test_rejects_zero_shots(self):
        with pytest.raises(ValueError):
            sample_shots(uniform_initial_state(BlockLayout(2, 2)), 0, seed=0)


class TestRequiredShots:
    def test_worked_examples(self):
        delta = math.exp(-10)
        assert required_shots(1 / 27, delta) == 270
        assert required_shots(0.01, delta) == 1000
        assert required_shots(1.0, 0.01) == math.ceil(math.log(100))

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            required_shots(0.0, 0.5)
        with pytest.raises(ValueError):
            required_shots(0.5, 1.0)


class TestScoring:
    def test_injected_optimum_is_found(self):
        enc = example_4()
        optimum = brute_force_optimum(enc).best_label
        shots = ShotSet(
            enc.layout,
            {(0, 0, 0): 80, (0, 1, 2): 19, optimum: 1},  # optimum appears once
            100,
        )
        scored = score_shots(enc, shots)
        assert scored.best_label == optimum
        assert scored.best_cost == 80.0
        assert scored.feasible_shots == 20

    def test_tie_breaks_to_lowest_flat_index(self):
        enc = example_4()
        # (0, 2, 1) and (1, 2, 0) are the two degenerate optima
        shots = ShotSet(enc.layout, {(1, 2, 0): 5, (0, 2, 1): 5}, 10)
        assert score_shots(enc, shots).best_label == (0, 2, 1)

    def test_no_feasible_samples(self):
        enc = example_4()
        shots = ShotSet(enc.layout, {(0, 0, 0): 3, (1, 1, 2): 2}, 5)
        scored = score_shots(enc, shots)
        assert scored.best_label is None and scored.best_cost is None
        assert scored.feasible_shots == 0


class TestSolve:
    def test_recovers_brute_force_on_example(self):
        enc = example_4()
        res = phqc_solve(enc, master_seed=5)
        assert res.best_cost == 80.0
        assert res.best_cost == tour_cost(enc, res.best_label)
        assert res.degenerate_optima == 2
        assert 0 < res.feasible_fraction < 1
        assert len(res.per_grid_stats) == 25

    def test_best_is_min_over_grid_stats(self):
        res = phqc_solve(example_4(), master_seed=6)
        observed = [s.min_sampled_cost for s in res.per_grid_stats if s.min_sampled_cost is not None]
        assert res.best_cost == min(observed)

    def test_deterministic_given_seed(self):
        a = phqc_solve(example_4(), master_seed=9)
        b = phqc_solve(example_4(), master_seed=9)
        assert a.best_label == b.best_label
        assert a.best_cost == b.best_cost
        assert a.per_grid_stats == b.per_grid_stats

    def test_single_shot_semantics(self):
        enc = example_4()
        grid = AngleGrid((0.0,), (0.0,))
        found_feasible = found_empty = False
        for seed in range(40):
            res = phqc_solve(enc, grid=grid, shots_per_point=1, master_seed=seed)
            frac = res.per_grid_stats[0].feasible_fraction
            assert frac in (0.0, 1.0)
            if res.best_label is None:
                assert frac == 0.0 and res.best_angles is None and res.p_opt_exact is None
                found_empty = True
            else:
                assert frac == 1.0
                assert res.best_cost == tour_cost(enc, res.best_label)
                found_feasible = True
            if found_feasible and found_empty:
                break
        assert found_feasible and found_empty

    def test_explicit_schedule_list(self):
        enc = example_4()
        schedules = [LayerSchedule.constant(0.0, 0.0), LayerSchedule.constant(1.1, 0.6)]
        res = phqc_solve(enc, shots_per_point=500, master_seed=3, schedules=schedules)
        assert res.best_cost == 80.0
        assert len(res.per_grid_stats) == 2

    def test_derive_seed_stable(self):
        assert derive_seed(1, 2) == derive_seed(1, 2)
        assert derive_seed(1, 2) != derive_seed(1, 3)
        assert derive_seed(2, 2) != derive_seed(1, 2)

    @pytest.mark.parametrize("n_cities", [4, 5])
    def test_oracle_equivalence_small(self, n_cities):
        inst = TspInstance("r", n_cities, random_symmetric_instance(n_cities, 60 + n_cities))
        enc = anchor(inst, 0)
        oracle = brute_force_optimum(enc)
        res = phqc_solve(enc, shots_per_point=10 * n_cities**3, master_seed=77)
        assert res.best_cost == pytest.approx(oracle.best_cost, rel=1e-12)


class TestExactSuccess:
    def test_uniform_angles_give_degeneracy_over_dimension(self):
        enc = example_4()
        p, k = exact_success_probability(enc, LayerSchedule.constant(0.0, 0.0))
        assert k == 2
        assert p == pytest.approx(2 / 27, abs=1e-13)

    def test_unique_optimum_asymmetric(self):
        inst = TspInstance("a4", 4, random_asymmetric_instance(4, 1))
        enc = anchor(inst, 0)
        p, k = exact_success_probability(enc, LayerSchedule.constant(0.0, 0.0))
        assert k == 1
        assert p == pytest.approx(1 / 27, abs=1e-13)

    def test_fully_degenerate_instance_mass_is_feasible_mass(self):
        m = np.ones((4, 4)) - np.eye(4)
        enc = anchor(TspInstance("eq4", 4, m), 0)
        diag = build_cost_diagonal(enc)
        for gamma, beta in [(0.0, 0.0), (0.9, 1.7), (2.2, 0.3)]:
            sched = LayerSchedule.constant(gamma, beta)
            p, k = exact_success_probability(enc, sched)
            assert k == 6
            from ceqaoa.layers import run_circuit

            probs = run_circuit(diag, sched).probabilities()
            feasible_mass = float(probs[diag.feasible_mask()].sum())
            assert p == pytest.approx(feasible_mass, abs=1e-12)
