"""Grid-search hybrid solver: shot sampling, deterministic checking, shot calculus.

Every grid point runs the exact circuit, draws shots from the exact
probabilities, filters feasible samples, and scores them with the tour
objective.  A single appearance of the optimum suffices; the checker never
consults frequency.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from .encoded import BlockLayout, EncodedState, Label, index_to_label, label_to_index
from .hamiltonian import (
    AnchoredTsp,
    BruteForceResult,
    CostDiagonal,
    brute_force_optimum,
    build_cost_diagonal,
)
from .layers import DEFAULT_NORMALIZATION, LayerSchedule, MixerNormalization, run_circuit


@dataclass(frozen=True)
class AngleGrid:
    """Rectangular (gamma, beta) grid; points iterate gamma-major."""

    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self) -> None:
        gammas = tuple(float(g) for g in self.gammas)
        betas = tuple(float(b) for b in self.betas)
        object.__setattr__(self, "gammas", gammas)
        object.__setattr__(self, "betas", betas)
        for axis, vals in (("gamma", gammas), ("beta", betas)):
            if not vals:
                raise ValueError(f"empty {axis} axis")
            if any(not math.isfinite(v) for v in vals):
                raise ValueError(f"non-finite {axis} value")
            if list(vals) != sorted(vals):
                raise ValueError(f"{axis} axis must be sorted ascending")

    @property
    def size(self) -> int:
        return len(self.gammas) * len(self.betas)

    def points(self) -> Iterator[tuple[int, float, float]]:
        idx = 0
        for g in self.gammas:
            for b in self.betas:
                yield idx, g, b
                idx += 1


def default_grid(n_cities: int) -> AngleGrid:
    """(n+1) x (n+1) points {j pi / n} over [0, pi]^2, n the original city count."""
    if n_cities < 3:
        raise ValueError(f"need at least 3 cities, got {n_cities}")
    pts = tuple(j * math.pi / n_cities for j in range(n_cities + 1))
    return AngleGrid(pts, pts)


def square_grid(points_per_axis: int) -> AngleGrid:
    """Evenly spaced points_per_axis x points_per_axis grid over [0, pi]^2."""
    if points_per_axis < 2:
        raise ValueError("need at least 2 points per axis")
    pts = tuple(float(v) for v in np.linspace(0.0, math.pi, points_per_axis))
    return AngleGrid(pts, pts)


def derive_seed(master_seed: int, grid_index: int) -> int:
    """Stable per-grid-point seed, so grid points are independent streams."""
    ss = np.random.SeedSequence([int(master_seed), int(grid_index)])
    return int(ss.generate_state(1)[0])


@dataclass(frozen=True, eq=False)
class ShotSet:
    """Measured samples at one angle pair: label -> count, summing to total_shots."""

    layout: BlockLayout
    counts: dict[Label, int]
    total_shots: int
    angles: tuple[float, float] | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.total_shots < 1:
            raise ValueError(f"total_shots must be >= 1, got {self.total_shots}")
        total = 0
        for label, cnt in self.counts.items():
            self.layout.validate_label(label)
            if cnt < 0:
                raise ValueError(f"negative count for label {label}")
            total += cnt
        if total != self.total_shots:
            raise ValueError(f"counts sum to {total}, expected {self.total_shots}")


def sample_shots(
    state: EncodedState,
    total_shots: int,
    seed: int,
    angles: tuple[float, float] | None = None,
) -> ShotSet:
    """Draw total_shots independent samples from the exact probability vector."""
    if total_shots < 1:
        raise ValueError(f"total_shots must be >= 1, got {total_shots}")
    rng = np.random.default_rng(seed)
    p = state.probabilities()
    flats = rng.choice(state.layout.D, size=total_shots, p=p / p.sum())
    uniq, cnts = np.unique(flats, return_counts=True)
    counts = {index_to_label(state.layout, int(f)): int(c) for f, c in zip(uniq, cnts)}
    return ShotSet(state.layout, counts, total_shots, angles, int(seed))


def required_shots(p_min: float, delta: float) -> int:
    """ceil(ln(1/delta) / p_min): shots so the target appears at least once w.p. >= 1 - delta."""
    if not 0.0 < p_min <= 1.0:
        raise ValueError(f"p_min must lie in (0, 1], got {p_min}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return math.ceil(math.log(1.0 / delta) / p_min)


@dataclass(frozen=True)
class ScoredShots:
    best_label: Label | None
    best_cost: float | None
    best_flat: int | None
    feasible_shots: int


def score_shots(enc: AnchoredTsp, shots: ShotSet, diag: CostDiagonal | None = None) -> ScoredShots:
    """Deterministic checker: keep feasible samples, score with the tour objective.

    Frequency never matters; ties on cost break toward the lowest flat index.
    """
    if diag is None:
        diag = build_cost_diagonal(enc)
    if shots.layout != enc.layout or diag.layout != enc.layout:
        raise ValueError("shot set, diagonal, and instance layouts must agree")
    best: tuple[float, int] | None = None
    feasible = 0
    for label, cnt in shots.counts.items():
        flat = label_to_index(shots.layout, label)
        if diag.penalty[flat] != 0.0:
            continue
        feasible += cnt
        key = (float(diag.objective[flat]), flat)
        if best is None or key < best:
            best = key
    if best is None:
        return ScoredShots(None, None, None, 0)
    cost, flat = best
    return ScoredShots(index_to_label(shots.layout, flat), cost, flat, feasible)


@dataclass(frozen=True)
class GridPointStat:
    grid_index: int
    gamma: float
    beta: float
    feasible_fraction: float
    min_sampled_cost: float | None


@dataclass(frozen=True, eq=False)
class PhqcResult:
    """Best feasible sample, its cost, the winning angles, and overlap statistics.

    feasible_fraction aggregates over every sampled shot (per-point values
    sit in per_grid_stats).  p_opt_exact is the simulator-exact probability
    mass on all degenerate optima at the winning angles; it is None when no
    feasible sample appeared or the brute-force oracle is out of range.
    """

    best_label: Label | None
    best_cost: float | None
    best_angles: tuple[float, float] | None
    feasible_fraction: float
    p_opt_exact: float | None
    degenerate_optima: int | None
    per_grid_stats: tuple[GridPointStat, ...]
    shots_per_point: int
    depth: int
    master_seed: int


PointHook = Callable[[GridPointStat, ShotSet, CostDiagonal], None]


def phqc_solve(
    enc: AnchoredTsp,
    depth: int = 1,
    grid: AngleGrid | None = None,
    shots_per_point: int | None = None,
    norm: MixerNormalization = DEFAULT_NORMALIZATION,
    master_seed: int = 0,
    penalty_weight: float | None = None,
    schedules: Sequence[LayerSchedule] | None = None,
    point_hook: PointHook | None = None,
) -> PhqcResult:
    """Grid-search solve: sample every angle point, return the best feasible tour.

    Each grid point repeats its (gamma, beta) pair across all depth layers;
    pass explicit schedules to search arbitrary angle sequences instead of
    the 2-D grid.  Per-point seeds derive from (master_seed, grid_index), so
    any evaluation order gives identical output.
    """
    if shots_per_point is None:
        shots_per_point = 10 * enc.instance.n_cities**3
    if shots_per_point < 1:
        raise ValueError(f"shots_per_point must be >= 1, got {shots_per_point}")
    diag = build_cost_diagonal(enc, penalty_weight)

    if schedules is None:
        if grid is None:
            grid = default_grid(enc.instance.n_cities)
        plan = [(i, g, b, LayerSchedule.constant(g, b, depth)) for i, g, b in grid.points()]
    else:
        plan = [(i, s.pairs[0][0], s.pairs[0][1], s) for i, s in enumerate(schedules)]
        if not plan:
            raise ValueError("empty schedule list")

    stats: list[GridPointStat] = []
    best: tuple[float, int, int] | None = None  # (cost, flat, grid index)
    feasible_total = 0
    for idx, g, b, sched in plan:
        state = run_circuit(diag, sched, norm)
        shots = sample_shots(state, shots_per_point, derive_seed(master_seed, idx), (g, b))
        scored = score_shots(enc, shots, diag)
        stat = GridPointStat(
            idx, g, b, scored.feasible_shots / shots_per_point, scored.best_cost
        )
        stats.append(stat)
        feasible_total += scored.feasible_shots
        if point_hook is not None:
            point_hook(stat, shots, diag)
        if scored.best_flat is not None:
            key = (scored.best_cost, scored.best_flat, idx)
            if best is None or key < best:
                best = key

    feasible_fraction = feasible_total / (shots_per_point * len(plan))
    best_label = best_cost = best_angles = p_opt = degen = None
    if best is not None:
        cost, flat, win_idx = best
        best_label = index_to_label(enc.layout, flat)
        best_cost = cost
        best_angles = (stats[win_idx].gamma, stats[win_idx].beta)
        if enc.layout.m <= 10:
            oracle = brute_force_optimum(enc)
            win_state = run_circuit(diag, plan[win_idx][3], norm)
            p_opt = _optimal_mass(win_state, enc, oracle)
            degen = oracle.degeneracy
    return PhqcResult(
        best_label,
        best_cost,
        best_angles,
        feasible_fraction,
        p_opt,
        degen,
        tuple(stats),
        shots_per_point,
        depth if schedules is None else max(s.depth for s in schedules),
        master_seed,
    )


def _optimal_mass(state: EncodedState, enc: AnchoredTsp, oracle: BruteForceResult) -> float:
    p = state.probabilities()
    flats = [label_to_index(enc.layout, lab) for lab in oracle.optimal_labels]
    return float(p[flats].sum())


def exact_success_probability(
    enc: AnchoredTsp,
    schedule: LayerSchedule,
    norm: MixerNormalization = DEFAULT_NORMALIZATION,
    penalty_weight: float | None = None,
    diag: CostDiagonal | None = None,
    oracle: BruteForceResult | None = None,
) -> tuple[float, int]:
    """Exact probability mass on every optimal label after the circuit.

    Returns (p_opt, number of degenerate optima); needs the brute-force
    oracle, hence m <= 10.
    """
    if diag is None:
        diag = build_cost_diagonal(enc, penalty_weight)
    if oracle is None:
        oracle = brute_force_optimum(enc)
    state = run_circuit(diag, schedule, norm)
    return _optimal_mass(state, enc, oracle), oracle.degeneracy
