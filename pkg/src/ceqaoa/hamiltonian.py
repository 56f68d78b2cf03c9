"""TSP instances, the anchored reduction, and diagonal cost/penalty energies.

Anchoring fixes the start city, leaving m = n_cities - 1 tour positions
(blocks), each choosing among the n_cities - 1 remaining cities (symbols).
A label is feasible when its symbols are pairwise distinct; the per-block
one-hot constraint is structural in the encoding, so only the symbol
multiplicity penalty survives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import islice, permutations

import numpy as np

from .encoded import BlockLayout, Label, index_to_label

# Absorbs summation-order noise when counting exactly degenerate tours
# (e.g. the reversal of a tour on a symmetric instance).
TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TspInstance:
    """A (possibly asymmetric) TSP instance given by its distance matrix."""

    name: str
    n_cities: int
    distances: np.ndarray
    known_optimum: float | None = None

    def __post_init__(self) -> None:
        dist = np.asarray(self.distances, dtype=np.float64)
        object.__setattr__(self, "distances", dist)
        n = self.n_cities
        if n < 2:
            raise ValueError(f"instance {self.name!r} needs at least 2 cities")
        if dist.shape != (n, n):
            raise ValueError(
                f"instance {self.name!r}: distance matrix shape {dist.shape} != ({n}, {n})"
            )
        if not np.all(np.isfinite(dist)):
            raise ValueError(f"instance {self.name!r}: non-finite distance entry")
        if np.any(dist < 0):
            raise ValueError(f"instance {self.name!r}: negative distance entry")
        if np.any(np.diagonal(dist) != 0):
            raise ValueError(f"instance {self.name!r}: nonzero diagonal entry")

    @property
    def max_distance(self) -> float:
        return float(self.distances.max())


@dataclass(frozen=True, eq=False)
class AnchoredTsp:
    """TSP with a fixed start city; blocks index tour positions 1..n_cities-1."""

    instance: TspInstance
    start_city: int
    layout: BlockLayout
    city_of_symbol: tuple[int, ...]


def anchor(instance: TspInstance, start: int = 0) -> AnchoredTsp:
    """Fix the start city; symbols map to the remaining cities in ascending order."""
    if instance.n_cities < 3:
        raise ValueError("need at least 3 cities for a nontrivial tour")
    if not 0 <= start < instance.n_cities:
        raise ValueError(f"start city {start} outside [0, {instance.n_cities})")
    rest = tuple(c for c in range(instance.n_cities) if c != start)
    n_red = instance.n_cities - 1
    return AnchoredTsp(instance, start, BlockLayout(n_red, n_red), rest)


def is_feasible(enc: AnchoredTsp, label) -> bool:
    """True when all symbols are pairwise distinct (a permutation for m == n)."""
    label = enc.layout.validate_label(label)
    return len(set(label)) == enc.layout.m


def tour_cities(enc: AnchoredTsp, label) -> tuple[int, ...]:
    """Full city cycle for a label, starting and ending at the start city."""
    label = enc.layout.validate_label(label)
    mid = tuple(enc.city_of_symbol[j] for j in label)
    return (enc.start_city,) + mid + (enc.start_city,)


def tour_cost(enc: AnchoredTsp, label) -> float:
    """Cyclic tour cost of a feasible label; callers must filter with is_feasible."""
    label = enc.layout.validate_label(label)
    if not is_feasible(enc, label):
        raise ValueError(f"label {label} repeats a city; filter with is_feasible first")
    return _cycle_cost(enc, [enc.city_of_symbol[j] for j in label])


def _cycle_cost(enc: AnchoredTsp, cities) -> float:
    # Left-to-right accumulation; build_cost_diagonal uses the same order so
    # scalar and vectorized costs agree bitwise.
    C = enc.instance.distances
    cost = C[enc.start_city, cities[0]]
    for a, b in zip(cities[:-1], cities[1:]):
        cost = cost + C[a, b]
    return float(cost + C[cities[-1], enc.start_city])


@dataclass(frozen=True, eq=False)
class CostDiagonal:
    """Objective and penalty energies over every encoded basis label.

    penalty[x] is zero exactly when x is feasible; the objective extends the
    cyclic tour formula to infeasible labels as well, because the phase
    layer acts on the whole encoded space.
    """

    layout: BlockLayout
    objective: np.ndarray
    penalty: np.ndarray
    penalty_weight: float
    total: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        obj = np.asarray(self.objective, dtype=np.float64)
        pen = np.asarray(self.penalty, dtype=np.float64)
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "penalty", pen)
        if obj.shape != (self.layout.D,) or pen.shape != (self.layout.D,):
            raise ValueError("diagonal vectors must have length layout.D")
        if np.any(pen < 0):
            raise ValueError("penalty energies must be non-negative")
        if not self.penalty_weight > 0:
            raise ValueError(f"penalty weight must be positive, got {self.penalty_weight}")
        object.__setattr__(self, "total", obj + pen)

    def feasible_mask(self) -> np.ndarray:
        return self.penalty == 0.0


def default_penalty_weight(instance: TspInstance) -> float:
    """n_cities * max distance (at least 1), dominating any objective gap."""
    return max(float(instance.n_cities) * instance.max_distance, 1.0)


def build_cost_diagonal(enc: AnchoredTsp, penalty_weight: float | None = None) -> CostDiagonal:
    """Evaluate the cyclic objective and the symbol-multiplicity penalty on all labels.

    The penalty at a label with symbol counts (c_0, ..., c_{n-1}) is
    weight * sum_a (c_a - 1)**2, computed through the pair-collision identity
    sum_a (c_a - 1)**2 = n - m + 2 * #{block pairs with equal symbols}.
    """
    lam = default_penalty_weight(enc.instance) if penalty_weight is None else float(penalty_weight)
    if lam <= 0:
        raise ValueError(f"penalty weight must be positive, got {lam}")
    layout = enc.layout
    C = enc.instance.distances
    cities = np.asarray(enc.city_of_symbol, dtype=np.int64)
    sym_dtype = np.int8 if layout.n < 128 else np.int32
    sym = [layout.symbol_column(b, dtype=sym_dtype) for b in range(layout.m)]

    prev = cities[sym[0]]
    objective = C[enc.start_city, prev]
    for b in range(1, layout.m):
        cur = cities[sym[b]]
        objective = objective + C[prev, cur]
        prev = cur
    objective = objective + C[prev, enc.start_city]

    collisions = np.zeros(layout.D, dtype=np.int16)
    for i in range(layout.m):
        for j in range(i + 1, layout.m):
            collisions += sym[i] == sym[j]
    penalty = lam * (layout.n - layout.m + 2 * collisions).astype(np.float64)
    return CostDiagonal(layout, objective, penalty, lam)


@dataclass(frozen=True)
class BruteForceResult:
    best_label: Label
    best_cost: float
    degeneracy: int
    optimal_labels: tuple[Label, ...]


def _tie_threshold(best: float) -> float:
    return TIE_TOL * max(1.0, abs(best))


def brute_force_optimum(enc: AnchoredTsp, chunk_size: int = 200_000) -> BruteForceResult:
    """Enumerate all (n_cities - 1)! anchored tours and collect every optimum.

    Exact ties (degenerate optima) are counted with a tolerance that only
    absorbs float summation-order noise; with integer distances the tie set
    is exact.  Refuses m > 10 (factorial blow-up).
    """
    m = enc.layout.m
    if m > 10:
        raise ValueError(f"refusing factorial enumeration for m={m} > 10")
    C = enc.instance.distances
    cities = np.asarray(enc.city_of_symbol, dtype=np.int64)
    start = enc.start_city
    radix = np.array([enc.layout.n ** (m - 1 - b) for b in range(m)], dtype=np.int64)

    best = math.inf
    cand_flats: list[np.ndarray] = []
    cand_costs: list[np.ndarray] = []
    gen = permutations(range(m))
    while True:
        chunk = list(islice(gen, chunk_size))
        if not chunk:
            break
        sym = np.asarray(chunk, dtype=np.int64)
        seq = cities[sym]
        cost = C[start, seq[:, 0]]
        for b in range(1, m):
            cost = cost + C[seq[:, b - 1], seq[:, b]]
        cost = cost + C[seq[:, -1], start]
        best = min(best, float(cost.min()))
        keep = cost <= best + _tie_threshold(best)
        cand_flats.append(sym[keep] @ radix)
        cand_costs.append(cost[keep])

    flats = np.concatenate(cand_flats)
    costs = np.concatenate(cand_costs)
    sel = costs <= best + _tie_threshold(best)
    flats = np.sort(flats[sel])
    labels = tuple(index_to_label(enc.layout, int(f)) for f in flats)
    return BruteForceResult(labels[0], best, len(labels), labels)
