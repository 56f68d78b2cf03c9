"""Estimators verifying the design, spectral, controllability, and baseline claims."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations, product

import numpy as np

from .encoded import (
    BlockPermutation,
    index_to_label,
)
from .hamiltonian import AnchoredTsp, CostDiagonal
from .layers import (
    DEFAULT_NORMALIZATION,
    LayerSchedule,
    MixerNormalization,
    mixer_block_matrix,
    run_circuit,
)
from .phqc import exact_success_probability, required_shots

EXHAUSTIVE_TWIRL_LIMIT = 1_000_000


@dataclass(frozen=True)
class TwirlEstimate:
    value: float
    std_error: float | None  # None in exhaustive mode
    n_terms: int


def twirl_average(
    diag: CostDiagonal,
    schedule: LayerSchedule,
    target,
    norm: MixerNormalization = DEFAULT_NORMALIZATION,
    mode: str = "exhaustive",
    n_samples: int = 100_000,
    seed: int = 0,
) -> TwirlEstimate:
    """Average overlap on the permuted target over blockwise symbol permutations.

    The averaged quantity is |<target| P^dag U |s0>|^2 = prob(U|s0>) at
    P(target).  Exhaustive mode enumerates all (n!)**m blockwise
    permutations (refused above 10**6); monte_carlo draws n_samples of them
    uniformly and reports the standard error of the mean.
    """
    layout = diag.layout
    target = layout.validate_label(target)
    probs = run_circuit(diag, schedule, norm).probabilities()
    if mode == "exhaustive":
        count = math.factorial(layout.n) ** layout.m
        if count > EXHAUSTIVE_TWIRL_LIMIT:
            raise ValueError(f"exhaustive twirl over {count} permutations refused")
        total = 0.0
        for ps in product(permutations(range(layout.n)), repeat=layout.m):
            flat = 0
            for p, j in zip(ps, target):
                flat = flat * layout.n + p[j]
            total += probs[flat]
        return TwirlEstimate(total / count, None, count)
    if mode != "monte_carlo":
        raise ValueError(f"unknown mode {mode!r}")
    if n_samples < 2:
        raise ValueError("monte_carlo needs n_samples >= 2")
    rng = np.random.default_rng(seed)
    perms = random_block_permutation_array(layout.n, layout.m, n_samples, rng)
    flats = np.zeros(n_samples, dtype=np.int64)
    for b in range(layout.m):
        flats = flats * layout.n + perms[:, b, target[b]]
    vals = probs[flats]
    se = float(vals.std(ddof=1) / math.sqrt(n_samples))
    return TwirlEstimate(float(vals.mean()), se, n_samples)


def random_block_permutation_array(
    n: int, m: int, count: int, rng: np.random.Generator
) -> np.ndarray:
    """(count, m, n) array of independent uniform permutations of [0, n)."""
    return np.argsort(rng.random((count, m, n)), axis=2)


def find_good_permutation(
    diag: CostDiagonal,
    schedule: LayerSchedule,
    target,
    norm: MixerNormalization = DEFAULT_NORMALIZATION,
) -> tuple[BlockPermutation, float]:
    """Blockwise permutation lifting the target overlap to the histogram peak.

    The image P(target) ranges over every basis label as P ranges over all
    blockwise permutations, so the best permutation reads off the argmax of
    the probability vector (first index wins ties).  The averaging identity
    guarantees the returned overlap is >= 1/D.
    """
    layout = diag.layout
    target = layout.validate_label(target)
    probs = run_circuit(diag, schedule, norm).probabilities()
    flat = int(np.argmax(probs))
    best = index_to_label(layout, flat)
    perms = []
    for jt, jb in zip(target, best):
        p = list(range(layout.n))
        p[jt], p[jb] = p[jb], p[jt]
        perms.append(tuple(p))
    return BlockPermutation(tuple(perms)), float(probs[flat])


def transition_closed_form(n: int) -> np.ndarray:
    """Doubly stochastic angle-averaged transition matrix: diag 1 - 2/n + 2/n^2, off 2/n^2."""
    out = np.full((n, n), 2.0 / n**2)
    np.fill_diagonal(out, 1.0 - 2.0 / n + 2.0 / n**2)
    return out


def angle_averaged_transition(
    n: int,
    quadrature_points: int = 4096,
    norm: MixerNormalization = MixerNormalization.RAW,
) -> np.ndarray:
    """Average |U(beta)_{ij}|^2 over beta in [0, 2pi) on a uniform grid.

    The integrand is a short trigonometric polynomial, so the uniform rule
    is exact to roundoff once quadrature_points exceeds its degree.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if quadrature_points < 64:
        raise ValueError("need at least 64 quadrature points")
    acc = np.zeros((n, n))
    for k in range(quadrature_points):
        beta = 2.0 * math.pi * k / quadrature_points
        acc += np.abs(mixer_block_matrix(n, beta, norm)) ** 2
    return acc / quadrature_points


@dataclass(frozen=True)
class MomentReport:
    mean_overlap: float
    second_moment: float
    haar_mean: float  # 1/D with D = n on a single block
    haar_second: float  # 2/(D(D+1))
    n_samples: int
    std_errors: tuple[float, float]


def block_design_moments(
    n: int, pulse_layers: int, trials: int, seed: int = 0, target: int = 0
) -> MomentReport:
    """Moments of X = |<target| U |uniform>|^2 under random in-block circuits.

    Each layer draws a uniformly random pair (i, j), an angle theta for the
    rotation exp(-i theta (|i><j| + |j><i|)), and a site k with phase
    exp(-i phi |k><k|), theta and phi uniform on [0, 2pi).  All trials
    evolve in one vectorized batch.
    """
    if not 2 <= n <= 8:
        raise ValueError(f"block size {n} outside [2, 8]")
    if trials < 1 or pulse_layers < 0:
        raise ValueError("need trials >= 1 and pulse_layers >= 0")
    if not 0 <= target < n:
        raise ValueError(f"target {target} outside [0, {n})")
    rng = np.random.default_rng(seed)
    pairs = np.array([(i, j) for i in range(n) for j in range(i + 1, n)], dtype=np.int64)
    states = np.full((trials, n), 1.0 / math.sqrt(n), dtype=np.complex128)
    rows = np.arange(trials)
    for _ in range(pulse_layers):
        edge = pairs[rng.integers(0, len(pairs), trials)]
        i, j = edge[:, 0], edge[:, 1]
        theta = rng.uniform(0.0, 2.0 * math.pi, trials)
        c = np.cos(theta)
        s = -1j * np.sin(theta)
        vi = states[rows, i]
        vj = states[rows, j]
        states[rows, i] = c * vi + s * vj
        states[rows, j] = s * vi + c * vj
        k = rng.integers(0, n, trials)
        states[rows, k] *= np.exp(-1j * rng.uniform(0.0, 2.0 * math.pi, trials))
    x = np.abs(states[:, target]) ** 2
    x2 = x**2
    if trials > 1:
        se = (
            float(x.std(ddof=1) / math.sqrt(trials)),
            float(x2.std(ddof=1) / math.sqrt(trials)),
        )
    else:
        se = (math.inf, math.inf)
    return MomentReport(
        float(x.mean()), float(x2.mean()), 1.0 / n, 2.0 / (n * (n + 1)), trials, se
    )


def global_design_moments(
    diag: CostDiagonal, pulse_layers: int, trials: int, seed: int = 0, target: int = 0
) -> MomentReport:
    """Qualitative moment probe for layered random circuits on the full encoded space.

    Each layer applies an independent random pair rotation and site phase on
    every block, then the instance's diagonal energy at a random angle (the
    cross-block entangler).  Reported against the Haar targets at dimension
    D; no tolerance is attached, because no depth constants are.
    """
    layout = diag.layout
    n, m, dim = layout.n, layout.m, layout.D
    if trials < 1 or pulse_layers < 0:
        raise ValueError("need trials >= 1 and pulse_layers >= 0")
    if not 0 <= target < dim:
        raise ValueError(f"target {target} outside [0, {dim})")
    rng = np.random.default_rng(seed)
    pairs = np.array([(i, j) for i in range(n) for j in range(i + 1, n)], dtype=np.int64)
    states = np.full((trials, dim), 1.0 / math.sqrt(dim), dtype=np.complex128)

    def pulse_block(b: int) -> None:
        pre, post = n**b, n ** (m - 1 - b)
        arr = states.reshape(trials, pre, n, post)
        edge = pairs[rng.integers(0, len(pairs), trials)]
        sel_i = np.broadcast_to(edge[:, 0, None, None, None], (trials, pre, 1, post))
        sel_j = np.broadcast_to(edge[:, 1, None, None, None], (trials, pre, 1, post))
        theta = rng.uniform(0.0, 2.0 * math.pi, trials)[:, None, None, None]
        c = np.cos(theta)
        s = -1j * np.sin(theta)
        vi = np.take_along_axis(arr, sel_i, axis=2)
        vj = np.take_along_axis(arr, sel_j, axis=2)
        np.put_along_axis(arr, sel_i, c * vi + s * vj, axis=2)
        np.put_along_axis(arr, sel_j, s * vi + c * vj, axis=2)
        sel_k = np.broadcast_to(
            rng.integers(0, n, trials)[:, None, None, None], (trials, pre, 1, post)
        )
        phi = rng.uniform(0.0, 2.0 * math.pi, trials)[:, None, None, None]
        vk = np.take_along_axis(arr, sel_k, axis=2)
        np.put_along_axis(arr, sel_k, np.exp(-1j * phi) * vk, axis=2)

    for _ in range(pulse_layers):
        for b in range(m):
            pulse_block(b)
        gammas = rng.uniform(0.0, 2.0 * math.pi, trials)
        states *= np.exp(-1j * gammas[:, None] * diag.total[None, :])

    x = np.abs(states[:, target]) ** 2
    x2 = x**2
    if trials > 1:
        se = (
            float(x.std(ddof=1) / math.sqrt(trials)),
            float(x2.std(ddof=1) / math.sqrt(trials)),
        )
    else:
        se = (math.inf, math.inf)
    return MomentReport(
        float(x.mean()), float(x2.mean()), 1.0 / dim, 2.0 / (dim * (dim + 1)), trials, se
    )


def lie_algebra_dimension(n: int, diagonal, tol: float = 1e-8) -> int:
    """Real dimension of the Lie closure of the pair-hop and diagonal generators.

    Generators: i(E_ij + E_ji) for i < j, plus i * diag(d) made traceless;
    d must not be proportional to the all-ones vector.  Closure under
    commutators, with membership decided by twice-reorthogonalized
    Gram-Schmidt residuals against tol.
    """
    if not 2 <= n <= 6:
        raise ValueError(f"block size {n} outside [2, 6]")
    d = np.asarray(diagonal, dtype=np.float64)
    if d.shape != (n,):
        raise ValueError(f"diagonal generator must have length {n}")
    if np.allclose(d, d.mean()):
        raise ValueError("diagonal generator is proportional to the identity")

    gens: list[np.ndarray] = []
    for i in range(n):
        for j in range(i + 1, n):
            g = np.zeros((n, n), dtype=np.complex128)
            g[i, j] = g[j, i] = 1.0
            gens.append(1j * g)
    gens.append(1j * np.diag(d - d.mean()))

    basis_vecs: list[np.ndarray] = []  # orthonormal over the reals
    basis_mats: list[np.ndarray] = []

    def try_add(mat: np.ndarray) -> bool:
        v = np.concatenate([mat.real.ravel(), mat.imag.ravel()])
        nrm = float(np.linalg.norm(v))
        if nrm < tol:
            return False
        v /= nrm
        for _ in range(2):
            for b in basis_vecs:
                v = v - (b @ v) * b
        res = float(np.linalg.norm(v))
        if res < tol:
            return False
        basis_vecs.append(v / res)
        basis_mats.append(mat / nrm)
        return True

    for g in gens:
        try_add(g)
    grew = True
    while grew:
        grew = False
        mats = list(basis_mats)
        for a in range(len(mats)):
            for b in range(a + 1, len(mats)):
                comm = mats[a] @ mats[b] - mats[b] @ mats[a]
                if try_add(comm):
                    grew = True
    return len(basis_vecs)


def entangler_schmidt_rank(cost_table, gamma: float, rel_tol: float = 1e-9) -> int:
    """Numerical rank of the phase matrix exp(-i gamma C); 1 iff C is additive."""
    if gamma == 0:
        raise ValueError("gamma must be nonzero")
    table = np.asarray(cost_table, dtype=np.float64)
    if table.ndim != 2:
        raise ValueError("cost table must be a matrix")
    s = np.linalg.svd(np.exp(-1j * float(gamma) * table), compute_uv=False)
    return int(np.sum(s > rel_tol * s[0]))


def _log10_int(value: int) -> float:
    # math.log10 handles arbitrarily large Python ints
    return math.log10(value)


@dataclass(frozen=True)
class BaselineReport:
    """Expected-trial counts for the two classical sampling models.

    model_a draws uniformly from the encoded domain of size D = n**m and
    needs D/|F| trials to hit the feasible set F; model_b sees only raw
    n*n-bit strings and needs (2**(n*n) + 1)/(|F| + 1).  Values that
    overflow a float are reported as inf, with exact magnitudes in the
    log10 fields.
    """

    n: int
    m: int
    feasible_count: int
    model_a_trials: float
    model_b_trials: float
    separation_ratio: float  # (2**n / n)**n
    log10_model_a: float
    log10_model_b: float
    log10_separation: float


def classical_baselines(
    n: int, m: int | None = None, feasible_count: int | None = None
) -> BaselineReport:
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if m is None:
        m = n
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    if feasible_count is None:
        feasible_count = math.factorial(n)
    if feasible_count < 1:
        raise ValueError(f"need feasible_count >= 1, got {feasible_count}")

    dim = n**m
    model_b_num = 2 ** (n * n) + 1

    def to_float(num: int, den: int) -> float:
        try:
            return num / den
        except OverflowError:
            return math.inf

    log10_sep = n * (n * math.log10(2.0) - math.log10(n))
    return BaselineReport(
        n=n,
        m=m,
        feasible_count=feasible_count,
        model_a_trials=to_float(dim, feasible_count),
        model_b_trials=to_float(model_b_num, feasible_count + 1),
        separation_ratio=10.0**log10_sep if log10_sep < 308 else math.inf,
        log10_model_a=_log10_int(dim) - _log10_int(feasible_count),
        log10_model_b=_log10_int(model_b_num) - _log10_int(feasible_count + 1),
        log10_separation=log10_sep,
    )


@dataclass(frozen=True)
class HeavyOutputReport:
    """How far the exact optimum mass sits above the 1/D design baseline."""

    p_opt: float
    degeneracy: int
    uniform_baseline: float  # 1/D
    heavy_ratio: float  # p_opt * D
    threshold_crossings: tuple[tuple[int, bool], ...]  # (k, p_opt >= n**-k)
    required_shots: int | None  # at the given delta; None when p_opt == 0
    finite_shot_bound: float  # 1 / (10 n_cities**3)
    in_finite_shot_region: bool


def heavy_output_report(
    enc: AnchoredTsp,
    schedule: LayerSchedule,
    norm: MixerNormalization = DEFAULT_NORMALIZATION,
    delta: float = math.exp(-10),
    penalty_weight: float | None = None,
) -> HeavyOutputReport:
    p_opt, degen = exact_success_probability(enc, schedule, norm, penalty_weight)
    layout = enc.layout
    crossings = tuple((k, p_opt >= layout.n ** (-k)) for k in range(1, layout.m + 1))
    bound = 1.0 / (10.0 * enc.instance.n_cities**3)
    return HeavyOutputReport(
        p_opt=p_opt,
        degeneracy=degen,
        uniform_baseline=1.0 / layout.D,
        heavy_ratio=p_opt * layout.D,
        threshold_crossings=crossings,
        required_shots=required_shots(p_opt, delta) if p_opt > 0 else None,
        finite_shot_bound=bound,
        in_finite_shot_region=p_opt >= bound,
    )
