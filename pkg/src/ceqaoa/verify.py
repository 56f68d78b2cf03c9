"""Named verification suites behind the `ceqaoa verify` command.

Each check pins its tolerance here; the acceptance test module runs the
same functions, so the CLI and the test suite cannot drift apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analysis, qubitref
from .encoded import BlockLayout, uniform_initial_state
from .hamiltonian import CostDiagonal
from .layers import (
    LayerSchedule,
    MixerNormalization,
    mixer_block_matrix,
    mixer_spectrum,
)

SUITE_NAMES = (
    "encoder",
    "mixer",
    "ergodicity",
    "one_design",
    "two_design",
    "lie",
    "baselines",
)


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    measured: str
    target: str


def _check(suite: str, name: str, passed: bool, measured, target) -> CheckResult:
    return CheckResult(suite, name, bool(passed), str(measured), str(target))


def random_diagonal(layout: BlockLayout, seed: int) -> CostDiagonal:
    """Synthetic diagonal for design checks on layouts with m != n.

    Objective entries are uniform on [0, 1); a constant positive penalty
    weight keeps the type honest while the penalty itself is zero.
    """
    rng = np.random.default_rng(seed)
    return CostDiagonal(layout, rng.random(layout.D), np.zeros(layout.D), 1.0)


def check_encoder() -> list[CheckResult]:
    """Prepared block state vs the uniform one-excitation target, n = 2..10."""
    out = []
    for n in range(2, 11):
        ops = qubitref.one_hot_block_prepare(n)
        state = qubitref.run_gates(n, ops)
        target = np.zeros(1 << n, dtype=np.complex128)
        for k in range(n):
            target[1 << (n - 1 - k)] = 1.0 / math.sqrt(n)
        fid = float(abs(np.vdot(target, state.amplitudes)) ** 2)
        count = qubitref.count_two_qubit_gates(ops)
        out.append(
            _check("encoder", f"w_state_fidelity_n{n}", fid >= 1 - 1e-10, f"{fid:.15f}", ">= 1-1e-10")
        )
        out.append(
            _check("encoder", f"two_qubit_count_n{n}", count == n - 1, count, n - 1)
        )
    return out


def check_encoder_variants() -> list[CheckResult]:
    """XY-rotation and controlled-RY encoders agree up to a global phase, n <= 8."""
    out = []
    for n in range(2, 9):
        a = qubitref.run_gates(n, qubitref.one_hot_block_prepare(n, "xyrot"))
        b = qubitref.run_gates(n, qubitref.one_hot_block_prepare(n, "cry"))
        fid = qubitref.fidelity(a, b)
        out.append(
            _check("encoder", f"variant_equivalence_n{n}", fid >= 1 - 1e-10, f"{fid:.15f}", ">= 1-1e-10")
        )
    return out


def check_cross_representation() -> list[CheckResult]:
    """Dense 9-qubit preparation projects onto the uniform encoded state (n=m=3)."""
    layout = BlockLayout(3, 3)
    state = qubitref.run_gates(9, qubitref.multi_block_prepare(3, 3))
    encoded, leaked = qubitref.project_to_encoded(state, layout)
    uniform = uniform_initial_state(layout)
    err = float(np.max(np.abs(encoded.amplitudes - uniform.amplitudes)))
    return [
        _check("encoder", "projection_amplitude_error", err < 1e-10, f"{err:.3e}", "< 1e-10"),
        _check("encoder", "projection_leaked_mass", leaked < 1e-12, f"{leaked:.3e}", "< 1e-12"),
    ]


def check_mixer_spectrum() -> list[CheckResult]:
    """Eigenvalues {n-1, -1 x (n-1)} and unit normalized gap, n = 2..16."""
    out = []
    for n in range(2, 17):
        raw = mixer_spectrum(n, MixerNormalization.RAW)
        expected = np.array([-1.0] * (n - 1) + [float(n - 1)])
        eig_err = float(np.max(np.abs(raw.eigenvalues - expected)))
        out.append(
            _check("mixer", f"raw_spectrum_n{n}", eig_err < 1e-9, f"{eig_err:.3e}", "< 1e-9")
        )
        scaled = mixer_spectrum(n, MixerNormalization.OVER_N)
        gap_err = abs(scaled.gap - 1.0)
        out.append(
            _check("mixer", f"normalized_gap_n{n}", gap_err < 1e-12, f"{gap_err:.3e}", "< 1e-12")
        )
    return out


def check_mixer_unitarity(seed: int = 7) -> list[CheckResult]:
    """Closed-form block matrix is unitary for n <= 16 over 100 random angles."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in range(2, 17):
        for beta in rng.uniform(-2 * math.pi, 2 * math.pi, 100):
            u = mixer_block_matrix(n, beta, MixerNormalization.RAW)
            worst = max(worst, float(np.max(np.abs(u.conj().T @ u - np.eye(n)))))
    return [_check("mixer", "block_unitarity", worst < 1e-12, f"{worst:.3e}", "< 1e-12")]


def check_mixer_closed_form(seed: int = 11) -> list[CheckResult]:
    """Closed form vs eigendecomposition exponential of the block generator, n <= 8."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in range(2, 9):
        adj = np.ones((n, n)) - np.eye(n)
        evals, evecs = np.linalg.eigh(adj)
        for beta in rng.uniform(-math.pi, math.pi, 20):
            dense = (evecs * np.exp(-1j * beta * evals)) @ evecs.conj().T
            u = mixer_block_matrix(n, beta, MixerNormalization.RAW)
            worst = max(worst, float(np.max(np.abs(dense - u))))
    return [_check("mixer", "closed_form_vs_expm", worst < 1e-10, f"{worst:.3e}", "< 1e-10")]


def check_ergodicity() -> list[CheckResult]:
    """Quadrature-averaged transition matrix vs closed form, n = 2..8, K = 4096."""
    out = []
    for n in range(2, 9):
        quad = analysis.angle_averaged_transition(n, 4096)
        err = float(np.max(np.abs(quad - analysis.transition_closed_form(n))))
        out.append(
            _check("ergodicity", f"closed_form_n{n}", err < 1e-8, f"{err:.3e}", "< 1e-8")
        )
        row = float(np.max(np.abs(quad.sum(axis=1) - 1.0)))
        col = float(np.max(np.abs(quad.sum(axis=0) - 1.0)))
        out.append(
            _check(
                "ergodicity",
                f"doubly_stochastic_n{n}",
                max(row, col) < 1e-12,
                f"{max(row, col):.3e}",
                "< 1e-12",
            )
        )
    rescale_err = 0.0
    for n in range(2, 9):
        raw = analysis.angle_averaged_transition(n, 4096, MixerNormalization.RAW)
        scaled = analysis.angle_averaged_transition(n, 4096, MixerNormalization.OVER_N)
        rescale_err = max(rescale_err, float(np.max(np.abs(raw - scaled))))
    out.append(
        _check(
            "ergodicity", "rescaling_invariance", rescale_err < 1e-10, f"{rescale_err:.3e}", "< 1e-10"
        )
    )
    return out


def _random_schedules(count: int, seed: int) -> list[LayerSchedule]:
    rng = np.random.default_rng(seed)
    return [
        LayerSchedule.constant(float(g), float(b))
        for g, b in zip(rng.uniform(0, math.pi, count), rng.uniform(0, math.pi, count))
    ]


def check_one_design() -> list[CheckResult]:
    """Exhaustive twirl equals 1/D at n=3, m=2; Monte Carlo agrees at n=4, m=3."""
    out = []
    layout = BlockLayout(3, 2)
    diag = random_diagonal(layout, seed=101)
    target = (1, 2)
    worst = 0.0
    for sched in _random_schedules(10, seed=202):
        est = analysis.twirl_average(diag, sched, target, mode="exhaustive")
        worst = max(worst, abs(est.value - 1.0 / layout.D))
    out.append(
        _check("one_design", "exhaustive_twirl_36_perms", worst < 1e-12, f"{worst:.3e}", "< 1e-12")
    )

    layout = BlockLayout(4, 3)
    diag = random_diagonal(layout, seed=303)
    sched = _random_schedules(1, seed=404)[0]
    est = analysis.twirl_average(
        diag, sched, (0, 1, 2), mode="monte_carlo", n_samples=100_000, seed=505
    )
    dev = abs(est.value - 1.0 / layout.D)
    out.append(
        _check(
            "one_design",
            "monte_carlo_twirl_n4_m3",
            dev <= 3 * est.std_error,
            f"dev={dev:.3e} se={est.std_error:.3e}",
            "<= 3 std errors of 1/64",
        )
    )
    return out


def check_existence_bound() -> list[CheckResult]:
    """Best permutation overlap >= 1/D for every tested schedule at n=3, m in {2, 3}."""
    out = []
    for m, seed in ((2, 606), (3, 707)):
        layout = BlockLayout(3, m)
        diag = random_diagonal(layout, seed=seed)
        target = tuple(range(m)) if m <= 3 else (0,) * m
        schedules = _random_schedules(10, seed=seed + 1) + [LayerSchedule.constant(0.0, 0.0)]
        ok = True
        worst = math.inf
        slack = 1.0 - 1e-12  # absorbs one-ulp rounding at exactly degenerate points
        for sched in schedules:
            _, overlap = analysis.find_good_permutation(diag, sched, target)
            twirl = analysis.twirl_average(diag, sched, target, mode="exhaustive").value
            worst = min(worst, overlap)
            ok = ok and overlap >= slack / layout.D and overlap >= slack * twirl
        out.append(
            _check(
                "one_design",
                f"existence_bound_n3_m{m}",
                ok,
                f"min overlap {worst:.6f}",
                f">= 1/{layout.D}",
            )
        )
    return out


def check_two_design_moments() -> list[CheckResult]:
    """Random in-block circuits reach the Haar moments, n in {3, 4, 5}."""
    out = []
    for n in (3, 4, 5):
        rep = analysis.block_design_moments(n, pulse_layers=10 * n * n, trials=20_000, seed=n)
        mean_rel = abs(rep.mean_overlap - rep.haar_mean) / rep.haar_mean
        second_rel = abs(rep.second_moment - rep.haar_second) / rep.haar_second
        out.append(
            _check(
                "two_design",
                f"first_moment_n{n}",
                mean_rel < 0.05,
                f"{rep.mean_overlap:.5f} (rel err {mean_rel:.3f})",
                f"{rep.haar_mean:.5f} within 5%",
            )
        )
        out.append(
            _check(
                "two_design",
                f"second_moment_n{n}",
                second_rel < 0.10,
                f"{rep.second_moment:.5f} (rel err {second_rel:.3f})",
                f"{rep.haar_second:.5f} within 10%",
            )
        )
    return out


def check_lie_dimension() -> list[CheckResult]:
    """Lie closure reaches dimension n**2 - 1 for n in {3, 4, 5}."""
    out = []
    for n in (3, 4, 5):
        dim = analysis.lie_algebra_dimension(n, list(range(n)))
        out.append(_check("lie", f"closure_dimension_n{n}", dim == n * n - 1, dim, n * n - 1))
    return out


def check_baselines() -> list[CheckResult]:
    """Raw-bitstring baseline exact small case and log10 separations, n <= 12."""
    out = []
    rep = analysis.classical_baselines(3, 3, 6)
    out.append(
        _check(
            "baselines",
            "model_b_exact_n3",
            abs(rep.model_b_trials - 513.0 / 7.0) < 1e-9,
            f"{rep.model_b_trials:.6f}",
            f"{513/7:.6f}",
        )
    )
    out.append(
        _check(
            "baselines",
            "model_a_n3",
            abs(rep.model_a_trials - 4.5) < 1e-12,
            rep.model_a_trials,
            4.5,
        )
    )
    worst = 0.0
    for n in range(2, 13):
        rep = analysis.classical_baselines(n)
        direct = n * (n * math.log10(2.0) - math.log10(n))
        worst = max(worst, abs(rep.log10_separation - direct))
    out.append(
        _check("baselines", "log10_separation_n_le_12", worst < 1e-9, f"{worst:.3e}", "< 1e-9")
    )
    return out


def run_suite(name: str) -> list[CheckResult]:
    suites = {
        "encoder": lambda: check_encoder() + check_encoder_variants() + check_cross_representation(),
        "mixer": lambda: check_mixer_spectrum() + check_mixer_unitarity() + check_mixer_closed_form(),
        "ergodicity": check_ergodicity,
        "one_design": lambda: check_one_design() + check_existence_bound(),
        "two_design": check_two_design_moments,
        "lie": check_lie_dimension,
        "baselines": check_baselines,
    }
    if name == "all":
        results: list[CheckResult] = []
        for suite in SUITE_NAMES:
            results.extend(suites[suite]())
        return results
    if name not in suites:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)} or all")
    return suites[name]()


def format_results(results) -> str:
    width = max(len(r.name) for r in results)
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"[{status}] {r.suite}:{r.name:<{width}}  measured={r.measured}  target={r.target}")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)
