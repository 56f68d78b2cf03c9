"""Command line front end: solve, verify, histogram, baselines.

Exit codes: 0 success, 1 usage or input error (missing file, unknown
suite, failed verify), 2 solve finished without any feasible sample,
3 encoded dimension over the amplitude cap.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

from .analysis import classical_baselines
from .encoded import DimensionCapError
from .hamiltonian import (
    anchor,
    brute_force_optimum,
    build_cost_diagonal,
    default_penalty_weight,
    tour_cities,
)
from .instances import InstanceParseError, parse_instance
from .layers import (
    DEFAULT_NORMALIZATION,
    LayerSchedule,
    MixerNormalization,
    run_circuit,
)
from .phqc import (
    AngleGrid,
    default_grid,
    phqc_solve,
    sample_shots,
    square_grid,
)
from .verify import SUITE_NAMES, format_results, run_suite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_FEASIBLE = 2
EXIT_DIM_CAP = 3

SCHEMA_VERSION = 1


def parse_grid_spec(spec: str, n_cities: int):
    """Grid flag: 'n+1' (default), 'NxN', or 'list:g,b;g,b;...' explicit pairs.

    Returns an AngleGrid, or a list of (gamma, beta) pairs for list mode.
    """
    spec = spec.strip()
    if spec == "n+1":
        return default_grid(n_cities)
    if spec.startswith("list:"):
        pairs = []
        for chunk in spec[5:].split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            parts = chunk.split(",")
            if len(parts) != 2:
                raise ValueError(f"bad angle pair {chunk!r} (want gamma,beta)")
            pairs.append((float(parts[0]), float(parts[1])))
        if not pairs:
            raise ValueError("empty angle list")
        return pairs
    if "x" in spec.lower():
        a, _, b = spec.lower().partition("x")
        if a != b:
            raise ValueError(f"only square grids are supported, got {spec!r}")
        return square_grid(int(a))
    raise ValueError(f"unrecognized grid spec {spec!r}")


def write_text_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def write_json_atomic(path: Path, obj) -> None:
    write_text_atomic(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _label_str(label) -> str:
    return "-".join(str(j) for j in label)


def _add_instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("instance", help="instance file (.json or TSPLIB)")
    p.add_argument("--start-city", type=int, default=0, help="anchored start city (default 0)")
    p.add_argument(
        "--euclid-exact",
        action="store_true",
        help="keep exact EUC_2D distances instead of nearest-integer rounding",
    )
    p.add_argument(
        "--norm",
        choices=[n.value for n in MixerNormalization],
        default=DEFAULT_NORMALIZATION.value,
        help="mixer normalization (default over_n)",
    )
    p.add_argument(
        "--lambda",
        dest="penalty_weight",
        type=float,
        default=None,
        help="penalty weight (default n_cities * max distance)",
    )
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--depth", type=int, default=1, help="number of layers p (default 1)")
    p.add_argument("--shots", type=int, default=None, help="shots per grid point (default 10 n^3)")


def _load_anchored(args):
    inst = parse_instance(args.instance, euclidean_rounding=not args.euclid_exact)
    return inst, anchor(inst, args.start_city)


def cmd_solve(args) -> int:
    inst, enc = _load_anchored(args)
    grid_or_pairs = parse_grid_spec(args.grid, inst.n_cities)
    shots = args.shots if args.shots is not None else 10 * inst.n_cities**3
    norm = MixerNormalization(args.norm)
    lam = args.penalty_weight if args.penalty_weight is not None else default_penalty_weight(inst)

    hist_rows: list[tuple[int, float, float, float, int]] = []

    def point_hook(stat, shotset, diag) -> None:
        cost_counts: dict[float, int] = {}
        for label, cnt in shotset.counts.items():
            flat = 0
            for j in label:
                flat = flat * diag.layout.n + j
            if diag.penalty[flat] != 0.0:
                continue
            cost = float(diag.objective[flat])
            cost_counts[cost] = cost_counts.get(cost, 0) + cnt
        for cost in sorted(cost_counts):
            hist_rows.append((stat.grid_index, stat.gamma, stat.beta, cost, cost_counts[cost]))

    t0 = time.perf_counter()
    if isinstance(grid_or_pairs, AngleGrid):
        grid_json = {"gammas": list(grid_or_pairs.gammas), "betas": list(grid_or_pairs.betas)}
        result = phqc_solve(
            enc,
            depth=args.depth,
            grid=grid_or_pairs,
            shots_per_point=shots,
            norm=norm,
            master_seed=args.seed,
            penalty_weight=lam,
            point_hook=point_hook,
        )
    else:
        grid_json = {"pairs": [list(p) for p in grid_or_pairs]}
        schedules = [LayerSchedule.constant(g, b, args.depth) for g, b in grid_or_pairs]
        result = phqc_solve(
            enc,
            shots_per_point=shots,
            norm=norm,
            master_seed=args.seed,
            penalty_weight=lam,
            schedules=schedules,
            point_hook=point_hook,
        )
    wall = time.perf_counter() - t0

    payload = {
        "schema": SCHEMA_VERSION,
        "instance": inst.name,
        "n_cities": inst.n_cities,
        "start_city": enc.start_city,
        "depth": args.depth,
        "shots_per_point": shots,
        "normalization": norm.value,
        "penalty_weight": lam,
        "seed": args.seed,
        "grid": grid_json,
        "best_tour": list(tour_cities(enc, result.best_label)) if result.best_label else None,
        "best_cost": result.best_cost,
        "best_angles": list(result.best_angles) if result.best_angles else None,
        "p_opt_exact": result.p_opt_exact,
        "degenerate_optima": result.degenerate_optima,
        "feasible_fraction": result.feasible_fraction,
        "grid_table": [
            {
                "grid_index": s.grid_index,
                "gamma": s.gamma,
                "beta": s.beta,
                "feasible_fraction": s.feasible_fraction,
                "min_sampled_cost": s.min_sampled_cost,
            }
            for s in result.per_grid_stats
        ],
        "metadata": {"wall_time_s": wall, "created_unix": time.time()},
    }
    out = Path(args.out)
    write_json_atomic(out, payload)

    hist_path = Path(args.hist_out) if args.hist_out else out.with_suffix(".costs.csv")
    lines = ["grid_index,gamma,beta,cost,count"]
    for row in hist_rows:
        lines.append(f"{row[0]},{row[1]!r},{row[2]!r},{row[3]!r},{row[4]}")
    write_text_atomic(hist_path, "\n".join(lines) + "\n")

    if result.best_label is None:
        print(f"no feasible sample in {shots} shots x {len(result.per_grid_stats)} grid points")
        return EXIT_NO_FEASIBLE
    print(
        f"best cost {result.best_cost} at angles {result.best_angles} "
        f"(tour {payload['best_tour']}); result in {out}"
    )
    return EXIT_OK


def cmd_histogram(args) -> int:
    inst, enc = _load_anchored(args)
    try:
        gamma_s, beta_s = args.angles.split(",")
        gamma, beta = float(gamma_s), float(beta_s)
    except ValueError:
        print(f"bad --angles value {args.angles!r} (want gamma,beta)", file=sys.stderr)
        return EXIT_USAGE
    norm = MixerNormalization(args.norm)
    diag = build_cost_diagonal(enc, args.penalty_weight)
    state = run_circuit(diag, LayerSchedule.constant(gamma, beta, args.depth), norm)
    probs = state.probabilities()

    shots = args.shots if args.shots is not None else 10 * inst.n_cities**3
    counts = [0] * enc.layout.D
    if shots > 0:
        for label, cnt in sample_shots(state, shots, args.seed, (gamma, beta)).counts.items():
            flat = 0
            for j in label:
                flat = flat * enc.layout.n + j
            counts[flat] = cnt

    optimal_flats = set()
    if enc.layout.m <= 10:
        oracle = brute_force_optimum(enc)
        for lab in oracle.optimal_labels:
            flat = 0
            for j in lab:
                flat = flat * enc.layout.n + j
            optimal_flats.add(flat)

    labels = enc.layout.all_labels()
    order = sorted(range(enc.layout.D), key=lambda f: (-counts[f], f))
    lines = [
        f"# uniform_probability,{1.0 / enc.layout.D!r}",
        "label,city_sequence,count,exact_probability,is_optimal",
    ]
    for f in order:
        label = tuple(int(v) for v in labels[f])
        cities = tour_cities(enc, label)
        lines.append(
            f"{_label_str(label)},{_label_str(cities)},{counts[f]},"
            f"{float(probs[f])!r},{int(f in optimal_flats)}"
        )
    write_text_atomic(Path(args.out), "\n".join(lines) + "\n")
    print(f"wrote {enc.layout.D} rows to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite not in (*SUITE_NAMES, "all"):
        print(
            f"unknown suite {args.suite!r}; choose from {', '.join(SUITE_NAMES)} or all",
            file=sys.stderr,
        )
        return EXIT_USAGE
    results = run_suite(args.suite)
    print(format_results(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_USAGE


def cmd_baselines(args) -> int:
    feasible = args.feasible_count if args.feasible_count is not None else math.factorial(args.n)
    rep = classical_baselines(args.n, args.m, feasible)
    payload = {
        "n": rep.n,
        "m": rep.m,
        "feasible_count": rep.feasible_count,
        "model_a_trials": rep.model_a_trials,
        "model_b_trials": rep.model_b_trials,
        "separation_ratio": rep.separation_ratio,
        "log10_model_a": rep.log10_model_a,
        "log10_model_b": rep.log10_model_b,
        "log10_separation": rep.log10_separation,
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        write_text_atomic(Path(args.out), text + "\n")
    print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ceqaoa",
        description="Exact one-hot-encoded QAOA simulator and grid-search TSP solver",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="grid-search solve of a TSP instance")
    _add_instance_args(p_solve)
    p_solve.add_argument(
        "--grid",
        default="n+1",
        help="grid spec: 'n+1' (default), 'NxN', or 'list:g,b;g,b;...'",
    )
    p_solve.add_argument("--out", default="result.json", help="result JSON path")
    p_solve.add_argument(
        "--hist-out", default=None, help="per-grid-point cost histogram CSV (default <out>.costs.csv)"
    )
    p_solve.set_defaults(func=cmd_solve)

    p_hist = sub.add_parser("histogram", help="exact probabilities and counts at one angle pair")
    _add_instance_args(p_hist)
    p_hist.add_argument("--angles", required=True, help="angle pair 'gamma,beta'")
    p_hist.add_argument("--out", default="histogram.csv", help="output CSV path")
    p_hist.set_defaults(func=cmd_histogram)

    p_verify = sub.add_parser("verify", help="run a named invariant suite")
    p_verify.add_argument("suite", help=f"one of {', '.join(SUITE_NAMES)}, or all")
    p_verify.set_defaults(func=cmd_verify)

    p_base = sub.add_parser("baselines", help="classical sampling baselines")
    p_base.add_argument("--n", type=int, required=True, help="block size / city count")
    p_base.add_argument("--m", type=int, default=None, help="block count (default n)")
    p_base.add_argument(
        "--feasible-count", type=int, default=None, help="feasible set size (default n!)"
    )
    p_base.add_argument("--out", default=None, help="optional JSON output path")
    p_base.set_defaults(func=cmd_baselines)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except InstanceParseError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except DimensionCapError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DIM_CAP
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
