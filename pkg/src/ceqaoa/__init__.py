"""Exact simulator for block one-hot constrained QAOA, plus a grid-search hybrid TSP solver."""

from .analysis import (
    BaselineReport,
    HeavyOutputReport,
    MomentReport,
    TwirlEstimate,
    angle_averaged_transition,
    block_design_moments,
    classical_baselines,
    entangler_schmidt_rank,
    find_good_permutation,
    heavy_output_report,
    lie_algebra_dimension,
    transition_closed_form,
    twirl_average,
)
from .encoded import (
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
from .hamiltonian import (
    AnchoredTsp,
    BruteForceResult,
    CostDiagonal,
    TspInstance,
    anchor,
    brute_force_optimum,
    build_cost_diagonal,
    default_penalty_weight,
    is_feasible,
    tour_cities,
    tour_cost,
)
from .instances import InstanceParseError, parse_instance
from .layers import (
    DEFAULT_NORMALIZATION,
    LayerSchedule,
    MixerNormalization,
    MixerSpectrum,
    apply_mixer,
    apply_phase,
    mixer_block_matrix,
    mixer_spectrum,
    run_circuit,
)
from .phqc import (
    AngleGrid,
    GridPointStat,
    PhqcResult,
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
from .qubitref import (
    GateOp,
    QubitState,
    block_xy_mixer_gates,
    count_two_qubit_gates,
    fidelity,
    format_gates,
    multi_block_prepare,
    one_hot_block_prepare,
    project_to_encoded,
    run_gates,
    zero_state,
)

__version__ = "0.1.0"
