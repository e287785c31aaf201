"""Pseudo-spectral laboratory for dissipative generalized SQG dynamics.

Subpackages:

- spectral: fields on the periodic box, Fourier multipliers, exact products
- dyadic: smooth frequency-shell partition and block decompositions
- norms: Sobolev / Besov / Gevrey norms and interpolation checks
- inequalities: brute-force trilinear forms, commutators, constant surveys
- solver: integrating-factor time stepping, fixed-point construction, studies
- harness: scenario configs, CSV and checkpoint persistence
- cli: command-line entry point
"""

from .dyadic import (
    BernsteinReport,
    DyadicBlocks,
    Partition,
    bernstein_check,
    build_partition,
    decompose,
    dyadic_block,
    low_pass,
)
from .errors import (
    BlowUpError,
    CheckpointError,
    ConfigError,
    CourantError,
    GsqgError,
    OverflowGuardError,
    PicardConvergenceError,
)
from .inequalities import (
    BRUTE_FORCE_CAP,
    ConstantSurvey,
    EnsembleSpec,
    TrilinearReport,
    bony_split,
    commutator_block,
    commutator_gevrey,
    commutator_log,
    commutator_singular,
    estimate_best_constant,
    log_smoothing_check,
    random_test_field,
    trilinear_form,
    trilinear_form_sym,
)
from .norms import (
    InequalityReport,
    NormReport,
    besov_norm,
    check_gevrey_interpolation,
    check_interpolation,
    check_l1_interpolation,
    derivative_bound_check,
    gevrey_norm,
    norm_report,
    sobolev_norm,
    weighted_l1_norm,
    xt_norm,
)
from .harness import (
    CheckRow,
    Checkpoint,
    GevreyTrackSpec,
    InitialSpec,
    ScenarioConfig,
    ThresholdSweep,
    amplitude_threshold_sweep,
    build_initial_data,
    emit_plot_data,
    parse_config,
    read_checkpoint,
    read_csv_columns,
    run_scenario,
    verify_inequalities,
    verify_operators,
    write_checkpoint,
    write_csv,
)
from .solver import (
    DecayReport,
    DiagnosticsRow,
    GevreyTrackReport,
    PicardIterate,
    ScalingReport,
    SimState,
    Trajectory,
    decay_study,
    default_delta,
    gevrey_tracking,
    linear_flux_solve,
    linear_heat_propagator,
    picard_solve,
    rescale_solution,
    rhs,
    scaling_equivariance_check,
    simulate,
    step,
)
from .spectral import (
    GridSpec,
    ModelParams,
    SpectralField,
    VectorField,
    advect,
    field_from_modes,
    flux_divergence,
    fractional_laplacian,
    from_physical,
    gevrey_avg_operator,
    gevrey_operator,
    inner_product,
    log_multiplier,
    multiply_fields,
    perp_gradient,
    to_physical,
    velocity_from_scalar,
)

__version__ = "0.1.0"

__all__ = [
    "GridSpec",
    "ModelParams",
    "SpectralField",
    "VectorField",
    "advect",
    "field_from_modes",
    "flux_divergence",
    "fractional_laplacian",
    "from_physical",
    "gevrey_avg_operator",
    "gevrey_operator",
    "inner_product",
    "log_multiplier",
    "multiply_fields",
    "perp_gradient",
    "to_physical",
    "velocity_from_scalar",
    "Partition",
    "DyadicBlocks",
    "BernsteinReport",
    "build_partition",
    "decompose",
    "dyadic_block",
    "low_pass",
    "bernstein_check",
    "NormReport",
    "InequalityReport",
    "sobolev_norm",
    "besov_norm",
    "gevrey_norm",
    "weighted_l1_norm",
    "xt_norm",
    "check_interpolation",
    "check_l1_interpolation",
    "check_gevrey_interpolation",
    "derivative_bound_check",
    "norm_report",
    "BRUTE_FORCE_CAP",
    "ConstantSurvey",
    "EnsembleSpec",
    "TrilinearReport",
    "bony_split",
    "commutator_block",
    "commutator_gevrey",
    "commutator_log",
    "commutator_singular",
    "estimate_best_constant",
    "log_smoothing_check",
    "random_test_field",
    "trilinear_form",
    "trilinear_form_sym",
    "SimState",
    "Trajectory",
    "DiagnosticsRow",
    "PicardIterate",
    "ScalingReport",
    "DecayReport",
    "GevreyTrackReport",
    "linear_heat_propagator",
    "rhs",
    "step",
    "simulate",
    "linear_flux_solve",
    "picard_solve",
    "rescale_solution",
    "scaling_equivariance_check",
    "decay_study",
    "default_delta",
    "gevrey_tracking",
    "GsqgError",
    "OverflowGuardError",
    "CourantError",
    "BlowUpError",
    "ConfigError",
    "CheckpointError",
    "PicardConvergenceError",
    "ScenarioConfig",
    "GevreyTrackSpec",
    "InitialSpec",
    "Checkpoint",
    "CheckRow",
    "ThresholdSweep",
    "parse_config",
    "build_initial_data",
    "run_scenario",
    "write_checkpoint",
    "read_checkpoint",
    "write_csv",
    "read_csv_columns",
    "emit_plot_data",
    "verify_operators",
    "verify_inequalities",
    "amplitude_threshold_sweep",
    "__version__",
]
