"""Reconfigurable-surface ISAC designer.

Thin python facade over the C++ core: channel sampling, the penalty-based
alternating designer for full (beyond-diagonal) and diagonal surfaces, and
the baseline evaluations.
"""

from ._core import (
    ChannelSet,
    CheckResult,
    ConfigError,
    NumericalError,
    PenaltyConfig,
    RunResult,
    RunSpec,
    SnrTriple,
    SystemConfig,
    TraceRow,
    design_bdris,
    design_dris,
    doa_from_positions,
    duplication_matrix,
    effective_channel,
    evaluate_surface,
    kron,
    load_config,
    max_eigenvalue_hermitian,
    nearest_unitary,
    no_ris_snr,
    path_loss,
    radar_matrix,
    random_symmetric_unitary,
    run_selfchecks,
    sample_channels,
    snr_c_trace,
    snr_r_trace,
    steering_vector,
    symmetric_from_vech,
    unvec,
    vec,
    vech,
)

__all__ = [
    "ChannelSet",
    "CheckResult",
    "ConfigError",
    "NumericalError",
    "PenaltyConfig",
    "RunResult",
    "RunSpec",
    "SnrTriple",
    "SystemConfig",
    "TraceRow",
    "design_bdris",
    "design_dris",
    "doa_from_positions",
    "duplication_matrix",
    "effective_channel",
    "evaluate_surface",
    "kron",
    "load_config",
    "max_eigenvalue_hermitian",
    "nearest_unitary",
    "no_ris_snr",
    "path_loss",
    "radar_matrix",
    "random_symmetric_unitary",
    "run_selfchecks",
    "sample_channels",
    "snr_c_trace",
    "snr_r_trace",
    "steering_vector",
    "symmetric_from_vech",
    "unvec",
    "vec",
    "vech",
]

__version__ = "0.1.0"
