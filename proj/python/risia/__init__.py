"""RIS-assisted interference alignment: rank pursuit and channel simulation.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from risia._core import (
    AlignmentReport,
    AlignmentSolution,
    ChannelSet,
    ExperimentRecord,
    FactorPair,
    FadingSpec,
    LayoutSpec,
    LosModel,
    NetworkConfig,
    PursuitOptions,
    RcgOptions,
    Scheme,
    SweepSpec,
    SweepVariable,
    __version__,
    build_target,
    objective_f0,
    path_loss,
    random_phase_baseline,
    run_sweep,
    sample_channels,
    solve,
    sum_rate,
    verify_alignment,
    without_ris,
)

__all__ = [
    "AlignmentReport",
    "AlignmentSolution",
    "ChannelSet",
    "ExperimentRecord",
    "FactorPair",
    "FadingSpec",
    "LayoutSpec",
    "LosModel",
    "NetworkConfig",
    "PursuitOptions",
    "RcgOptions",
    "Scheme",
    "SweepSpec",
    "SweepVariable",
    "__version__",
    "build_target",
    "objective_f0",
    "path_loss",
    "random_phase_baseline",
    "run_sweep",
    "sample_channels",
    "solve",
    "sum_rate",
    "verify_alignment",
    "without_ris",
]
