"""Reduced dynamics of open quantum systems with initially correlated environments.

Build dynamical maps from correlated system-environment states, either
from a fixed decomposition of the joint state or through a linear
assignment map, and check them for complete positivity, trace
preservation, linearity and consistency.
"""

__version__ = "0.1.0"

from .channels import (
    ChoiMatrix,
    KrausSet,
    apply_choi,
    apply_kraus,
    choi_from_kraus,
    choi_from_map,
    is_cp,
    is_trace_preserving,
    kraus_from_choi,
)
from .correlations import DiscordVerdict, discord_witness, zero_discord_decision
from .frameworks import (
    AssignmentMap,
    PovmFactorSet,
    apply_assignment,
    consistency_residual,
    counterexample_assignment,
    counterexample_kraus,
    dynamical_map_from_assignment,
    make_povm_factors,
    nonlinearity_gap,
    product_assignment,
    reduced_dynamics,
    sl_map_choi,
    zero_discord_assignment,
)
from .operators import (
    commutator,
    haar_unitary,
    hermitian_eig,
    matrix_sqrt_psd,
    partial_trace_env,
    tensor,
)
from .states import (
    BipartiteState,
    CounterexampleSpec,
    SEDecomposition,
    build_counterexample,
    build_cq_state,
    consistent_system_state,
    counterexample_decomposition,
    extract_decomposition,
    random_counterexample_spec,
    reconstruct_state,
    reduced_system,
)

__all__ = [
    "ChoiMatrix",
    "KrausSet",
    "apply_choi",
    "apply_kraus",
    "choi_from_kraus",
    "choi_from_map",
    "is_cp",
    "is_trace_preserving",
    "kraus_from_choi",
    "DiscordVerdict",
    "discord_witness",
    "zero_discord_decision",
    "AssignmentMap",
    "PovmFactorSet",
    "apply_assignment",
    "consistency_residual",
    "counterexample_assignment",
    "counterexample_kraus",
    "dynamical_map_from_assignment",
    "make_povm_factors",
    "nonlinearity_gap",
    "product_assignment",
    "reduced_dynamics",
    "sl_map_choi",
    "zero_discord_assignment",
    "commutator",
    "haar_unitary",
    "hermitian_eig",
    "matrix_sqrt_psd",
    "partial_trace_env",
    "tensor",
    "BipartiteState",
    "CounterexampleSpec",
    "SEDecomposition",
    "build_counterexample",
    "build_cq_state",
    "consistent_system_state",
    "counterexample_decomposition",
    "extract_decomposition",
    "random_counterexample_spec",
    "reconstruct_state",
    "reduced_system",
]
