"""Variational entropy estimates and uncommon-information bounds."""

from ._core import (
    BoundValue,
    CommonSubspace,
    DensityMatrix,
    DimensionError,
    EntropyEstimate,
    EstimatorConfig,
    IoError,
    PureState,
    RegisterLayout,
    TightUpperResult,
    TraceRow,
    choose_c,
    decomposable_state,
    entropy_exact,
    estimate_entropy,
    find_common_subspace,
    haar_random_pure,
    load_state,
    loose_lower,
    loose_upper,
    planted_common_subspace_state,
    purify,
    random_density,
    reduce,
    save_density,
    save_state,
    tight_lower,
    tight_upper,
    to_density,
)

__all__ = [
    "BoundValue",
    "CommonSubspace",
    "DensityMatrix",
    "DimensionError",
    "EntropyEstimate",
    "EstimatorConfig",
    "IoError",
    "PureState",
    "RegisterLayout",
    "TightUpperResult",
    "TraceRow",
    "choose_c",
    "decomposable_state",
    "entropy_exact",
    "estimate_entropy",
    "find_common_subspace",
    "haar_random_pure",
    "load_state",
    "loose_lower",
    "loose_upper",
    "planted_common_subspace_state",
    "purify",
    "random_density",
    "reduce",
    "save_density",
    "save_state",
    "tight_lower",
    "tight_upper",
    "to_density",
]

__version__ = "0.1.0"
