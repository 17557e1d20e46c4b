"""Window functions, thin-support stage functions and the stage iteration."""

from .f_builder import assemble, build_f, stage_support
from .h_builder import HFunction, build_h, solve_window_weights
from .iteration import (
    ConstructionState,
    choose_dilation,
    dilated_product,
    initial_stage,
    iterate_construction,
    measure_bounds,
    observed_sup,
    reduce_coeffs,
    stage_tolerance,
)
from .stage import (
    StageFunction,
    block_injectivity,
    block_injectivity_exhaustive,
    check_sandwich,
    decompose_index,
    sandwich_bounds,
    spacings,
)

__all__ = [
    "ConstructionState",
    "HFunction",
    "StageFunction",
    "assemble",
    "block_injectivity",
    "block_injectivity_exhaustive",
    "build_f",
    "build_h",
    "check_sandwich",
    "choose_dilation",
    "decompose_index",
    "dilated_product",
    "initial_stage",
    "iterate_construction",
    "measure_bounds",
    "observed_sup",
    "reduce_coeffs",
    "sandwich_bounds",
    "solve_window_weights",
    "spacings",
    "stage_support",
]
