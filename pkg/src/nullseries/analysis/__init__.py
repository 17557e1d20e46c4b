"""Measurements on finite series: dimension, growth, support proxy, exponents, localisation."""

from .dimension import DimensionEstimate, box_dimension, cantor_set, cell_count, dyadic_scales, triadic_scales
from .exponents import (
    CHAIN_EXPONENT,
    ChainReport,
    exceeds_seven_quarters,
    thm2_rate,
    thm3_exponent,
    thm3_root,
    thm3_root_closed_form,
)
from .growth import GrowthReport, growth_check, minimal_constant, partial_l2, s_beyond_threshold, s_threshold
from .localisation import (
    LocalisationReport,
    error_banded,
    error_direct,
    localisation_error_spectrum,
    rajchman_gap,
    tail_sums,
)
from .support import SupportProxy, cells_to_union, support_detect, support_detect_report

__all__ = [
    "CHAIN_EXPONENT",
    "ChainReport",
    "DimensionEstimate",
    "GrowthReport",
    "LocalisationReport",
    "SupportProxy",
    "box_dimension",
    "cantor_set",
    "cell_count",
    "cells_to_union",
    "dyadic_scales",
    "error_banded",
    "error_direct",
    "exceeds_seven_quarters",
    "growth_check",
    "localisation_error_spectrum",
    "minimal_constant",
    "partial_l2",
    "rajchman_gap",
    "s_beyond_threshold",
    "s_threshold",
    "support_detect",
    "support_detect_report",
    "tail_sums",
    "thm2_rate",
    "thm3_exponent",
    "thm3_root",
    "thm3_root_closed_form",
    "triadic_scales",
]
