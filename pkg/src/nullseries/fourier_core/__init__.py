"""Fourier-coefficient arithmetic, grid evaluation, certified sup bounds, exact supports."""

from .coeffs import (
    DEFAULT_DEGREE_CAP,
    CoeffSeq,
    GridSamples,
    PrecisionContext,
    coeff_convolve,
    dilate,
    grid_size_for,
    l1_coeff_norm,
    l2_norm,
    next_pow2,
    partial_sum_eval,
    sup_coeff_norm,
)
from .certify import SupCertificate, certified_sup, certified_sups
from .intervals import IntervalUnion, grid_mask
from .io import nusr_bytes, read_nusr, read_support, support_json_bytes, write_nusr, write_support

__all__ = [
    "DEFAULT_DEGREE_CAP",
    "CoeffSeq",
    "GridSamples",
    "IntervalUnion",
    "PrecisionContext",
    "SupCertificate",
    "certified_sup",
    "certified_sups",
    "coeff_convolve",
    "dilate",
    "grid_mask",
    "grid_size_for",
    "l1_coeff_norm",
    "l2_norm",
    "next_pow2",
    "nusr_bytes",
    "partial_sum_eval",
    "read_nusr",
    "read_support",
    "sup_coeff_norm",
    "support_json_bytes",
    "write_nusr",
    "write_support",
]
