"""Numerical proxy for the support of a null series: where partial sums keep growing."""

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

import numpy as np

from ..fourier_core import IntervalUnion, partial_sum_eval


@dataclass(frozen=True)
class SupportProxy:
    """Cells ``[j/M, (j+1)/M]`` where ``|S_{n_k}|`` exceeds ``tau_k`` for every ``k`` in the
    top quartile of the schedule. A proxy for local unboundedness, not a proof of it.
    """

    detected: IntervalUnion
    M: int
    persistent_orders: tuple
    thresholds: tuple
    cells: int
    label: str = "proxy"


def cells_to_union(mask, M):
    """Merge the closed grid cells ``[j/M, (j+1)/M]`` selected by ``mask``."""
    if not mask.any():
        return IntervalUnion.empty()
    padded = np.concatenate([[False], mask, [False]])
    edges = np.flatnonzero(np.diff(padded.astype(np.int8)))
    starts, stops = edges[0::2], edges[1::2]
    return IntervalUnion._trusted([(Fraction(int(a), M), Fraction(int(b), M)) for a, b in zip(starts, stops)])


def support_detect_report(c, n_list, M, tau):
    n_list = [int(n) for n in n_list]
    tau = [float(t) for t in tau]
    if len(n_list) != len(tau) or not n_list:
        raise ValueError("need one threshold per order")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("orders must be increasing")
    if any(b < a for a, b in zip(tau, tau[1:])):
        raise ValueError("thresholds must be nondecreasing")
    top = max(1, ceil(len(n_list) / 4))
    keep = np.ones(M, dtype=bool)
    for n, t in zip(n_list[-top:], tau[-top:]):
        vals = partial_sum_eval(c, n, M)
        keep &= np.abs(vals.values) > t
    detected = cells_to_union(keep, M)
    return SupportProxy(detected, M, tuple(n_list[-top:]), tuple(tau[-top:]), int(keep.sum()))


def support_detect(c, n_list, M, tau):
    """Union of grid cells where the partial sums exceed the threshold schedule (proxy)."""
    return support_detect_report(c, n_list, M, tau).detected
