"""Growth reports comparing ``||S_r||`` and ``||S_s||`` (L2 norms) for a finite series."""

from dataclasses import dataclass
from fractions import Fraction
from math import log, sqrt

import numpy as np

from ..fourier_core import IntervalUnion


@dataclass(frozen=True)
class GrowthReport:
    """Both sides of ``||S_r||^2 <= C ||S_s|| (sqrt|K_s| + ||S_r|| r log^4 s / s)``.

    ``K_s`` is ``K`` inflated by ``log^3 s / s``. ``min_constant`` is the
    smallest ``C`` for which the inequality holds; ``rho = ||S_s|| / ||S_r||^2``.
    Nothing here is asserted: these are measurements.
    """

    r: int
    s: int
    norm_r: float
    norm_s: float
    rho: float
    lhs: float
    rhs_measure_term: float
    rhs_degree_term: float
    min_constant: float
    inflation_radius: float
    inflation_measure: float
    s_beyond_threshold: bool
    saturated: bool
    support_intervals: int
    support_measure: float

    def to_dict(self):
        return {k: (v if not isinstance(v, (np.floating, np.integer)) else v.item())
                for k, v in self.__dict__.items()}


def partial_l2(c, n):
    """``||S_n(c)||_2``, the l2 norm of the coefficients with ``|l| <= n``."""
    part = c.truncate(n).coeffs
    return float(np.sqrt(np.sum(np.abs(part) ** 2)))


def s_threshold(r):
    """``r^{3/2} log^4 r`` (natural log)."""
    return r**1.5 * log(r) ** 4


def s_beyond_threshold(r, s):
    return s > s_threshold(r)


def minimal_constant(norm_r, norm_s, measure, r, s):
    """Closed form of the smallest admissible constant."""
    lhs = norm_r**2
    rhs = norm_s * (sqrt(measure) + norm_r * r * log(s) ** 4 / s)
    if rhs == 0:
        return 0.0 if lhs == 0 else float("inf")
    return lhs / rhs


def inflation(K, s):
    """``(radius, |K + [-radius, radius]|)`` with ``radius = log^3 s / s``, measured exactly."""
    radius = log(s) ** 3 / s
    if not K:
        return radius, 0.0
    grown = K.inflate(Fraction(radius), periodic=True)
    return radius, float(grown.measure())


def growth_check(c, K, r, s):
    """Measure both sides of the growth inequality for ``S_r`` and ``S_s`` of ``c``.

    ``s`` may exceed the degree of ``c``; the partial sum then equals ``c``
    and the report is flagged ``saturated``.
    """
    r, s = int(r), int(s)
    if r < 1 or s <= r:
        raise ValueError("need 1 <= r < s")
    if not isinstance(K, IntervalUnion):
        raise TypeError("K must be an IntervalUnion")
    nr, ns = partial_l2(c, r), partial_l2(c, s)
    radius, meas = inflation(K, s)
    measure_term = ns * sqrt(meas)
    degree_term = ns * nr * r * log(s) ** 4 / s
    rho = ns / nr**2 if nr > 0 else float("inf")
    return GrowthReport(
        r=r,
        s=s,
        norm_r=nr,
        norm_s=ns,
        rho=rho,
        lhs=nr**2,
        rhs_measure_term=measure_term,
        rhs_degree_term=degree_term,
        min_constant=minimal_constant(nr, ns, meas, r, s),
        inflation_radius=radius,
        inflation_measure=meas,
        s_beyond_threshold=s_beyond_threshold(r, s),
        saturated=s > c.degree,
        support_intervals=len(K),
        support_measure=float(K.measure()),
    )
