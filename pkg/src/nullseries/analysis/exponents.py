"""Scalar exponent calculators: the dimension threshold and the r-chain growth rate."""

from dataclasses import dataclass
from math import log, sqrt

import numpy as np
from scipy.optimize import brentq

#: ``log 2 / log(7/4)``
CHAIN_EXPONENT = log(2) / log(7 / 4)


def thm3_exponent(d):
    """``-d/(d+1) + (1-d)/2 (d+2)/(d+1)``, the power of ``r`` in the growth bound at dimension ``d``."""
    d = np.asarray(d, dtype=float)
    if np.any((d < 0) | (d > 1)):
        raise ValueError("d must lie in [0, 1]")
    val = -d / (d + 1) + 0.5 * (1 - d) * (d + 2) / (d + 1)
    return float(val) if val.ndim == 0 else val


def thm3_root():
    """Positive root of ``d^2 + 3d - 2``, found by bracketing on [0, 1]."""
    return brentq(lambda d: d * d + 3 * d - 2, 0.0, 1.0, xtol=1e-16, rtol=4 * np.finfo(float).eps)


def thm3_root_closed_form():
    return (sqrt(17) - 3) / 2


@dataclass(frozen=True)
class ChainReport:
    """The chain ``r_1 = n_1``, ``r_{i+1}`` = first ``n_k`` above ``r_i^{7/4}``."""

    r: tuple
    positions: tuple
    exponent: float
    loglog_slope: float
    loglog_intercept: float

    def bound_exponents(self, i0=0):
        """``2^{i - i0}`` for ``i >= i0``: ``||S_{r_i}|| >= (lam ||S_{r_i0}||)^{2^{i - i0}}``."""
        return [2 ** (i - i0) for i in range(i0, len(self.r))]

    def propagated_bound(self, lam, base_norm, i0=0):
        """Numerical values of the propagated lower bounds for given ``lam`` and ``||S_{r_i0}||``."""
        base = lam * base_norm
        return [base**e for e in self.bound_exponents(i0)]

    def to_dict(self):
        return {
            "r": [int(x) for x in self.r],
            "positions": list(self.positions),
            "exponent": self.exponent,
            "loglog_slope": self.loglog_slope,
            "loglog_intercept": self.loglog_intercept,
        }


def exceeds_seven_quarters(n, r):
    """``n > r^{7/4}``, decided exactly as ``n^4 > r^7``."""
    return int(n) ** 4 > int(r) ** 7


def thm2_rate(n_list):
    """r-chain, fitted slope of ``log log r_i`` against ``i`` and the constant ``log 2/log(7/4)``.

    The slope fit uses the chain elements with ``r_i > e`` so that ``log log r_i`` is defined
    and positive; it needs at least two of them, otherwise it is reported as NaN.
    """
    n_list = [int(n) for n in n_list]
    if len(n_list) < 2:
        raise ValueError("need at least two orders")
    if n_list[0] < 2 or any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("orders must be strictly increasing and start at 2 or more")
    chain, pos = [n_list[0]], [0]
    for k, n in enumerate(n_list):
        if exceeds_seven_quarters(n, chain[-1]):
            chain.append(n)
            pos.append(k)
    idx = [i for i, r in enumerate(chain) if r > 2]
    slope = intercept = float("nan")
    if len(idx) >= 2:
        x = np.array(idx, dtype=float)
        y = np.array([log(log(chain[i])) for i in idx])
        slope, intercept = (float(v) for v in np.polyfit(x, y, 1))
    return ChainReport(tuple(chain), tuple(pos), CHAIN_EXPONENT, slope, intercept)
