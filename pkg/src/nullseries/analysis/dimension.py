"""Box-counting dimension of exact interval unions."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..fourier_core import IntervalUnion
from ..fourier_core.intervals import as_fraction


@dataclass(frozen=True)
class DimensionEstimate:
    """Cover counts ``N(delta)`` and the least-squares slope of ``log N`` on ``log(1/delta)``."""

    scales: tuple
    counts: tuple
    slope: float
    intercept: float
    residual: float
    empty: bool = False

    def to_dict(self):
        return {
            "scales": [float(s) for s in self.scales],
            "counts": list(self.counts),
            "slope": self.slope,
            "intercept": self.intercept,
            "residual": self.residual,
            "empty": self.empty,
        }


def cell_count(K, delta):
    """Number of grid cells of width ``delta`` whose interior meets ``K``.

    A nondegenerate ``[a, b]`` meets the open cells ``i`` with
    ``floor(a/delta) <= i <= ceil(b/delta) - 1``; an isolated point counts the
    cell containing it. Endpoints lying on grid lines therefore add no extra
    cell. All arithmetic is on integers after scaling by the common denominator.
    """
    delta = as_fraction(delta)
    if delta <= 0:
        raise ValueError("scale must be positive")
    last = -(-delta.denominator // delta.numerator) - 1  # ceil(1/delta) - 1
    den, pairs = K.scaled_integers()
    # x / delta = A q / (den p) for x = A / den and delta = p / q
    p, q = delta.numerator, delta.denominator
    scale = den * p
    total = 0
    prev = -1
    for A, B in pairs:
        lo = (A * q) // scale
        hi = -(-(B * q) // scale) - 1 if B > A else lo
        lo, hi = max(min(lo, last), prev + 1), min(hi, last)
        if hi >= lo:
            total += hi - lo + 1
            prev = hi
    return total


def box_dimension(K, scales):
    """Exact cover counts at each scale and the fitted slope.

    ``scales`` must be strictly decreasing with at least four entries. An
    empty ``K`` is reported as dimension 0 with ``empty=True``.
    """
    scales = tuple(as_fraction(s) for s in scales)
    if len(scales) < 4:
        raise ValueError("at least four scales are needed")
    if any(b >= a for a, b in zip(scales, scales[1:])) or scales[-1] <= 0:
        raise ValueError("scales must be positive and strictly decreasing")
    if not K:
        return DimensionEstimate(scales, tuple(0 for _ in scales), 0.0, 0.0, 0.0, True)
    counts = tuple(cell_count(K, s) for s in scales)
    x = np.array([np.log(1.0 / float(s)) for s in scales])
    y = np.log(np.array(counts, dtype=float))
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    residual = float(np.sqrt(np.mean((A @ np.array([slope, intercept]) - y) ** 2)))
    return DimensionEstimate(scales, counts, float(slope), float(intercept), residual)


def cantor_set(level):
    """The ``2^level`` closed intervals of the middle-thirds construction at ``level``."""
    pieces = [(Fraction(0), Fraction(1))]
    for _ in range(level):
        nxt = []
        for a, b in pieces:
            third = (b - a) / 3
            nxt.append((a, a + third))
            nxt.append((b - third, b))
        pieces = nxt
    return IntervalUnion._trusted(pieces)


def dyadic_scales(kmin, kmax):
    return [Fraction(1, 2**k) for k in range(kmin, kmax + 1)]


def triadic_scales(kmin, kmax):
    return [Fraction(1, 3**k) for k in range(kmin, kmax + 1)]
