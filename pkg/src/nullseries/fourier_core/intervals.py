"""Finite unions of closed subintervals of [0, 1] with exact rational endpoints."""

from fractions import Fraction
from math import ceil, floor

import numpy as np

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(value):
    """Convert ints, floats, strings or (num, den) pairs to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (tuple, list)):
        num, den = value
        return Fraction(int(num), int(den))
    return Fraction(value)


class IntervalUnion:
    """Sorted, pairwise-disjoint closed intervals inside [0, 1].

    Endpoints are :class:`fractions.Fraction`; every operation below is exact.
    Touching or overlapping inputs are merged on construction, so consecutive
    intervals always satisfy ``b_i < a_{i+1}``.
    """

    __slots__ = ("_iv", "_floats")

    def __init__(self, intervals=()):
        pairs = []
        for a, b in intervals:
            a, b = as_fraction(a), as_fraction(b)
            if a > b:
                raise ValueError(f"empty interval [{a}, {b}]")
            if a < ZERO or b > ONE:
                raise ValueError(f"interval [{a}, {b}] not inside [0, 1]")
            pairs.append((a, b))
        pairs.sort()
        self._iv = tuple(_merge_sorted(pairs))
        self._floats = None

    @classmethod
    def _trusted(cls, pairs):
        # caller guarantees sorted, disjoint, inside [0, 1]
        obj = cls.__new__(cls)
        obj._iv = tuple(pairs)
        obj._floats = None
        return obj

    @classmethod
    def empty(cls):
        return cls._trusted(())

    @classmethod
    def full(cls):
        return cls._trusted(((ZERO, ONE),))

    @classmethod
    def interval(cls, a, b):
        return cls([(a, b)])

    # -- basic protocol -------------------------------------------------
    @property
    def intervals(self):
        return self._iv

    def __len__(self):
        return len(self._iv)

    def __iter__(self):
        return iter(self._iv)

    def __bool__(self):
        return bool(self._iv)

    def __eq__(self, other):
        return isinstance(other, IntervalUnion) and self._iv == other._iv

    def __hash__(self):
        return hash(self._iv)

    def __repr__(self):
        if len(self._iv) > 4:
            head = ", ".join(f"[{a}, {b}]" for a, b in self._iv[:3])
            return f"IntervalUnion({head}, ... {len(self._iv)} intervals)"
        return "IntervalUnion(" + ", ".join(f"[{a}, {b}]" for a, b in self._iv) + ")"

    def is_empty(self):
        return not self._iv

    def float_bounds(self):
        """Endpoints as two float arrays (cached); for grid selection only."""
        if self._floats is None:
            lo = np.array([float(a) for a, _ in self._iv], dtype=float)
            hi = np.array([float(b) for _, b in self._iv], dtype=float)
            self._floats = (lo, hi)
        return self._floats

    # -- exact algebra ---------------------------------------------------
    def measure(self):
        total = ZERO
        for a, b in self._iv:
            total += b - a
        return total

    def union(self, other):
        return IntervalUnion._trusted(_merge_sorted(sorted(self._iv + other._iv)))

    def intersect(self, other):
        out = []
        A, B = self._iv, other._iv
        i = j = 0
        while i < len(A) and j < len(B):
            a0, a1 = A[i]
            b0, b1 = B[j]
            lo = a0 if a0 > b0 else b0
            hi = a1 if a1 < b1 else b1
            if lo <= hi:
                out.append((lo, hi))
            if a1 < b1:
                i += 1
            else:
                j += 1
        return IntervalUnion._trusted(_merge_sorted(out))

    def contains(self, other):
        """True iff ``other`` is a subset of ``self``."""
        A = self._iv
        i = 0
        for b0, b1 in other._iv:
            while i < len(A) and A[i][1] < b0:
                i += 1
            if i == len(A) or A[i][0] > b0 or A[i][1] < b1:
                return False
        return True

    def complement(self):
        """Closure of ``[0, 1]`` minus ``self``."""
        out = []
        prev = ZERO
        for a, b in self._iv:
            if a > prev:
                out.append((prev, a))
            prev = b
        if prev < ONE:
            out.append((prev, ONE))
        return IntervalUnion._trusted(out)

    def inflate(self, delta, periodic=True):
        """Minkowski sum with ``[-delta, delta]``.

        With ``periodic`` the sum is taken on the circle R/Z and the result
        folded back into [0, 1]; otherwise it is clipped to [0, 1].
        """
        delta = as_fraction(delta)
        if delta < 0:
            raise ValueError("delta must be nonnegative")
        if not self._iv or delta == 0:
            return self
        pieces = []
        for a, b in self._iv:
            lo, hi = a - delta, b + delta
            if hi - lo >= ONE:
                return IntervalUnion.full()
            if periodic:
                if lo < ZERO:
                    pieces.append((lo + ONE, ONE))
                    lo = ZERO
                if hi > ONE:
                    pieces.append((ZERO, hi - ONE))
                    hi = ONE
            else:
                lo, hi = max(lo, ZERO), min(hi, ONE)
            pieces.append((lo, hi))
        return IntervalUnion(pieces)

    def periodic_preimage(self, r, window=None):
        """``{x in [0,1] : r x mod 1 in self}``, optionally intersected with ``window``.

        ``window`` is a single ``(lo, hi)`` pair; only the copies meeting it are
        generated, which keeps large ``r`` cheap.
        """
        r = int(r)
        if r < 1:
            raise ValueError("r must be a positive integer")
        if window is None:
            klo, khi = 0, r - 1
            wlo, whi = ZERO, ONE
        else:
            wlo, whi = as_fraction(window[0]), as_fraction(window[1])
            klo = max(0, floor(wlo * r) - 1)
            khi = min(r - 1, ceil(whi * r))
        out = []
        for k in range(klo, khi + 1):
            for a, b in self._iv:
                lo = (k + a) / r
                hi = (k + b) / r
                if window is not None:
                    if hi < wlo or lo > whi:
                        continue
                    lo = lo if lo > wlo else wlo
                    hi = hi if hi < whi else whi
                out.append((lo, hi))
        return IntervalUnion._trusted(_merge_sorted(out))

    def scaled_integers(self):
        """Endpoints multiplied by their common denominator: ``(den, [(A, B), ...])``."""
        from math import lcm

        den = 1
        for a, b in self._iv:
            den = lcm(den, a.denominator, b.denominator)
        return den, [(int(a * den), int(b * den)) for a, b in self._iv]

    # -- serialisation ---------------------------------------------------
    def to_json_obj(self):
        return [
            [[str(a.numerator), str(a.denominator)], [str(b.numerator), str(b.denominator)]]
            for a, b in self._iv
        ]

    @classmethod
    def from_json_obj(cls, obj):
        return cls([(as_fraction(a), as_fraction(b)) for a, b in obj])


def _merge_sorted(pairs):
    out = []
    for a, b in pairs:
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return out


def grid_mask(union, M, halo=0.5, inner=False):
    """Boolean mask of grid points ``j/M`` lying within ``halo/M`` of ``union``.

    Float rounding is absorbed by widening each index range by one point, so
    the mask may include a few extra points but never misses one. With
    ``inner`` the mask holds only the points inside ``union`` (up to rounding
    at the endpoints), which is what observational maxima need.
    """
    mask = np.zeros(M, dtype=bool)
    if not union:
        return mask
    lo, hi = union.float_bounds()
    if inner:
        start = np.ceil(lo * M - 1e-9).astype(np.int64)
        stop = np.floor(hi * M + 1e-9).astype(np.int64)
    else:
        start = np.ceil(lo * M - halo).astype(np.int64) - 1
        stop = np.floor(hi * M + halo).astype(np.int64) + 1
    diff = np.zeros(M + 3, dtype=np.int64)
    # shift by one so that index -1 is representable; wrap the circle afterwards
    np.add.at(diff, np.clip(start + 1, 0, M + 2), 1)
    np.add.at(diff, np.clip(stop + 2, 0, M + 2), -1)
    cover = np.cumsum(diff)[: M + 2] > 0
    mask |= cover[1 : M + 1]
    if cover[0]:
        mask[M - 1] = True
    if cover[M + 1]:
        mask[0] = True
    return mask
