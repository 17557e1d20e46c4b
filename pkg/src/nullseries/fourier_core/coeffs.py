"""Finite Fourier coefficient sequences and fast grid evaluation of partial sums.

Throughout, ``e(x) = exp(2 pi i x)`` and a sequence ``c`` of degree ``N`` stands
for the trigonometric polynomial ``sum_{|l| <= N} c_l e(l x)`` on [0, 1).
"""

import os
from dataclasses import dataclass, field

import numpy as np
import scipy.signal

from ..errors import AliasingError, ResourceError

#: default cap on the number of stored coefficients, 2N + 1
DEFAULT_DEGREE_CAP = 2**26

_DIRECT_CONVOLVE_LIMIT = 4_000_000


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision (mantissa bits) and per-operation error budgets."""

    bits: int = 53
    budgets: dict = field(default_factory=lambda: {"grid_eval": 1e-9, "vandermonde": 1e-9})

    def __post_init__(self):
        if self.bits < 53:
            raise ValueError("precision below IEEE double is not supported")

    @property
    def unit_roundoff(self):
        return 2.0 ** (-self.bits)

    def escalated(self, bits):
        return PrecisionContext(max(self.bits, bits), dict(self.budgets))

    @classmethod
    def from_env(cls):
        return cls(int(os.environ.get("NULLSERIES_PRECISION", "53")))


@dataclass(frozen=True, eq=False)
class CoeffSeq:
    """Coefficients ``c_l`` for ``l = -N..N``, stored as ``coeffs[l + N]``.

    The array is copied to complex128 and frozen. ``real_valued`` asserts
    Hermitian symmetry ``c_{-l} = conj(c_l)`` and is checked on construction.
    """

    coeffs: np.ndarray
    real_valued: bool = False

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=np.complex128).ravel()
        if arr.size % 2 != 1:
            raise ValueError("a coefficient sequence needs an odd number (2N+1) of entries")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)
        if self.real_valued and arr.size > 1:
            scale = max(float(np.abs(arr).max()), 1e-300)
            asym = float(np.abs(arr - np.conj(arr[::-1])).max())
            if asym > 64 * np.finfo(float).eps * scale:
                raise ValueError(f"real_valued sequence is not Hermitian (defect {asym:.3e})")

    # constructors
    @classmethod
    def delta(cls, degree=0):
        arr = np.zeros(2 * degree + 1, dtype=complex)
        arr[degree] = 1.0
        return cls(arr, real_valued=True)

    @classmethod
    def zeros(cls, degree=0):
        return cls(np.zeros(2 * degree + 1, dtype=complex), real_valued=True)

    @classmethod
    def from_dict(cls, entries, real_valued=False):
        degree = max((abs(int(k)) for k in entries), default=0)
        arr = np.zeros(2 * degree + 1, dtype=complex)
        for k, v in entries.items():
            arr[int(k) + degree] = v
        return cls(arr, real_valued=real_valued)

    # accessors
    @property
    def degree(self):
        return (self.coeffs.size - 1) // 2

    @property
    def indices(self):
        N = self.degree
        return np.arange(-N, N + 1)

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, l):
        N = self.degree
        l = int(l)
        if -N <= l <= N:
            return complex(self.coeffs[l + N])
        return 0j

    def window(self, lo, hi):
        """Entries for indices ``lo..hi`` (zero outside the stored range)."""
        N = self.degree
        out = np.zeros(hi - lo + 1, dtype=complex)
        a, b = max(lo, -N), min(hi, N)
        if a <= b:
            out[a - lo : b - lo + 1] = self.coeffs[a + N : b + N + 1]
        return out

    def trim(self):
        """Drop symmetric trailing zero pairs so that ``(c_N, c_-N) != (0, 0)``."""
        nz = np.flatnonzero(self.coeffs)
        if nz.size == 0:
            return CoeffSeq.zeros(0)
        N = self.degree
        new = int(max(abs(nz[0] - N), abs(nz[-1] - N)))
        return CoeffSeq(self.coeffs[N - new : N + new + 1], self.real_valued)

    def truncate(self, n):
        """Coefficients of the partial sum ``S_n`` (degree ``min(n, N)``)."""
        N = self.degree
        n = min(int(n), N)
        if n < 0:
            raise ValueError("n must be nonnegative")
        return CoeffSeq(self.coeffs[N - n : N + n + 1], self.real_valued)

    def pad(self, degree):
        N = self.degree
        if degree < N:
            raise ValueError("pad can only enlarge a sequence")
        arr = np.zeros(2 * degree + 1, dtype=complex)
        arr[degree - N : degree + N + 1] = self.coeffs
        return CoeffSeq(arr, self.real_valued)

    def scale(self, factor):
        real = self.real_valued and np.isreal(factor)
        return CoeffSeq(self.coeffs * factor, real)

    def __add__(self, other):
        D = max(self.degree, other.degree)
        a, b = self.pad(D).coeffs, other.pad(D).coeffs
        return CoeffSeq(a + b, self.real_valued and other.real_valued)

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def derivative(self, order=1):
        """Coefficients of the ``order``-th derivative, ``(2 pi i l)^order c_l``."""
        factor = (2j * np.pi * self.indices) ** order
        return CoeffSeq(self.coeffs * factor, self.real_valued)

    def shift_phase(self, t):
        """Coefficients of ``x -> T(x - t)``: multiply ``c_l`` by ``e(-l t)``."""
        return CoeffSeq(self.coeffs * np.exp(-2j * np.pi * self.indices * t), self.real_valued)

    def __call__(self, x):
        """Direct evaluation at arbitrary points (small inputs only)."""
        x = np.asarray(x, dtype=float)
        phase = np.exp(2j * np.pi * np.multiply.outer(x, self.indices))
        return phase @ self.coeffs


@dataclass(frozen=True, eq=False)
class GridSamples:
    """Values ``v_j`` of a partial sum at ``x_j = j / M``."""

    M: int
    values: np.ndarray
    n: int
    error_bound: float

    @property
    def x(self):
        return np.arange(self.M) / self.M


def next_pow2(k):
    return 1 << max(0, int(k - 1).bit_length())


def grid_size_for(degree):
    """Smallest power of two at least ``4 (2N + 1)``."""
    return next_pow2(4 * (2 * int(degree) + 1))


def _check_cap(count, cap):
    if count > cap:
        raise ResourceError(
            f"{count} coefficients exceed the cap of {cap}", requested=int(count), cap=int(cap)
        )


def partial_sum_eval(c, n, M=None, ctx=None):
    """Evaluate ``S_n(c; j/M)`` for all ``j`` by an inverse FFT.

    The recorded ``error_bound`` is a conservative floating-point bound,
    ``4 log2(M) u sum|c_l|``, which dominates ``(2n+1) max|c_l| u``.
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if M is None:
        M = grid_size_for(min(n, c.degree))
    M = int(M)
    if M & (M - 1) or M <= 0:
        raise ValueError("grid size must be a power of two")
    if M < 2 * n + 1 and M < 2 * c.degree + 1:
        raise AliasingError(f"grid of {M} points aliases a partial sum of order {n}")
    part = c.truncate(n)
    k = part.degree
    buf = np.zeros(M, dtype=complex)
    buf[np.arange(-k, k + 1) % M] = part.coeffs
    values = np.fft.ifft(buf) * M
    u = (ctx or PrecisionContext()).unit_roundoff
    err = 4.0 * max(np.log2(M), 1.0) * u * float(np.abs(part.coeffs).sum())
    return GridSamples(M, values, n, err)


def coeff_convolve(c, d, cap=DEFAULT_DEGREE_CAP):
    """Coefficients of the product of two trigonometric polynomials."""
    N = c.degree + d.degree
    _check_cap(2 * N + 1, cap)
    if c.coeffs.size * d.coeffs.size <= _DIRECT_CONVOLVE_LIMIT:
        out = np.convolve(c.coeffs, d.coeffs)
    else:
        out = scipy.signal.fftconvolve(c.coeffs, d.coeffs)
    real = c.real_valued and d.real_valued
    if real:
        # the exact product is Hermitian; FFT rounding is not, so restore the symmetry
        out = 0.5 * (out + np.conj(out[::-1]))
    return CoeffSeq(out, real)


def dilate(c, r, cap=DEFAULT_DEGREE_CAP):
    """Coefficients of ``x -> T(r x)``: entry ``r l`` receives ``c_l``."""
    r = int(r)
    if r < 1:
        raise ValueError("dilation factor must be a positive integer")
    N = c.degree
    _check_cap(2 * r * N + 1, cap)
    out = np.zeros(2 * r * N + 1, dtype=complex)
    out[r * np.arange(-N, N + 1) + r * N] = c.coeffs
    return CoeffSeq(out, c.real_valued)


def l2_norm(c):
    return float(np.sqrt(np.sum(np.abs(c.coeffs) ** 2)))


def l1_coeff_norm(c):
    return float(np.sum(np.abs(c.coeffs)))


def sup_coeff_norm(c):
    return float(np.abs(c.coeffs).max()) if c.coeffs.size else 0.0
