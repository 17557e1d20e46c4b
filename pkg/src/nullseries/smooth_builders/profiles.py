"""Compactly supported smooth profiles and their exact Fourier coefficients.

The C^2 objects (plateau ``u`` and window ``q``) are piecewise polynomials, so
their Fourier transforms are computed by closed-form integration by parts at
high frequency and Gauss-Legendre quadrature at low frequency; both are exact
to rounding. The Gevrey-2 step is handled by composite quadrature.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np
from numpy.polynomial import Polynomial

from ..errors import NumericError
from ..fourier_core import CoeffSeq, IntervalUnion, next_pow2

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)
_GL_NODES = 0.5 * (_GL_NODES + 1.0)
_GL_WEIGHTS = 0.5 * _GL_WEIGHTS
_CLOSED_FORM_OMEGA = 40.0


def smootherstep():
    """``6t^5 - 15t^4 + 10t^3``: rises from 0 to 1 on [0, 1] with two matched derivatives."""
    return Polynomial([0, 0, 0, 10, -15, 6])


@dataclass(frozen=True)
class Piece:
    lo: float
    hi: float
    poly: Polynomial  # in the local variable t = (x - lo) / (hi - lo)

    @property
    def length(self):
        return self.hi - self.lo


class PiecewisePolynomial:
    """A function on R that is polynomial on finitely many pieces and zero elsewhere."""

    def __init__(self, pieces):
        self.pieces = [p for p in pieces if p.hi > p.lo]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for p in self.pieces:
            inside = (x >= p.lo) & (x <= p.hi)
            out[inside] = p.poly((x[inside] - p.lo) / p.length)
        return out

    def integral(self):
        return float(sum(p.length * p.poly.integ()(1.0) for p in self.pieces))

    def fourier(self, xi):
        """``int f(x) e(-xi x) dx`` for an array of real frequencies ``xi``."""
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        out = np.zeros(xi.shape, dtype=complex)
        for p in self.pieces:
            omega = 2 * np.pi * xi * p.length
            local = np.empty(xi.shape, dtype=complex)
            small = np.abs(omega) < _CLOSED_FORM_OMEGA
            if small.any():
                w = omega[small]
                phase = np.exp(-1j * np.multiply.outer(w, _GL_NODES))
                local[small] = phase @ (_GL_WEIGHTS * p.poly(_GL_NODES))
            big = ~small
            if big.any():
                local[big] = _poly_exp_integral(p.poly, -1j * omega[big])
            out += p.length * np.exp(-2j * np.pi * xi * p.lo) * local
        return out

    def derivative_jump_bound(self, order):
        """``sum of |jumps of f^(order-1)| + int |f^(order)|`` (for ``|f^(xi)| <= B/(2 pi xi)^order``)."""
        # jumps of the (order-1)-th derivative at every piece boundary
        knots = {}
        total = 0.0
        for p in self.pieces:
            d = p.poly.deriv(order - 1) / p.length ** (order - 1)
            knots[p.lo] = knots.get(p.lo, 0.0) - float(d(0.0))
            knots[p.hi] = knots.get(p.hi, 0.0) + float(d(1.0))
            dd = p.poly.deriv(order) / p.length**order
            t = np.linspace(0.0, 1.0, 4097)
            vals = np.abs(dd(t))
            # trapezoid on a polynomial; pad by the max deviation for safety
            total += p.length * (float(np.mean(vals)) + float(vals.max()) / 4096)
        return total + sum(abs(v) for v in knots.values())


def _poly_exp_integral(poly, c):
    """``int_0^1 p(t) exp(c t) dt`` via ``[exp(ct) sum_k (-1)^k p^(k)(t) / c^(k+1)]_0^1``."""
    total_1 = np.zeros(c.shape, dtype=complex)
    total_0 = np.zeros(c.shape, dtype=complex)
    d = poly
    sign = 1.0
    cp = c.copy()
    for _ in range(poly.degree() + 1):
        total_1 += sign * d(1.0) / cp
        total_0 += sign * d(0.0) / cp
        d = d.deriv()
        sign = -sign
        cp = cp * c
    return np.exp(c) * total_1 - total_0


# -- plateau -------------------------------------------------------------
@dataclass(frozen=True)
class Plateau:
    """C^2 plateau on [0, 1]: zero on the collars, one on ``[t0 + w, 1 - t0 - w]``."""

    t0: Fraction
    w: Fraction
    profile: PiecewisePolynomial = field(repr=False)

    @property
    def support(self):
        return IntervalUnion.interval(self.t0, 1 - self.t0)

    @property
    def flat(self):
        return (self.t0 + self.w, 1 - self.t0 - self.w)

    def fourier(self, xi):
        return self.profile.fourier(xi)

    @property
    def l1_defect(self):
        return 1.0 - self.profile.integral()

    def tail_bound(self, cutoff, dilation=1):
        """Bound on ``sum_{|l| > cutoff} |(1/dilation) U(l / dilation)|``.

        Uses ``|U(xi)| <= B / (2 pi xi)^4`` with ``B`` from the third-derivative
        jumps, and ``sum_{l > K} l^-4 <= 1 / (3 K^3)``.
        """
        B = self.profile.derivative_jump_bound(4)
        a = dilation
        return 2.0 * a**3 * B / ((2 * np.pi) ** 4 * 3.0 * float(cutoff) ** 3)


def plateau_profile(eps):
    eps = Fraction(eps).limit_denominator(10**12) if not isinstance(eps, Fraction) else eps
    t0 = eps / 16
    w = 7 * eps / 16
    S = smootherstep()
    one = Polynomial([1.0])
    pieces = [
        Piece(float(t0), float(t0 + w), S),
        Piece(float(t0 + w), float(1 - t0 - w), one),
        Piece(float(1 - t0 - w), float(1 - t0), S(Polynomial([1.0, -1.0]))),
    ]
    return Plateau(t0, w, PiecewisePolynomial(pieces))


def build_plateau(eps):
    """Truncated Fourier expansion of a C^2 plateau with ``||u - 1||_1 <= eps``.

    Returns ``(u_hat, supp_u, certificate)``; ``u = 1`` on ``[eps/2, 1 - eps/2]``
    and the discarded coefficient tail has l1 mass at most ``eps / 10``.
    """
    if not 0 < float(eps) < 1:
        raise ValueError("eps must lie in (0, 1)")
    pl = plateau_profile(eps)
    budget = float(eps) / 10
    B = pl.profile.derivative_jump_bound(4)
    K = int(np.ceil((2.0 * B / ((2 * np.pi) ** 4 * 3.0 * budget)) ** (1 / 3)))
    K = max(K, 1)
    coeffs = pl.fourier(np.arange(-K, K + 1))
    coeffs = 0.5 * (coeffs + np.conj(coeffs[::-1]))
    u = CoeffSeq(coeffs, real_valued=True)
    cert = {
        "l1_defect": pl.l1_defect,
        "l1_defect_limit": float(eps),
        "tail_l1_bound": pl.tail_bound(K),
        "tail_budget": budget,
        "degree": K,
        "flat_interval": [float(x) for x in pl.flat],
    }
    return u, pl.support, cert


# -- window --------------------------------------------------------------
@dataclass(frozen=True)
class Window:
    """Nonnegative C^2 bump ``q`` with ``int q = 1`` supported in ``[inset, width - inset]``."""

    width: Fraction
    inset: Fraction
    profile: PiecewisePolynomial = field(repr=False)

    def fourier(self, xi):
        return self.profile.fourier(xi)

    def tail_bound(self, cutoff):
        B = self.profile.derivative_jump_bound(4)
        return 2.0 * B / ((2 * np.pi) ** 4 * 3.0 * float(cutoff) ** 3)

    @property
    def support(self):
        return IntervalUnion.interval(self.inset, self.width - self.inset)


def window_profile(m):
    width = Fraction(1, 2 * m)
    inset = width / 16
    L = width - 2 * inset
    bump = Polynomial([0, 1, -1]) ** 3 * (140.0 / float(L))
    return Window(width, inset, PiecewisePolynomial([Piece(float(inset), float(width - inset), bump)]))


@dataclass(frozen=True)
class WindowResult:
    coeffs: CoeffSeq
    window: Window
    floor: float
    tail_bound: float


def build_window(m, n, rel_tail=1e-3):
    """C^2 bump in ``[0, 1/(2m)]`` with all ``|q_hat(k)|, |k| <= n`` bounded away from 0.

    The truncation degree is the smallest with certified tail below
    ``rel_tail * ||q_hat||_1``.
    """
    if m < 1 or n < 0:
        raise ValueError("need m >= 1 and n >= 0")
    win = window_profile(m)
    low = win.fourier(np.arange(-n, n + 1))
    floor = float(np.abs(low).min())
    if not floor > 1e-12:
        raise NumericError("window coefficients vanish below the precision floor", floor=floor)
    B = win.profile.derivative_jump_bound(4)
    K = max(n, 4 * m)
    while True:
        coeffs = win.fourier(np.arange(-K, K + 1))
        l1 = float(np.abs(coeffs).sum())
        tail = 2.0 * B / ((2 * np.pi) ** 4 * 3.0 * K**3)
        if tail <= rel_tail * l1:
            break
        K *= 2
    coeffs = 0.5 * (coeffs + np.conj(coeffs[::-1]))
    return WindowResult(CoeffSeq(coeffs, real_valued=True), win, floor, tail)


# -- Gevrey step -----------------------------------------------------------
class GevreyStep:
    """``psi(t) = int_0^t g / int_0^1 g`` with ``g(s) = exp(-1/s - 1/(1-s))`` on (0, 1).

    ``psi`` vanishes for ``t <= 0``, equals 1 for ``t >= 1`` and satisfies
    ``||psi^(k)|| <= C (k!)^2``.
    """

    panels = 512

    def __init__(self):
        edges = np.linspace(0.0, 1.0, self.panels + 1)
        h = edges[1] - edges[0]
        nodes = edges[:-1, None] + h * _GL_NODES[None, :]
        cum = np.concatenate([[0.0], np.cumsum((_bump(nodes) * _GL_WEIGHTS).sum(axis=1) * h)])
        self._norm = cum[-1]
        self._cum = cum / cum[-1]
        self._h = h

    @property
    def normaliser(self):
        return self._norm

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.where(t >= 1.0, 1.0, 0.0)
        inside = (t > 0.0) & (t < 1.0)
        if inside.any():
            ti = t[inside]
            k = np.minimum((ti / self._h).astype(np.int64), self.panels - 1)
            start = k * self._h
            span = ti - start
            nodes = start[:, None] + span[:, None] * _GL_NODES[None, :]
            partial = (_bump(nodes) * _GL_WEIGHTS).sum(axis=1) * span / self._norm
            out[inside] = self._cum[k] + partial
        return out

    def derivative(self, t, k):
        """``psi^(k)(t)`` for ``k >= 1`` via the recursion for derivatives of ``exp(h)``."""
        t = np.asarray(t, dtype=float)
        return _bump_derivatives(t, k - 1)[k - 1] / self._norm

    def derivative_sups(self, kmax=8, points=1 << 15):
        t = (np.arange(points) + 0.5) / points
        sups = [1.0]
        ders = _bump_derivatives(t, kmax - 1)
        for k in range(1, kmax + 1):
            sups.append(float(np.abs(ders[k - 1]).max()) / self._norm)
        return sups


def _bump(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    ok = (s > 1e-3) & (s < 1 - 1e-3)
    out[ok] = np.exp(-1.0 / s[ok] - 1.0 / (1.0 - s[ok]))
    return out


def _bump_derivatives(s, kmax):
    """Derivatives 0..kmax of ``g = exp(h)``, ``h = -1/s - 1/(1-s)``, on (0, 1)."""
    s = np.asarray(s, dtype=float)
    ok = (s > 5e-3) & (s < 1 - 5e-3)
    so = s[ok]
    hder = []
    for j in range(1, kmax + 2):
        # d^j/ds^j of -1/s and of -1/(1-s)
        a = -((-1) ** j) * factorial(j) * so ** (-j - 1)
        b = -factorial(j) * (1.0 - so) ** (-j - 1)
        hder.append(a + b)
    g = [np.exp(-1.0 / so - 1.0 / (1.0 - so))]
    from math import comb

    for k in range(1, kmax + 1):
        acc = np.zeros_like(so)
        for i in range(k):
            acc += comb(k - 1, i) * hder[i] * g[k - 1 - i]
        g.append(acc)
    out = []
    for k in range(kmax + 1):
        full = np.zeros_like(s)
        full[ok] = g[k]
        out.append(full)
    return out


@dataclass(frozen=True)
class BumpProfile:
    """Smoothness data for a step/edge profile."""

    edge_width: Fraction
    smoothness: str
    C_psi: float
    derivative_sups: tuple
    step: GevreyStep = field(repr=False, compare=False)

    def __call__(self, t):
        return self.step(t)


_STEP = None


def gevrey_step():
    global _STEP
    if _STEP is None:
        _STEP = GevreyStep()
    return _STEP


def build_gevrey_step(kmax=8):
    """The Gevrey-2 step with its measured constant ``C = max_k sup|psi^(k)| / (k!)^2``."""
    step = gevrey_step()
    sups = step.derivative_sups(kmax)
    C = max(s / factorial(k) ** 2 for k, s in enumerate(sups))
    return BumpProfile(Fraction(1), "Gevrey2", C, tuple(sups), step)


# -- smooth cutoff -----------------------------------------------------------
@dataclass(frozen=True)
class Cutoff:
    coeffs: CoeffSeq
    interval: tuple
    margin: Fraction
    support: IntervalUnion
    envelope: tuple  # (C, c) in C exp(-c sqrt(|l| margin))
    tail: float

    def __call__(self, x):
        return cutoff_values(x, self.interval, self.margin)


def cutoff_values(x, interval, margin):
    a, b = float(interval[0]), float(interval[1])
    mg = float(margin)
    step = gevrey_step()
    x = np.asarray(x, dtype=float)
    rise = step((x - a - mg / 4) / (0.75 * mg))
    fall = step((b - mg / 4 - x) / (0.75 * mg))
    return rise * fall


def build_smooth_cutoff(interval, margin, s_scale=None, tol=1e-15, max_grid=1 << 24):
    """Gevrey-2 cutoff ``phi_I``: 1 on ``[a + margin, b - margin]``, supported in ``(a, b)``.

    ``s_scale`` is accepted for the analysis pipeline, where ``margin`` is
    ``log^3 s / s``; it is recorded but does not change the construction.
    Coefficients come from an FFT of samples; the grid doubles until the
    coefficients near the Nyquist index fall below ``tol``.
    """
    a, b = Fraction(interval[0]), Fraction(interval[1])
    margin = Fraction(margin)
    if b - a <= 2 * margin:
        raise ValueError("interval too short for the requested margin")
    if a < 0 or b > 1:
        raise ValueError("interval must lie inside [0, 1]")
    M = next_pow2(int(64 / float(margin)))
    while True:
        x = np.arange(M) / M
        vals = cutoff_values(x, (a, b), margin)
        spec = np.fft.fft(vals) / M
        mags = np.abs(spec)
        edge = mags[M // 4 : 3 * M // 4].max()
        if edge < tol * mags[0] or M >= max_grid:
            break
        M *= 2
    if edge >= tol * mags[0]:
        raise NumericError("cutoff coefficients did not decay below tolerance", grid=M, edge=float(edge))
    half = M // 2
    ordered = np.concatenate([spec[half + 1 :], spec[: half + 1]])  # indices -half+1 .. half
    idx = np.arange(-half + 1, half + 1)
    keep = np.abs(ordered) > tol * mags[0]
    deg = int(np.abs(idx[keep]).max()) if keep.any() else 0
    sel = (idx >= -deg) & (idx <= deg)
    coeffs = ordered[sel]
    coeffs = 0.5 * (coeffs + np.conj(coeffs[::-1]))
    tail = float(np.abs(ordered[~sel]).sum())
    c_hat = CoeffSeq(coeffs, real_valued=True)
    env = fit_envelope(c_hat, float(margin))
    support = IntervalUnion.interval(a + margin / 4, b - margin / 4)
    return Cutoff(c_hat, (a, b), margin, support, env, tail)


def fit_envelope(c, margin):
    """Fit ``|c_l| <= C exp(-c sqrt(|l| margin))`` over the stored indices ``l >= 0``."""
    N = c.degree
    l = np.arange(0, N + 1)
    mag = np.abs(c.coeffs[N:])
    ok = mag > 0
    z = np.sqrt(l * margin)
    if ok.sum() < 3:
        return (float(mag.max(initial=0.0)), 0.0)
    # slope from a least-squares fit of log|c_l| on the upper part of the spectrum
    slope, _ = np.polyfit(z[ok], np.log(mag[ok]), 1)
    rate = max(-slope, 0.0)
    C = float(np.max(mag[ok] * np.exp(rate * z[ok])))
    return (C * (1 + 1e-12), float(rate))

