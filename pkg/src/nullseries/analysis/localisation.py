"""Localisation diagnostics: ``E_n = phi S_n(c) - S_n(c * phi)`` and its tail bounds."""

from dataclasses import dataclass

import numpy as np

from ..fourier_core import CoeffSeq, certified_sup, coeff_convolve, grid_size_for


def error_direct(c, phi, n):
    """``E_n`` straight from its definition, using the library convolution."""
    n = int(n)
    left = coeff_convolve(c.truncate(n), phi)
    full = coeff_convolve(c, phi)
    right = full.truncate(n)
    D = max(left.degree, right.degree)
    return left.pad(D) - right.pad(D)


def error_banded(c, phi, n):
    """``E_n`` from the two banded sums, accumulated shift by shift over ``phi``.

    For ``|j| > n``: ``E(j) = sum_l c_{j-l} phi(l) 1{|j-l| <= n}``.
    For ``|j| <= n``: ``E(j) = -sum_l c_{j-l} phi(l) 1{|j-l| > n}``.
    """
    n = int(n)
    Nc, Np = c.degree, phi.degree
    D = Nc + Np
    j = np.arange(-D, D + 1)
    out = np.zeros(2 * D + 1, dtype=complex)
    outer = np.abs(j) > n
    for l in range(-Np, Np + 1):
        p = phi[l]
        if p == 0:
            continue
        src = j - l
        valid = np.abs(src) <= Nc
        cv = np.zeros_like(out)
        cv[valid] = c.coeffs[src[valid] + Nc]
        near = np.abs(src) <= n
        out += np.where(outer, np.where(near, cv, 0), np.where(near, 0, -cv)) * p
    return CoeffSeq(out, c.real_valued and phi.real_valued)


def tail_sums(phi):
    """``T(r) = sum_{|s| >= r} |phi_hat(s)|`` for ``r = 0..deg phi + 1``."""
    N = phi.degree
    mag = np.abs(phi.coeffs)
    sym = mag[N:].copy()
    sym[1:] += mag[:N][::-1]
    # T(r) = sum_{t >= r} sym(t)
    T = np.concatenate([np.cumsum(sym[::-1])[::-1], [0.0]])
    return T


@dataclass(frozen=True)
class LocalisationReport:
    """``E_n`` with the checked tail inequality at offsets ``j = +-n +- r``."""

    E: CoeffSeq
    n: int
    c_sup: float
    offsets: np.ndarray
    indices: np.ndarray
    values: np.ndarray
    bounds: np.ndarray
    worst_slack: float
    banded_vs_direct: float

    @property
    def holds(self):
        return bool(self.worst_slack >= 0)


def localisation_error_spectrum(c, phi, n, check_direct=True):
    """``E_n`` by the banded formulas, with ``|E_n(j)| <= ||c||_inf T(r)`` checked at every
    ``j = +-(n + r)`` (``r >= 1``) and ``j = +-(n - r)`` (``0 <= r <= n``) in range.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    E = error_banded(c, phi, n)
    c_sup = float(np.abs(c.coeffs).max())
    T = tail_sums(phi)

    def tail(r):
        return T[np.minimum(r, T.size - 1)]

    D = E.degree
    r_out = np.arange(1, max(D - n, 0) + 1)
    r_in = np.arange(0, min(n, D) + 1)
    idx = np.concatenate([n + r_out, -(n + r_out), n - r_in, -(n - r_in)])
    offs = np.concatenate([r_out, r_out, r_in, r_in])
    keep = np.abs(idx) <= D
    idx, offs = idx[keep], offs[keep]
    vals = np.abs(E.coeffs[idx + D])
    bnds = c_sup * tail(offs)
    slack = bnds - vals
    worst = float(slack.min()) if slack.size else 0.0
    diff = float("nan")
    if check_direct:
        direct = error_direct(c, phi, n)
        M = max(direct.degree, D)
        diff = float(np.abs(direct.pad(M).coeffs - E.pad(M).coeffs).max())
    return LocalisationReport(E, n, c_sup, offs, idx, vals, bnds, worst, diff)


def rajchman_gap(c, phi, n, M=None):
    """Certified ``sup_x |phi(x) S_n(c; x) - S_n(c * phi; x)|`` (grid maximum plus correction)."""
    E = error_direct(c, phi, n).trim()
    if M is None:
        M = grid_size_for(E.degree)
    return certified_sup(E, M=M, name=f"rajchman_gap[n={int(n)}]")
