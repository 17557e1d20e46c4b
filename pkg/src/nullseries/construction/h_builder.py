"""Functions supported in [0, 1/2] whose low partial sums are small there.

``h = sum_j a_j q(x - j/(2M))`` is a combination of ``M = 2n + 1`` translated
windows. Matching ``h_hat(k) = P_hat(k)`` for ``|k| <= n`` is a square
Vandermonde system at the distinct nodes ``e(-j/(2M))``, so ``S_n(h) = P`` is
small on [0, 1/2] while ``h`` itself vanishes off [0, 1/2].
"""

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from ..errors import NumericError
from ..fourier_core import CoeffSeq, IntervalUnion, PrecisionContext, certified_sup, grid_mask
from ..fourier_core import partial_sum_eval
from ..smooth_builders import build_arc_poly, build_window
from ..smooth_builders.arc_poly import HALF

#: condition number above which the solve is repeated in extended precision
ESCALATION_COND = 1e8
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class HFunction:
    """``h`` with ``h_hat(0) = 1``, support in [0, 1/2] and ``S_m(h) = P`` small there."""

    coeffs: CoeffSeq
    m: int
    supp: IntervalUnion
    hull: IntervalUnion
    arc: object = field(repr=False)
    weights: np.ndarray = field(repr=False)
    certificates: dict = field(default_factory=dict)

    @property
    def partial(self):
        """Coefficients of ``S_m(h)``, equal to the arc polynomial."""
        return self.coeffs.truncate(self.m)


def vandermonde_nodes(M):
    return np.exp(-2j * np.pi * np.arange(M) / (2 * M))


def solve_window_weights(rhs, M, ctx=None):
    """Solve ``sum_j a_j w_j^k = rhs_k`` for ``k = -n..n`` (``M = 2n + 1`` nodes ``w_j``).

    Returns ``(a, cond, residual, bits)``. Double precision is tried first;
    if the condition estimate exceeds ``ESCALATION_COND`` or the residual is
    above tolerance the system is re-solved with mpmath at increasing precision.
    """
    ctx = ctx or PrecisionContext()
    n = (M - 1) // 2
    k = np.arange(-n, n + 1)
    V = vandermonde_nodes(M)[None, :] ** k[:, None]
    cond = float(np.linalg.cond(V))
    rhs = np.asarray(rhs, dtype=complex)
    scale = float(np.abs(rhs).max()) or 1.0

    def residual(a):
        return float(np.abs(V @ a - rhs).max()) / scale

    bits = ctx.bits
    if cond <= ESCALATION_COND and bits == 53:
        a = np.linalg.solve(V, rhs)
        res = residual(a)
        if res <= RESIDUAL_TOL:
            return a, cond, res, bits
    for bits in (max(bits, 128), 256, 512):
        with mpmath.workprec(bits):
            nodes = [mpmath.expjpi(-mpmath.mpf(j) / M) for j in range(M)]
            A = mpmath.matrix([[nodes[j] ** int(kk) for j in range(M)] for kk in k])
            b = mpmath.matrix([mpmath.mpc(complex(x)) for x in rhs])
            sol = mpmath.lu_solve(A, b)
            a = np.array([complex(sol[j]) for j in range(M)])
        res = residual(a)
        if res <= RESIDUAL_TOL:
            return a, cond, res, bits
    raise NumericError("Vandermonde residual above tolerance", residual=res, cond=cond, bits=bits)


def build_h(eps, ctx=None, rel_tail=1e-6):
    """Window combination ``h`` for tolerance ``eps`` (``0 < eps``; ``eps >= 1`` gives one window)."""
    eps = float(eps)
    if not eps > 0:
        raise ValueError("eps must be positive")
    arc = build_arc_poly(eps)
    n = arc.n
    M = 2 * n + 1
    win = build_window(M, n, rel_tail=rel_tail)
    q = win.coeffs
    P = arc.coeffs
    qlow = np.array([q[k] for k in range(-n, n + 1)])
    rhs = P.coeffs / qlow
    a, cond, res, bits = solve_window_weights(rhs, M, ctx)
    imag_defect = float(np.abs(a.imag).max())
    a = a.real  # exact solution is real: the system is conjugation-symmetric
    K = q.degree
    kk = np.arange(-K, K + 1)
    phases = np.exp(-2j * np.pi * np.multiply.outer(kk, np.arange(M)) / (2 * M))
    hhat = q.coeffs * (phases @ a)
    hhat = 0.5 * (hhat + np.conj(hhat[::-1]))
    h0 = hhat[K].real
    hhat = hhat / h0
    coeffs = CoeffSeq(hhat, real_valued=True)

    width, inset = win.window.width, win.window.inset
    supp = IntervalUnion([(j * width + inset, (j + 1) * width - inset) for j in range(M)])
    hull = IntervalUnion.interval(inset, Fraction(1, 2) - inset)

    match = float(np.abs(coeffs.truncate(n).coeffs - P.coeffs).max())
    arc_cert = certified_sup(coeffs.truncate(n), HALF, M=1 << 14, name="partial_sum_on_half")
    # support: the untruncated h vanishes off supp, so the truncation is bounded
    # there by sum|a_j| times the window tail
    trunc = float(np.abs(a).sum()) * win.tail_bound / abs(h0)
    Mgrid = 1 << max(12, int(np.ceil(np.log2(8 * K + 8))))
    vals = partial_sum_eval(coeffs, K, Mgrid)
    outside = ~grid_mask(supp, Mgrid)
    off_max = float(np.abs(vals.values[outside]).max()) if outside.any() else 0.0
    certs = {
        "hhat0": float(coeffs[0].real),
        "condition": cond,
        "residual": res,
        "precision_bits": bits,
        "weights_imag_defect": imag_defect,
        "partial_sum_match": match,
        "partial_sum_bound": arc_cert.bound,
        "partial_sum_limit": eps,
        "partial_sum_slack": eps - arc_cert.bound,
        "support_truncation_bound": trunc,
        "support_grid_max": off_max,
        "support_ok": bool(off_max <= trunc + vals.error_bound),
        "window_floor": win.floor,
        "l1_weights": float(np.abs(a).sum()),
    }
    if not arc_cert.bound < eps:
        raise NumericError("partial-sum certificate for h failed", **certs)
    return HFunction(coeffs, n, supp, hull, arc, a, certs)
