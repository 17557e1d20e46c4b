"""Trigonometric polynomials with constant term 1 that are small on [0, 1/2].

Two problems live here:

* ``build_arc_poly``: the real two-sided problem, min over ``P`` with
  ``P_hat(0) = 1`` of ``sup_{[0,1/2]} |P|``, solved as a linear program with
  exchange refinement. This is the polynomial used by the construction.
* ``capacity_probe``: the one-sided monic problem, min over monic ``Q`` of
  degree ``n`` of ``sup |Q(e(x))|`` on the half circle. Its n-th root tends to
  the logarithmic capacity ``sin(pi/4) = 1/sqrt 2`` of the arc.
"""

from dataclasses import dataclass, field
from math import ceil, comb, factorial, log

import numpy as np
from scipy.optimize import linprog

from ..errors import NumericError
from ..fourier_core import CoeffSeq, IntervalUnion, certified_sup

HALF = IntervalUnion.interval(0, (1, 2))

#: capacity of the closed half circle {e(x) : 0 <= x <= 1/2}
ARC_CAPACITY = float(np.sin(np.pi / 4))


@dataclass(frozen=True)
class ArcPoly:
    """``P`` with ``P_hat(0) = 1`` and certified ``sup_{[0,1/2]} |P| <= eps_arc``."""

    coeffs: CoeffSeq
    n: int
    eps_arc: float
    lower_bound: float
    method: str
    certificate: dict = field(default_factory=dict, compare=False)

    @property
    def growth_constant(self):
        """``C`` in ``n <= C log(1/eps)``."""
        if self.eps_arc >= 1.0:
            return 0.0
        return self.n / log(1.0 / self.eps_arc)


def _trig_matrix(x, n):
    k = np.arange(1, n + 1)
    ang = 2 * np.pi * np.multiply.outer(x, k)
    return np.hstack([np.cos(ang), np.sin(ang)])


def _lp_minimax(x, n):
    """Discrete minimax over nodes ``x``; returns ``(t, alpha, beta)``."""
    A = _trig_matrix(x, n)
    m = x.size
    ones = np.ones((m, 1))
    # P = 1 + A z; constraints  A z - t <= -1  and  -A z - t <= 1
    A_ub = np.vstack([np.hstack([A, -ones]), np.hstack([-A, -ones])])
    b_ub = np.concatenate([-np.ones(m), np.ones(m)])
    cost = np.zeros(2 * n + 1)
    cost[-1] = 1.0
    bounds = [(None, None)] * (2 * n) + [(0, None)]
    res = linprog(
        cost, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs",
        options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
    )
    if res.status != 0:
        raise NumericError("linear program failed", status=int(res.status), solver=res.message)
    z = res.x
    return float(z[-1]), z[:n], z[n : 2 * n]


def _coeffs_from_trig(alpha, beta):
    n = alpha.size
    c = np.zeros(2 * n + 1, dtype=complex)
    c[n] = 1.0
    # alpha cos + beta sin = sum (alpha - i beta)/2 e(kx) + (alpha + i beta)/2 e(-kx)
    c[n + 1 :] = 0.5 * (alpha - 1j * beta)
    c[: n][::-1] = 0.5 * (alpha + 1j * beta)
    return CoeffSeq(c, real_valued=True)


def minimax_arc(n, max_rounds=30, rtol=1e-7):
    """Two-sided minimax polynomial of degree ``n`` on [0, 1/2] by LP exchange.

    Returns ``(coeffs, lower, upper_grid)``: ``lower`` is the discrete LP value
    (a lower bound for the continuous minimax), ``upper_grid`` the dense-grid
    maximum of the final polynomial.
    """
    if n == 0:
        return CoeffSeq.delta(0), 1.0, 1.0
    nodes = 0.25 - 0.25 * np.cos(np.pi * np.arange(16 * n + 17) / (16 * n + 16))
    dense = np.linspace(0.0, 0.5, 512 * n + 1)
    for _ in range(max_rounds):
        t, a, b = _lp_minimax(nodes, n)
        c = _coeffs_from_trig(a, b)
        vals = np.abs(np.real(c(dense)))
        top = float(vals.max())
        if top <= t * (1 + rtol) + 1e-15:
            return c, t, top
        # add local maxima of the error that exceed the current level
        interior = (vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:])
        peaks = dense[1:-1][interior & (vals[1:-1] > t)]
        nodes = np.unique(np.concatenate([nodes, peaks, dense[[0, -1]]]))
    return c, t, top


def equilibrium_poly(n):
    """Fallback: ``Re(e(-n x) Q(e(x)))`` with ``Q`` vanishing at arc-Chebyshev nodes.

    The nodes are images of Chebyshev points under the map sending [-1, 1] to
    the arc; the result has constant term 1 after normalisation.
    """
    theta = np.pi / 2 + (np.pi / 2) * np.cos(np.pi * (np.arange(n) + 0.5) / n)
    roots = np.exp(1j * theta)
    q = np.poly(roots)[::-1]  # ascending powers, monic
    # e(-n x) Q(e(x)) has coefficients q_k at index k - n; constant term is q_n = 1
    real_part = np.zeros(2 * n + 1, dtype=complex)
    one_sided = np.zeros(2 * n + 1, dtype=complex)
    one_sided[:n + 1] = q  # indices -n..0
    real_part = 0.5 * (one_sided + np.conj(one_sided[::-1]))
    real_part /= real_part[n].real
    return CoeffSeq(real_part, real_valued=True)


def build_arc_poly(eps, n_max=14):
    """Lowest-degree ``P`` with ``P_hat(0) = 1`` and certified sup on [0, 1/2] below ``eps``.

    The degree grows like ``log(1/eps)``; ``n_max`` guards against requests
    beyond what double-precision linear programming can resolve.
    """
    eps = float(eps)
    if not 0 < eps:
        raise ValueError("eps must be positive")
    if eps > 1.0:
        c = CoeffSeq.delta(0)
        cert = certified_sup(c, HALF, name="arc_sup")
        return ArcPoly(c, 0, cert.bound, 1.0, "constant", cert.to_dict())
    for n in range(1, n_max + 1):
        try:
            c, lower, top = minimax_arc(n)
            method = "lp_exchange"
        except NumericError:
            c, lower, top, method = equilibrium_poly(n), 0.0, None, "equilibrium"
        if lower >= eps:
            continue
        cert = certified_sup(c, HALF, M=_cert_grid(n), name="arc_sup")
        if cert.bound < eps:
            return ArcPoly(c, n, cert.bound, lower, method, cert.to_dict())
    raise NumericError("no polynomial found within the degree limit", eps=eps, n_max=n_max)


def _cert_grid(n):
    # fine grid so the curvature correction is far below the polynomial's size
    return 1 << max(12, int(ceil(np.log2(4096 * (n + 1)))))


# -- capacity probe -------------------------------------------------------
class ArnoldiBasis:
    """Orthonormal polynomial basis on sample points of the arc (Vandermonde with Arnoldi)."""

    def __init__(self, z, n):
        m = z.size
        Q = np.zeros((m, n + 1), dtype=complex)
        H = np.zeros((n + 1, n), dtype=complex)
        Q[:, 0] = 1.0
        for k in range(n):
            v = z * Q[:, k]
            for j in range(k + 1):
                H[j, k] = np.vdot(Q[:, j], v) / m
                v = v - H[j, k] * Q[:, j]
            H[k + 1, k] = np.linalg.norm(v) / np.sqrt(m)
            Q[:, k + 1] = v / H[k + 1, k]
        self.Q, self.H, self.n = Q, H, n
        # z^n = (prod of subdiagonal) q_n + lower-order terms
        self.lead = np.prod(np.diag(H[1:, :]))

    def evaluate(self, z):
        n, H = self.n, self.H
        W = np.zeros((z.size, n + 1), dtype=complex)
        W[:, 0] = 1.0
        for k in range(n):
            v = z * W[:, k]
            for j in range(k + 1):
                v = v - H[j, k] * W[:, j]
            W[:, k + 1] = v / H[k + 1, k]
        return W

    def x_derivatives(self, x, orders):
        """Basis functions ``w_k(e(x))`` and their first ``orders`` derivatives in ``x``."""
        n, H = self.n, self.H
        z = np.exp(2j * np.pi * x)
        W = np.zeros((orders + 1, x.size, n + 1), dtype=complex)
        W[0, :, 0] = 1.0
        for k in range(n):
            for d in range(orders + 1):
                # d-th derivative of z w_k, using z^(i) = (2 pi i)^i z
                v = sum(comb(d, i) * (2j * np.pi) ** i * z * W[d - i, :, k] for i in range(d + 1))
                for j in range(k + 1):
                    v = v - H[j, k] * W[d, :, j]
                W[d, :, k + 1] = v / H[k + 1, k]
        return W


@dataclass(frozen=True)
class CapacityBracket:
    n: int
    lower: float
    upper: float

    @property
    def root_bounds(self):
        return (self.lower ** (1.0 / self.n), self.upper ** (1.0 / self.n))


def capacity_probe(n, samples=None, iterations=4000):
    """Bracket ``min_Q sup_{[0,1/2]} |Q(e(x))|`` over monic ``Q`` of degree ``n``.

    Lawson's iteratively reweighted least squares on a fine discretisation.
    Every weighted least-squares value is a lower bound for the discrete
    minimax; the dense-grid maximum of the final ``Q`` plus a derivative
    correction is an upper bound for the continuous one.
    """
    m = samples or 40 * n + 400
    x = 0.25 - 0.25 * np.cos(np.pi * np.arange(m) / (m - 1))
    z = np.exp(2j * np.pi * x)
    basis = ArnoldiBasis(z, n)
    Q = basis.Q
    target = basis.lead * Q[:, n]
    A = Q[:, :n]
    w = np.full(m, 1.0 / m)
    best_lower = 0.0
    for _ in range(iterations):
        sw = np.sqrt(w)
        coef, *_ = np.linalg.lstsq(A * sw[:, None], -target * sw, rcond=None)
        resid = target + A @ coef
        r = np.abs(resid)
        best_lower = max(best_lower, float(np.sqrt(np.sum(w * r**2))))
        if r.max() <= best_lower * (1 + 1e-6):
            break
        w = w * r
        w /= w.sum()
    # Taylor bound on the arc, T(x) = Q(e(x)):
    # |T(x)| <= sum_{d<4} (h/2)^d/d! |T^(d)(x_j)| + (h/2)^4/24 (2 pi n)^4 ||Q||_circle
    G = 1 << int(np.ceil(np.log2(64 * n + 64)))
    zc = np.exp(2j * np.pi * np.arange(G) / G)
    Wc = basis.evaluate(zc)
    circ = float(np.abs(basis.lead * Wc[:, n] + Wc[:, :n] @ coef).max())
    circle_bound = circ / (1 - np.pi * n / G)
    M = 1 << 17
    half = 0.5 / M
    local = np.zeros(M // 2 + 1)
    xd = np.arange(M // 2 + 1) / M
    for chunk in np.array_split(np.arange(xd.size), 16):
        W = basis.x_derivatives(xd[chunk], 3)
        for d in range(4):
            T = basis.lead * W[d, :, n] + W[d, :, :n] @ coef
            local[chunk] += half**d / factorial(d) * np.abs(T)
    upper = float(local.max()) + half**4 / 24 * (2 * np.pi * n) ** 4 * circle_bound
    return CapacityBracket(n, best_lower, upper)
