"""Functions with tiny nonconstant coefficients and small partial sums on their support.

``F(x) = sum_{j<a} V(x - j/a) H(x N_j)``: ``V`` is a truncated plateau squeezed
to ``[0, 1/a]``, ``H`` the polynomial part of ``h`` and ``N_j`` strictly
increasing spacings. Each nonzero-frequency block of ``H`` lands at a distinct
place, so every nonconstant coefficient is either ``a V_hat(l)`` (low band,
small because the plateau is almost 1) or one product ``V_hat(p) H_hat(q)``
(small because ``a`` is large). On the support, ``x N_d`` falls where ``h``
lives, so the ``d``-th term is small, and the others are killed by the
near-disjointness of the ``V`` translates.
"""

from fractions import Fraction

import numpy as np

from ..errors import NumericError, ResourceError
from ..fourier_core import (
    DEFAULT_DEGREE_CAP,
    CoeffSeq,
    IntervalUnion,
    certified_sup,
    certified_sups,
    grid_mask,
    next_pow2,
    partial_sum_eval,
)
from ..smooth_builders import plateau_profile
from .h_builder import build_h
from .stage import (
    StageFunction,
    block_injectivity,
    check_sandwich,
    choose_order,
    spacings,
)

#: largest grid used for the observational sup of the assembled polynomial
OBSERVATION_GRID_CAP = 1 << 23


def squeezed_plateau_coeffs(plateau, a, B):
    """``v_hat(l) = U(l/a)/a`` for ``|l| <= B``, where ``v(x) = u(a x)`` on ``[0, 1/a]``."""
    l = np.arange(-B, B + 1)
    vals = plateau.fourier(l / a) / a
    vals = 0.5 * (vals + np.conj(vals[::-1]))
    return CoeffSeq(vals, real_valued=True)


def piece_regions(plateau, a):
    """Supports of the ``a`` translates ``v(x - e/a)``, ``e = 0..a-1``."""
    t0 = plateau.t0
    return [IntervalUnion.interval((e + t0) / a, (e + 1 - t0) / a) for e in range(a)]


def _trial(r, a, P, eps_P, P_inf, plateau, eps):
    """Certificates for one candidate ``r`` (block half-width ``r/2 - 1``)."""
    B = r // 2 - 1
    V = squeezed_plateau_coeffs(plateau, a, B)
    F0 = a * V[0].real
    maxPq = float(np.abs(np.delete(P.coeffs, P.degree)).max()) if P.degree else 0.0
    low = np.array([a * V[l] for l in range(a, B + 1, a)])
    low_max = float(np.abs(low).max()) if low.size else 0.0
    high_max = float(np.abs(V.coeffs).max()) * maxPq
    coef_bound = max(low_max, high_max) / F0
    sups = certified_sups(V, piece_regions(plateau, a), name="V_on_piece")
    s = [c.bound for c in sups]
    partial_bound = (eps_P * s[0] + P_inf * sum(s[1:])) / F0
    tail_v = plateau.tail_bound(B, dilation=a)
    return {
        "r": r,
        "half_width": B,
        "F0": F0,
        "coef_bound": coef_bound,
        "partial_bound": partial_bound,
        "piece_sups": s,
        "v_tail_l1": tail_v,
        "truncation_l1_estimate": a * tail_v * float(np.abs(P.coeffs).sum()),
        "ok": coef_bound < eps and partial_bound < eps,
    }, V


def _search_r(r0, a, m, P, eps_P, P_inf, plateau, eps, cap, mode):
    """Doubling then bisection over even ``r`` for the smallest passing candidate."""
    def degree_for(r):
        N = spacings(a, r, m, mode)
        return m * N[-1] + r // 2 - 1

    r = r0
    while True:
        if 2 * degree_for(r) + 1 > cap:
            # the largest admissible even r shows what tolerance the cap allows
            r_cap = max(r0, r // 2) - 2
            while 2 * degree_for(r_cap + 2) + 1 <= cap:
                r_cap += 2
            feasible = None
            if r_cap >= r0:
                at_cap, _ = _trial(r_cap, a, P, eps_P, P_inf, plateau, eps)
                feasible = float(max(at_cap["coef_bound"], at_cap["partial_bound"]))
            raise ResourceError(
                "spacing search exceeds the degree cap",
                eps=eps, r=r, degree=degree_for(r), cap=cap, r_at_cap=r_cap,
                smallest_feasible_eps=feasible,
            )
        info, V = _trial(r, a, P, eps_P, P_inf, plateau, eps)
        if info["ok"]:
            break
        r *= 2
    lo, hi = r // 2, r  # lo fails (or is below r0), hi passes
    best = (info, V)
    while hi - lo > 2:
        mid = (lo + hi) // 2
        mid += mid % 2
        if mid <= r0 - 2 or mid >= hi:
            break
        info_m, V_m = _trial(mid, a, P, eps_P, P_inf, plateau, eps)
        if info_m["ok"]:
            hi, best = mid, (info_m, V_m)
        else:
            lo = mid
    return best


def assemble(V, P, N, a, cap=DEFAULT_DEGREE_CAP):
    """Coefficients of ``sum_j V(x - j/a) P(x N_j)``, assuming disjoint blocks."""
    B, m = V.degree, P.degree
    deg = m * N[-1] + B
    if 2 * deg + 1 > cap:
        raise ResourceError("assembled degree exceeds the cap", degree=deg, cap=cap)
    out = np.zeros(2 * deg + 1, dtype=complex)
    p = np.arange(-B, B + 1)
    # q = 0: sum_j e(-p j / a) = a when a | p, else 0
    low = np.where(p % a == 0, a * V.coeffs, 0.0) * P[0]
    out[deg - B : deg + B + 1] += low
    for j, Nj in enumerate(N):
        shifted = V.coeffs * np.exp(-2j * np.pi * p * j / a)
        for q in range(-m, m + 1):
            if q == 0:
                continue
            c = deg + q * Nj
            out[c - B : c + B + 1] += P[q] * shifted
    out = 0.5 * (out + np.conj(out[::-1]))
    return CoeffSeq(out, real_valued=True)


def stage_support(plateau, a, hull, N):
    """``union_j (j/a + supp v) intersected with {x : N_j x mod 1 in hull}``, exactly."""
    pieces = []
    for j, region in enumerate(piece_regions(plateau, a)):
        (lo, hi), = region.intervals
        pieces.extend(hull.periodic_preimage(N[j], window=(lo, hi)).intervals)
    return IntervalUnion._trusted(pieces)


def build_f(eps, cap=DEFAULT_DEGREE_CAP, spacing="compact", observe=True, ctx=None):
    """Stage function with ``|f_hat(k)| < eps`` (``k != 0``), ``f_hat(0) = 1`` and
    ``|S_n(f)| < eps`` on its support.

    ``spacing="cubic"`` uses ``N_j = r^3 + j r``; the default packs the blocks
    with the smallest base spacing that keeps them disjoint.
    """
    eps = float(eps)
    if not 0 < eps <= 0.5:
        raise ValueError("eps must lie in (0, 1/2]")
    h = build_h(eps / 4, ctx=ctx)
    P = h.partial
    m = h.m
    eps_P = h.certificates["partial_sum_bound"]
    P_inf = certified_sup(P, M=1 << 14, name="P_inf").bound
    maxPq = float(np.abs(np.delete(P.coeffs, m)).max()) if m else 0.0
    a = int(np.floor(2 * maxPq / eps)) + 1
    plateau = plateau_profile(Fraction(eps).limit_denominator(10**12) / 2)
    r0 = max(2 * a + 2, 2 * m + 4, 16)
    r0 += r0 % 2
    info, V = _search_r(r0, a, m, P, eps_P, P_inf, plateau, eps, cap, spacing)
    r, B = info["r"], info["half_width"]
    N = spacings(a, r, m, spacing)
    n = choose_order(a, r, m, N, spacing)
    sandwich_ok, lower, upper = check_sandwich(n, N, m, r)
    inj_ok, min_gap = block_injectivity(N, m, B)
    if not (sandwich_ok and inj_ok):
        raise NumericError("integer layout checks failed", sandwich=sandwich_ok, injective=inj_ok)
    F = assemble(V, P, N, a, cap)
    F0 = F[0].real
    arr = F.coeffs / F0
    arr[F.degree] = 1.0  # the single normalising division, with the rounding of 0-th entry removed
    f = CoeffSeq(arr, real_valued=True)
    supp = stage_support(plateau, a, h.hull, N)

    nonconst = np.abs(f.coeffs).copy()
    nonconst[f.degree] = 0.0
    coef_max = float(nonconst.max())
    certs = {
        "coef_max": coef_max,
        "coef_limit": eps,
        "coef_slack": eps - coef_max,
        "partial_sum_bound": info["partial_bound"],
        "partial_sum_limit": eps,
        "partial_sum_slack": eps - info["partial_bound"],
        "normaliser": F0,
        "fhat0": float(f[0].real),
        "sandwich": [lower, n, upper],
        "block_min_gap": min_gap,
        "v_tail_l1": info["v_tail_l1"],
        "truncation_l1_estimate": info["truncation_l1_estimate"],
        "piece_sups": info["piece_sups"],
        "arc_sup": eps_P,
        "P_sup": P_inf,
        "h": {k: v for k, v in h.certificates.items()},
    }
    if observe:
        certs["grid_max_on_support"] = observed_sup(f, n, supp)
    if not (coef_max < eps and info["partial_bound"] < eps):
        raise NumericError("stage certificates failed", **certs)
    params = {
        "eps": eps, "a": a, "r": r, "m": m, "half_width": B,
        "spacings": N, "spacing_mode": spacing, "n": n,
        "plateau_t0": [plateau.t0.numerator, plateau.t0.denominator],
        "plateau_edge": [plateau.w.numerator, plateau.w.denominator],
        "hull": [[x.numerator, x.denominator] for x in h.hull.intervals[0]],
    }
    return StageFunction(f, n, supp, params, certs, {"V": V, "P": P})


def observed_sup(c, n, supp, M=None):
    """Grid maximum of ``|S_n(c)|`` over grid points inside ``supp`` (no correction)."""
    need = next_pow2(2 * min(n, c.degree) + 1)
    if M is None:
        M = min(max(2 * need, 1 << 12), max(OBSERVATION_GRID_CAP, need))
    vals = partial_sum_eval(c, n, M)
    mask = grid_mask(supp, M, inner=True)
    if not mask.any():
        return 0.0
    return float(np.abs(vals.values[mask]).max())
