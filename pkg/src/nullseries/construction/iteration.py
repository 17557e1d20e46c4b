"""Coefficient reduction and the stage iteration ``f_1 = 1, f_{k+1} = f_k h_k(r_k x)``."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import CertificateError, ResourceError
from ..fourier_core import DEFAULT_DEGREE_CAP, CoeffSeq, IntervalUnion, next_pow2, partial_sum_eval
from ..fourier_core import grid_mask
from .f_builder import OBSERVATION_GRID_CAP, build_f
from .stage import StageFunction

#: ``build_f`` requires a tolerance below 1/2
_MAX_INNER_EPS = 0.45

#: every ``build_f`` output has ``m >= 2`` and top spacing ``>= 2 r >= 32``, so degree ``>= 64``
MIN_INNER_DEGREE = 64


def initial_stage():
    """``f_1 = 1`` on [0, 1] with ``n_1 = 2``."""
    return StageFunction(CoeffSeq.delta(0), 2, IntervalUnion.full(), {"kind": "initial"}, {})


def dilated_product(f, h, r):
    """Coefficients of ``f(x) h(r x)`` for ``r > 2 deg f``: blocks never overlap.

    Entry ``r q + p`` is ``f_hat(p) h_hat(q)``, computed as a plain outer product.
    """
    d, D = f.degree, h.degree
    if r <= 2 * d:
        raise ValueError("dilation must exceed twice the degree of f")
    block = np.zeros((2 * D + 1, r), dtype=complex)
    half = r // 2
    block[:, half - d : half + d + 1] = np.outer(h.coeffs, f.coeffs)
    flat = block.ravel()
    # flat index (q + D) r + p + half corresponds to frequency r q + p
    start = half - d
    deg = D * r + d
    return CoeffSeq(flat[start : start + 2 * deg + 1], f.real_valued and h.real_valued)


def choose_dilation(deg_f, m, N_min):
    """Smallest even ``r`` with ``r/2 > deg f`` and ``r (m + 1/2) > N_min``."""
    r = 2 * deg_f + 2
    while 2 * r * m + r <= 2 * N_min:
        r += 2
    return r


def reduce_coeffs(f, eps, N_min, cap=DEFAULT_DEGREE_CAP, observe=True, sup_f=None, ctx=None):
    """``g = f h(r x)`` with ``supp g`` inside ``supp f``, ``|g_hat - f_hat| < eps`` and
    ``|S_n(g)| < eps`` on ``supp g``.

    ``h`` comes from :func:`build_f` at tolerance ``eps / (2 ||f_hat||_1)``.
    ``sup_f`` may supply a certified bound for ``|f|`` on its support; the
    coefficient l1 norm is used otherwise.
    """
    eps = float(eps)
    if not eps > 0 or N_min < 1:
        raise ValueError("need eps > 0 and N_min >= 1")
    l1 = f.l1()
    eps_h = min(eps / (2 * l1), _MAX_INNER_EPS)
    d = f.degree
    # r/2 > deg f is forced, so even the cheapest inner function may not fit
    least = (2 * d + 2) * MIN_INNER_DEGREE + d
    if 2 * least + 1 > cap:
        raise ResourceError(
            "forced dilation exceeds the degree cap for every tolerance",
            degree_f=d, least_degree=least, cap=cap, smallest_feasible_eps=None,
        )
    h = build_f(eps_h, cap=cap, observe=False, ctx=ctx)
    m = h.n
    r = choose_dilation(d, m, N_min)
    deg = r * h.degree + d
    if 2 * deg + 1 > cap:
        raise ResourceError("reduced function exceeds the degree cap", degree=deg, cap=cap)
    g = dilated_product(f.coeffs, h.coeffs, r)
    n = r * m + r // 2
    supp = f.supp.intersect(h.supp.periodic_preimage(r))

    diff = g.coeffs.copy()
    diff[deg - d : deg + d + 1] -= f.coeffs.coeffs
    drift = float(np.abs(diff).max())
    bound_f = l1 if sup_f is None else min(l1, sup_f)
    partial = bound_f * h.certificates["partial_sum_bound"]
    nested = f.supp.contains(supp)
    shrinks = supp.measure() < f.supp.measure()
    certs = {
        "drift_max": drift,
        "drift_limit": eps,
        "drift_slack": eps - drift,
        "partial_sum_bound": partial,
        "partial_sum_limit": eps,
        "partial_sum_slack": eps - partial,
        "sup_f_bound": bound_f,
        "inner_eps": eps_h,
        "support_nested": nested,
        "support_shrinks": shrinks,
        "ghat0": float(g[0].real),
        "order_exceeds_N_min": n > N_min,
    }
    if observe:
        certs["grid_max_on_support"] = observed_sup(g, n, supp)
    if not (drift < eps and partial < eps and nested and n > N_min):
        raise CertificateError("reduction certificates failed", certs)
    params = {"eps": eps, "r": r, "m": m, "n": n, "N_min": int(N_min), "inner": h.params}
    blocks = {"f": f.coeffs, "h": h.coeffs, "h_stage": h}
    return StageFunction(g, n, supp, params, certs, blocks)


def observation_grid(c, n, supp, grid_cap=OBSERVATION_GRID_CAP):
    """Grid size giving several points per support interval, within the cap."""
    need = next_pow2(2 * min(n, c.degree) + 1)
    M = max(2 * need, 1 << 12)
    if supp:
        lo, hi = supp.float_bounds()
        shortest = float((hi - lo).min())
        if shortest > 0:
            M = max(M, next_pow2(int(8 / shortest)))
    return min(M, max(grid_cap, need))


def observed_sup(c, n, supp, M=None, grid_cap=OBSERVATION_GRID_CAP):
    """Grid maximum of ``|S_n(c)|`` over grid points inside ``supp`` (observation only)."""
    M = M or observation_grid(c, n, supp, grid_cap)
    vals = partial_sum_eval(c, n, M)
    mask = grid_mask(supp, M, inner=True)
    if not mask.any():
        return 0.0
    return float(np.abs(vals.values[mask]).max())


@dataclass(eq=False)
class ConstructionState:
    """Stages ``f_1 .. f_K`` with orders, tolerances and measured partial-sum bounds."""

    stages: list
    eps: list = field(default_factory=list)
    drift: list = field(default_factory=list)
    canonical: bool = True
    bound_table: dict = field(default_factory=dict)

    @property
    def k(self):
        return len(self.stages)

    @property
    def orders(self):
        return [s.n for s in self.stages]

    @property
    def supports(self):
        return [s.supp for s in self.stages]

    @property
    def current(self):
        return self.stages[-1]


def stage_tolerance(k, n_k):
    """``2^-k / n_k``."""
    return 2.0**-k / n_k


def measure_bounds(state, grid_cap=OBSERVATION_GRID_CAP):
    """Table ``(j, k) -> max over grid in supp f_j of |S_{n_k}(f_j)|`` for ``k <= j``.

    Also checks the telescoped bound ``value(j, k) <= value(k, k) + 3 sum_{i=k}^{j-1} 2^-i``
    and the target ``8 2^-k``.
    """
    table = {}
    for j, fj in enumerate(state.stages, start=1):
        for k in range(1, j + 1):
            table[(j, k)] = observed_sup(fj.coeffs, state.stages[k - 1].n, fj.supp, grid_cap=grid_cap)
    checks = {}
    for (j, k), val in table.items():
        allowance = table[(k, k)] + 3 * sum(2.0**-i for i in range(k, j))
        checks[(j, k)] = {
            "value": val,
            "telescoped_limit": allowance,
            "telescoped_ok": val <= allowance,
            "target": 8 * 2.0**-k,
            "target_ok": val <= 8 * 2.0**-k,
        }
    state.bound_table = checks
    return checks


def iterate_construction(K, eps_override=None, cap=DEFAULT_DEGREE_CAP, measure=True, ctx=None):
    """Run ``K`` stages. ``eps_override`` (a list) replaces the canonical tolerances.

    A stage that cannot be built within ``cap`` raises :class:`ResourceError`
    carrying the completed state in ``err.state``.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    state = ConstructionState([initial_stage()], canonical=eps_override is None)
    for k in range(1, K):
        f = state.current
        eps = stage_tolerance(k, f.n) if eps_override is None else float(eps_override[k - 1])
        try:
            g = reduce_coeffs(f, eps, f.n + 1, cap=cap, observe=False, ctx=ctx)
        except ResourceError as err:
            err.diagnostics.update(stage=k + 1, completed=state.k, eps=eps)
            if measure:
                measure_bounds(state)
            err.state = state
            raise
        state.stages.append(g)
        state.eps.append(eps)
        state.drift.append(g.certificates["drift_max"])
    if measure:
        measure_bounds(state)
    return state
