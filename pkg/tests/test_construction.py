"""Window function h, stage function f, coefficient reduction and the stage iteration."""

from fractions import Fraction

import numpy as np
import pytest

from nullseries.construction import (
    block_injectivity,
    block_injectivity_exhaustive,
    build_f,
    build_h,
    check_sandwich,
    choose_dilation,
    decompose_index,
    dilated_product,
    initial_stage,
    iterate_construction,
    reduce_coeffs,
    sandwich_bounds,
    spacings,
    stage_tolerance,
)
from nullseries.construction.h_builder import vandermonde_nodes
from nullseries.errors import ResourceError
from nullseries.fourier_core import (
    CoeffSeq,
    IntervalUnion,
    certified_sup,
    coeff_convolve,
    dilate,
    nusr_bytes,
)

from conftest import random_coeffs

HALF = IntervalUnion.interval(0, Fraction(1, 2))


def direct_sum(c, x):
    k = c.indices
    return np.exp(2j * np.pi * np.multiply.outer(np.asarray(x, float), k)) @ c.coeffs


# -- build_h -------------------------------------------------------------------------
def test_h_single_window():
    h = build_h(1.5)
    assert h.m == 0 and h.weights.size == 1
    assert h.coeffs[0] == 1.0
    assert HALF.contains(h.supp)


def test_nodes_distinct():
    nodes = vandermonde_nodes(3)
    gaps = np.abs(nodes[:, None] - nodes[None, :]) + np.eye(3)
    assert gaps.min() > 0.5


@pytest.fixture(scope="module")
def h_quarter():
    return build_h(0.25)


def test_h_quarter_certificates(h_quarter):
    h = h_quarter
    c = h.certificates
    assert h.coeffs[0] == 1.0
    assert c["residual"] <= 1e-9
    assert c["partial_sum_bound"] <= 0.25
    assert HALF.contains(h.supp) and c["support_ok"]


def test_h_partial_sum_is_arc_polynomial(h_quarter):
    h = h_quarter
    np.testing.assert_allclose(h.partial.coeffs, h.arc.coeffs.coeffs, atol=1e-12)
    x = np.linspace(0, 0.5, 100_001)
    assert np.abs(direct_sum(h.partial, x)).max() <= h.certificates["partial_sum_bound"]


def test_h_residual_recomputed(h_quarter):
    """Oracle: re-form the Vandermonde system from the stored weights and window."""
    from nullseries.smooth_builders import build_window

    h = h_quarter
    n, M = h.m, 2 * h.m + 1
    q = build_window(M, n, rel_tail=1e-6).coeffs
    k = np.arange(-n, n + 1)
    V = vandermonde_nodes(M)[None, :] ** k[:, None]
    rhs = h.arc.coeffs.coeffs / np.array([q[int(j)] for j in k])
    lhs = V @ h.weights
    assert np.abs(lhs * h.coeffs[0].real - rhs).max() / np.abs(rhs).max() <= 1e-9 * 10


def test_h_vanishes_off_half(h_quarter):
    h = h_quarter
    x = np.linspace(0.5, 1.0, 4001)[1:-1]
    assert np.abs(direct_sum(h.coeffs, x)).max() <= h.certificates["support_truncation_bound"] + 1e-12


# -- block layout -----------------------------------------------------------------------
def test_exhaustive_injectivity_small():
    assert block_injectivity_exhaustive(3, 8, 2, mode="cubic")
    assert block_injectivity_exhaustive(3, 8, 2, mode="compact")


def test_injectivity_detects_collisions():
    # spacings 10 and 11 with q up to 3 collide: 3*10 + 3 = 33 = 3*11
    assert not block_injectivity([10, 11], 3, 3)[0]


def test_sandwich_small_instance():
    N = spacings(3, 8, 2, mode="cubic")
    assert N == [512, 520, 528]
    n = 2 * (8**3 + 8**2)
    assert n == 1152
    assert sandwich_bounds(N, 2, 8) == (1060, 1532)
    ok, lower, upper = check_sandwich(n, N, 2, 8)
    assert ok and lower < n < upper


# -- build_f ------------------------------------------------------------------------------
@pytest.fixture(scope="module")
def f_half():
    return build_f(0.5)


def test_f_half_certificates(f_half):
    f = f_half
    c = f.certificates
    assert f.coeffs[0] == 1.0
    nonconst = np.abs(np.delete(f.coeffs.coeffs, f.degree))
    assert nonconst.max() < 0.5 and c["coef_max"] == nonconst.max()
    assert c["partial_sum_bound"] < 0.5
    assert c["grid_max_on_support"] <= c["partial_sum_bound"]
    lower, n, upper = c["sandwich"]
    assert lower < n < upper and n == f.n


def test_f_partial_sum_independent_certificate(f_half):
    """Certified sup of ``S_n(f)`` over the support by grid plus derivative correction."""
    f = f_half
    assert f.n >= f.degree  # S_n(f) is f itself here
    cert = certified_sup(f.coeffs, f.supp, M=1 << 20)
    assert cert.bound < 0.5
    assert cert.grid_max <= cert.bound


def test_f_blocks_disjoint_exactly(f_half):
    p = f_half.params
    B, N, m = p["half_width"], p["spacings"], p["m"]
    for l in range(-f_half.degree, f_half.degree + 1):
        hits = decompose_index(l, N, m, B)
        if abs(l) > B:
            assert len(hits) <= 1
        else:
            assert hits == []


def test_f_low_band_formula(f_half):
    f = f_half
    a, B = f.params["a"], f.params["half_width"]
    V = f.blocks["V"]
    F0 = f.certificates["normaliser"]
    for l in range(-B, B + 1):
        expected = a * V[l] if l % a == 0 else 0.0
        assert abs(f.coeffs[l] * F0 - expected) <= 1e-15 * max(1.0, a)


def test_f_assembly_against_direct_evaluation(f_half):
    """``F(x) = sum_j V(x - j/a) P(x N_j)`` evaluated term by term at scattered points."""
    f = f_half
    a, N = f.params["a"], f.params["spacings"]
    V, P = f.blocks["V"], f.blocks["P"]
    x = np.random.default_rng(7).random(64)
    F = sum(direct_sum(V, x - j / a) * direct_sum(P, (x * Nj) % 1) for j, Nj in enumerate(N))
    assert np.abs(F / f.certificates["normaliser"] - direct_sum(f.coeffs, x)).max() <= 1e-10


def test_f_support_structure(f_half):
    f = f_half
    p = f.params
    hull = IntervalUnion.interval(Fraction(*p["hull"][0]), Fraction(*p["hull"][1]))
    t0 = Fraction(*p["plateau_t0"])
    a, N = p["a"], p["spacings"]
    expected = IntervalUnion([])
    for j in range(a):
        window = IntervalUnion.interval((j + t0) / a, (j + 1 - t0) / a)
        expected = expected.union(window.intersect(hull.periodic_preimage(N[j])))
    assert f.supp == expected
    assert f.supp.measure() < 1


@pytest.mark.parametrize("eps", [0.45, 0.3, 0.2])
def test_f_coefficients_and_normalisation(eps):
    f = build_f(eps, observe=False)
    assert f.coeffs[0] == 1.0
    assert np.abs(np.delete(f.coeffs.coeffs, f.degree)).max() < eps
    assert f.certificates["partial_sum_bound"] < eps


def test_f_rebuild_is_byte_identical(f_half):
    again = build_f(0.5)
    assert nusr_bytes(again.coeffs) == nusr_bytes(f_half.coeffs)
    assert again.supp == f_half.supp


def test_f_eps_range():
    for eps in (0, 0.6, -1):
        with pytest.raises(ValueError):
            build_f(eps)


def test_f_cap_reports_feasible_tolerance():
    with pytest.raises(ResourceError) as info:
        build_f(0.2, cap=20_000)
    diag = info.value.diagnostics
    assert diag["cap"] == 20_000 and "smallest_feasible_eps" in diag


# -- reduction -----------------------------------------------------------------------------
def test_dilated_product_matches_convolution(rng):
    f = random_coeffs(rng, 3, real=True)
    h = random_coeffs(rng, 5, real=True)
    r = choose_dilation(3, 5, 10)
    g = dilated_product(f, h, r)
    ref = coeff_convolve(f, dilate(h, r))
    np.testing.assert_allclose(g.coeffs, ref.coeffs, atol=1e-13)


def test_drift_identity_sparse(rng):
    """``g_hat(k) - f_hat(k) = sum_l (h_hat - delta)(l) f_hat(k - l r)`` by explicit sparse sums."""
    f = random_coeffs(rng, 4, real=True)
    h = random_coeffs(rng, 6, real=True)
    r = 10
    g = dilated_product(f, h, r)
    fd = {l: f[l] for l in range(-4, 5)}
    hm = {l: h[l] - (1.0 if l == 0 else 0.0) for l in range(-6, 7)}
    for k in range(-g.degree, g.degree + 1):
        rhs = sum(v * fd.get(k - l * r, 0.0) for l, v in hm.items())
        assert abs((g[k] - fd.get(k, 0.0)) - rhs) <= 1e-13


def test_dilation_choice():
    r = choose_dilation(5, 3, 100)
    assert r % 2 == 0 and r // 2 > 5 and r * 3 + r // 2 > 100
    assert choose_dilation(5, 3, 100) == 30


@pytest.fixture(scope="module")
def reduced_constant():
    return reduce_coeffs(initial_stage(), 0.5, 3)


def test_reduce_constant_function(reduced_constant):
    g = reduced_constant
    h = g.blocks["h_stage"]
    r = g.params["r"]
    np.testing.assert_array_equal(g.coeffs.coeffs, dilate(h.coeffs, r).coeffs)
    assert g.supp == h.supp.periodic_preimage(r)
    delta = np.zeros_like(g.coeffs.coeffs)
    delta[g.degree] = 1
    assert np.abs(g.coeffs.coeffs - delta).max() < 0.5


def test_reduce_order(reduced_constant):
    g = reduced_constant
    r, m = g.params["r"], g.params["m"]
    assert g.n == r * m + r // 2 and g.n > 3 and g.n % r != 0
    c = g.certificates
    assert c["drift_max"] < 0.5 and c["partial_sum_bound"] < 0.5 and c["support_nested"]


# -- iteration ----------------------------------------------------------------------------
def test_single_stage():
    st = iterate_construction(1)
    f1 = st.current
    assert st.k == 1 and st.orders == [2]
    assert f1.coeffs.degree == 0 and f1.coeffs[0] == 1
    assert st.bound_table[(1, 1)]["value"] == pytest.approx(1.0)


def test_two_stages(two_stage_state):
    st = two_stage_state
    f1, f2 = st.stages
    assert st.orders[0] == 2 and st.orders[1] > st.orders[0]
    # frozen layout of the canonical run
    assert st.orders[1] == 1955701 and f2.degree == 1953648 and len(f2.supp) == 457662
    eps = stage_tolerance(1, 2)
    assert st.eps == [eps] and eps == 0.25
    assert st.drift[0] < eps
    row = st.bound_table[(2, 2)]
    assert row["value"] <= 8 * 2.0**-2 and row["value"] <= eps
    assert all(v["telescoped_ok"] and v["target_ok"] for v in st.bound_table.values())


def test_support_chain_nested(two_stage_state):
    a, b = two_stage_state.supports
    assert a.contains(b) and b.measure() < a.measure()


def test_drift_direct_comparison(two_stage_state):
    f1, f2 = two_stage_state.stages
    diff = f2.coeffs.coeffs.copy()
    diff[f2.degree] -= 1.0
    assert np.abs(diff).max() < stage_tolerance(1, f1.n)


def test_third_stage_exceeds_cap(stage2):
    eps = stage_tolerance(2, stage2.n)
    with pytest.raises(ResourceError) as info:
        reduce_coeffs(stage2, eps, stage2.n + 1)
    diag = info.value.diagnostics
    assert diag["least_degree"] > diag["cap"] == 2**26
