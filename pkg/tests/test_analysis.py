"""Dimension estimates, exponent calculators, growth reports, support proxy and localisation."""

from fractions import Fraction
from math import ceil, floor, log, sqrt

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from nullseries.analysis import (
    CHAIN_EXPONENT,
    box_dimension,
    cantor_set,
    cell_count,
    dyadic_scales,
    error_banded,
    error_direct,
    growth_check,
    localisation_error_spectrum,
    minimal_constant,
    rajchman_gap,
    s_beyond_threshold,
    support_detect,
    support_detect_report,
    tail_sums,
    thm2_rate,
    thm3_exponent,
    thm3_root,
    thm3_root_closed_form,
    triadic_scales,
)
from nullseries.fourier_core import CoeffSeq, IntervalUnion, certified_sup, coeff_convolve
from nullseries.smooth_builders import build_smooth_cutoff


# -- box dimension ----------------------------------------------------------------------
def test_interval_dimension_one():
    est = box_dimension(IntervalUnion.interval(0, Fraction(1, 2)), dyadic_scales(4, 10))
    assert est.slope == pytest.approx(1.0, abs=0.01)
    assert est.counts[0] == 8 and est.counts[-1] == 512


def test_point_dimension_zero():
    est = box_dimension(IntervalUnion.interval(0, 0), dyadic_scales(4, 10))
    assert est.slope == pytest.approx(0.0, abs=1e-12)
    assert set(est.counts) == {1}


def test_cantor_dimension():
    est = box_dimension(cantor_set(10), triadic_scales(1, 10))
    assert est.slope == pytest.approx(log(2) / log(3), abs=0.05)
    assert est.counts == tuple(2**k for k in range(1, 11))


def test_empty_set_flagged():
    est = box_dimension(IntervalUnion.empty(), dyadic_scales(1, 4))
    assert est.empty and est.slope == 0.0


def test_dimension_argument_checks():
    K = IntervalUnion.interval(0, 1)
    with pytest.raises(ValueError):
        box_dimension(K, dyadic_scales(1, 3))
    with pytest.raises(ValueError):
        box_dimension(K, [Fraction(1, 4), Fraction(1, 2), Fraction(1, 8), Fraction(1, 16)])


def brute_cell_count(K, delta):
    """Oracle: scan every cell and test whether its open interior meets K."""
    cells = ceil(1 / delta)
    count = 0
    for i in range(cells):
        lo, hi = i * delta, min((i + 1) * delta, Fraction(1))
        for a, b in K:
            if (a < hi and b > lo) or (a == b and lo <= a < hi) or (a == b == 1 and i == cells - 1):
                count += 1
                break
    return count


fractions01 = st.fractions(min_value=0, max_value=1, max_denominator=200)


@st.composite
def unions(draw):
    pts = sorted(draw(st.lists(fractions01, min_size=2, max_size=10, unique=True)))
    pts = pts[: len(pts) // 2 * 2]
    return IntervalUnion(list(zip(pts[0::2], pts[1::2])))


@given(unions(), st.integers(1, 7))
def test_cell_count_matches_scan(K, k):
    delta = Fraction(1, 2**k)
    assert cell_count(K, delta) == brute_cell_count(K, delta)


@given(unions())
def test_counts_nonincreasing_in_scale(K):
    scales = dyadic_scales(1, 9)
    counts = [cell_count(K, s) for s in scales]
    assert all(a <= b for a, b in zip(counts, counts[1:]))


@settings(max_examples=40)
@given(st.data())
def test_calibration_finite_unions(data):
    """Well-separated unions of intervals much longer than the scales have dimension 1.

    Each component adds up to two boundary cells per scale, which tilts the fit by
    about ``log(1 + 2 delta/L) / log(delta_max/delta_min)``; lengths above 32 times
    the largest scale keep that below 0.02.
    """
    big = Fraction(1, 2**8)
    scales = dyadic_scales(8, 14)
    count = data.draw(st.integers(1, 12))
    pos = Fraction(data.draw(st.integers(0, 1000)), 10**6)
    pieces = []
    for _ in range(count):
        pos += big + Fraction(data.draw(st.integers(1, 5000)), 10**6)
        length = 32 * big + Fraction(data.draw(st.integers(1, 20000)), 10**6)
        if pos + length > 1:
            break
        pieces.append((pos, pos + length))
        pos += length
    assume(pieces)
    est = box_dimension(IntervalUnion(pieces), scales)
    assert est.slope == pytest.approx(1.0, abs=0.02)


# -- growth exponent and its root -------------------------------------------------------------------
def test_exponent_endpoints():
    assert thm3_exponent(0.0) == 1.0
    assert thm3_exponent(1.0) == -0.5


def test_root():
    root = thm3_root()
    assert abs(root - (sqrt(17) - 3) / 2) <= 1e-12
    assert root == pytest.approx(thm3_root_closed_form(), abs=1e-15)
    assert abs(thm3_exponent(root)) <= 1e-12


def test_sign_pattern_sweep():
    d = np.linspace(0, 1, 1000)
    phi = thm3_exponent(d)
    root = thm3_root()
    assert np.all(phi[d < root] > 0) and np.all(phi[d > root] < 0)


def test_exponent_domain():
    with pytest.raises(ValueError):
        thm3_exponent(1.5)


@given(st.floats(0, 1))
def test_exponent_closed_form(d):
    # -d/(d+1) + (1-d)(d+2)/(2(d+1)) = (2 - 3d - d^2) / (2 (d + 1))
    assert thm3_exponent(d) == pytest.approx((2 - 3 * d - d * d) / (2 * (d + 1)), abs=1e-14)


# -- r-chain rate ------------------------------------------------------------------------
def test_chain_powers_of_two():
    # a long list: the first links round up by a factor near 2, the asymptotic ratio is 7/4
    rep = thm2_rate([2**k for k in range(1, 1025)])
    assert rep.r[:4] == (2, 4, 16, 256)
    assert rep.exponent == pytest.approx(1.2386, abs=1e-4)
    assert CHAIN_EXPONENT == pytest.approx(log(2) / log(7 / 4), abs=1e-15)
    assert rep.loglog_slope == pytest.approx(log(7 / 4), rel=0.10)


def test_chain_requires_two_orders():
    with pytest.raises(ValueError):
        thm2_rate([2])
    with pytest.raises(ValueError):
        thm2_rate([3, 3, 5])


def test_propagated_bounds():
    rep = thm2_rate([2**k for k in range(1, 40)])
    assert rep.bound_exponents(1) == [2**i for i in range(len(rep.r) - 1)]
    vals = rep.propagated_bound(0.5, 4.0, 0)
    assert vals[:3] == [2.0, 4.0, 16.0]


@given(st.lists(st.integers(2, 10**12), min_size=2, max_size=40, unique=True))
def test_chain_minimality(raw):
    n_list = sorted(raw)
    rep = thm2_rate(n_list)
    for r_prev, r_next in zip(rep.r, rep.r[1:]):
        above = [n for n in n_list if n**4 > r_prev**7]
        assert r_next == min(above)
    last = rep.r[-1]
    assert not any(n**4 > last**7 for n in n_list)


# -- growth reports -------------------------------------------------------------------------
def test_growth_delta():
    rep = growth_check(CoeffSeq.delta(0), IntervalUnion.interval(0, Fraction(1, 3)), 4, 40)
    assert rep.norm_r == rep.norm_s == 1.0 and rep.rho == 1.0


def test_threshold_flag_by_arithmetic():
    # 16^1.5 * ln(16)^4 = 64 * (4 ln 2)^4 = 3782.00...
    assert 16**1.5 * log(16) ** 4 == pytest.approx(64 * (4 * log(2)) ** 4, rel=1e-15)
    assert 3782 < 64 * (4 * log(2)) ** 4 < 3782.01
    assert s_beyond_threshold(16, 2048) is False
    assert s_beyond_threshold(16, 4000) is True


def test_growth_argument_checks():
    with pytest.raises(ValueError):
        growth_check(CoeffSeq.delta(0), IntervalUnion.full(), 5, 5)


@pytest.fixture(scope="module")
def stage2_growth(stage2, two_stage_state):
    r, s = two_stage_state.orders
    return growth_check(stage2.coeffs, stage2.supp, r, s)


def test_growth_on_stage_two(stage2_growth):
    rep = stage2_growth
    d = rep.to_dict()
    for key in ("norm_r", "norm_s", "rho", "lhs", "rhs_measure_term", "rhs_degree_term",
                "min_constant", "inflation_radius", "inflation_measure"):
        assert np.isfinite(d[key]) and d[key] >= 0
    # s exceeds the degree, so S_s is the whole polynomial
    assert rep.saturated and rep.s_beyond_threshold


def test_stage_two_inflation_covers_circle(stage2, two_stage_state, stage2_growth):
    """Every gap of supp f_2 is narrower than twice the radius log^3 s / s, so the inflation is full."""
    s = two_stage_state.orders[1]
    radius = log(s) ** 3 / s
    gaps = stage2.supp.complement()
    widest = max(b - a for a, b in gaps)
    assert float(widest) < 2 * radius
    assert stage2_growth.inflation_measure == 1.0


@pytest.mark.xfail(strict=True, reason="the inflation radius exceeds every gap of the stage-2 support (see ledger)")
def test_stage_two_inflation_below_one(stage2_growth):
    assert stage2_growth.inflation_measure < 1


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1), st.integers(1, 30), st.integers(2, 200))
def test_growth_scale_covariance(seed, r, extra):
    rng = np.random.default_rng(seed)
    N = r + extra + 5
    c = CoeffSeq(rng.standard_normal(2 * N + 1) + 1j * rng.standard_normal(2 * N + 1))
    s = r + extra
    K = IntervalUnion.interval(Fraction(1, 7), Fraction(2, 7))
    base = growth_check(c, K, r, s)
    doubled = growth_check(c.scale(2.0), K, r, s)
    t = 2.0
    m = base.inflation_measure
    # C(t) = t^2 ||S_r||^2 / (t ||S_s|| (sqrt m + t ||S_r|| r log^4 s / s))
    expected = (t**2 * base.norm_r**2) / (
        t * base.norm_s * (sqrt(m) + t * base.norm_r * r * log(s) ** 4 / s)
    )
    assert doubled.min_constant == pytest.approx(expected, rel=1e-12)
    assert doubled.min_constant == pytest.approx(minimal_constant(2 * base.norm_r, 2 * base.norm_s, m, r, s),
                                                 rel=1e-12)


# -- support proxy ---------------------------------------------------------------------------
def test_zero_series_detects_nothing():
    assert support_detect(CoeffSeq.zeros(8), [2, 4, 8], 64, [0.25, 0.5, 1.0]).is_empty()


def test_proxy_labelled():
    rep = support_detect_report(CoeffSeq.delta(0), [1, 2, 3, 4], 16, [0.5, 0.5, 0.5, 0.5])
    assert rep.label == "proxy" and rep.persistent_orders == (4,)
    assert rep.detected == IntervalUnion.full()


PROXY_GRID = 1 << 23


@pytest.fixture(scope="module")
def stage2_proxy(stage2, two_stage_state):
    orders = two_stage_state.orders
    tau = [2.0 ** (k - 2) for k in range(1, len(orders) + 1)]
    return support_detect_report(stage2.coeffs, orders, PROXY_GRID, tau)


def test_proxy_nowhere_dense(stage2_proxy):
    """The complement of the detected set meets every interval of length 8/M."""
    longest = max((int((b - a) * PROXY_GRID) for a, b in stage2_proxy.detected), default=0)
    assert longest < 8


@pytest.mark.xfail(strict=True, reason="partial sums are small on the stage support and large off it, "
                                       "so the proxy detects the complement (see ledger)")
def test_proxy_inside_stage_support(stage2, stage2_proxy):
    assert stage2.supp.inflate(Fraction(2, PROXY_GRID)).contains(stage2_proxy.detected)


# -- localisation --------------------------------------------------------------------------------
@pytest.fixture(scope="module")
def cutoff():
    return build_smooth_cutoff((0, 1), Fraction(1, 4)).coeffs


def test_delta_error_spectrum(cutoff):
    n = 40
    rep = localisation_error_spectrum(CoeffSeq.delta(0), cutoff, n)
    E = rep.E
    for j in range(-E.degree, E.degree + 1):
        # phi * 1 - S_n(phi) keeps exactly the coefficients beyond n
        expected = cutoff[j] if abs(j) > n else 0.0
        assert abs(E[j] - expected) <= 1e-15
    assert rep.holds


def test_identity_cutoff_has_no_gap(rng):
    c = CoeffSeq(rng.standard_normal(41) + 1j * rng.standard_normal(41))
    for n in (1, 5, 19, 60):
        E = error_banded(c, CoeffSeq.delta(0), n)
        assert np.all(E.coeffs == 0)
        assert rajchman_gap(c, CoeffSeq.delta(0), n).bound == 0.0


def test_delta_gap_is_truncation_error(cutoff):
    T = tail_sums(cutoff)
    prev = np.inf
    for n in (8, 16, 32, 64, 128):
        gap = rajchman_gap(CoeffSeq.delta(0), cutoff, n).bound
        assert gap <= T[n + 1] * (1 + 1e-9) + 1e-14
        assert gap <= prev
        prev = gap


def unit_disk_coeffs(rng, N):
    rad = np.sqrt(rng.random(2 * N + 1))
    return CoeffSeq(rad * np.exp(2j * np.pi * rng.random(2 * N + 1)))


def test_tail_inequality_random(cutoff):
    rng = np.random.default_rng(99)
    for _ in range(100):
        c = unit_disk_coeffs(rng, int(rng.integers(10, 120)))
        n = int(rng.integers(1, c.degree + 20))
        rep = localisation_error_spectrum(c, cutoff, n)
        assert rep.worst_slack >= 0
        assert rep.banded_vs_direct <= 1e-11


def test_tail_sums_definition(cutoff):
    T = tail_sums(cutoff)
    N = cutoff.degree
    for r in (0, 1, 7, N, N + 1):
        ref = sum(abs(cutoff[s]) for s in range(-N, N + 1) if abs(s) >= r)
        assert T[r] == pytest.approx(ref, rel=1e-12, abs=1e-300)


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1), st.integers(1, 50), st.integers(0, 40), st.integers(0, 12))
def test_tail_inequality_property(seed, n, N, P):
    """The tail bound is exact algebra, so it holds for every finite ``c`` and ``phi``."""
    rng = np.random.default_rng(seed)
    c = unit_disk_coeffs(rng, N)
    phi = CoeffSeq(rng.standard_normal(2 * P + 1) + 1j * rng.standard_normal(2 * P + 1))
    rep = localisation_error_spectrum(c, phi, n)
    scale = np.abs(phi.coeffs).sum() * rep.c_sup
    assert rep.worst_slack >= -1e-13 * scale
    assert rep.banded_vs_direct <= 1e-12 * max(scale, 1)


def test_direct_definition_grid(cutoff, rng):
    """``E_n`` evaluated on a grid equals ``phi S_n(c) - S_n(c * phi)`` pointwise."""
    c = unit_disk_coeffs(rng, 30)
    n = 12
    E = error_direct(c, cutoff, n)
    x = rng.random(50)
    ev = lambda s: np.exp(2j * np.pi * np.multiply.outer(x, s.indices)) @ s.coeffs
    lhs = ev(cutoff) * ev(c.truncate(n)) - ev(coeff_convolve(c, cutoff).truncate(n))
    assert np.abs(ev(E) - lhs).max() <= 1e-11
