"""The eleven acceptance criteria, each reported as one PASS/FAIL line.

Run with pytest (the lines are collected into the terminal summary) or
directly as ``python3 tests/test_acceptance.py``.
"""

import json
import time
from fractions import Fraction
from math import log, sqrt

import numpy as np
import pytest

from nullseries.analysis import (
    box_dimension,
    cantor_set,
    dyadic_scales,
    localisation_error_spectrum,
    rajchman_gap,
    thm2_rate,
    thm3_exponent,
    thm3_root,
    triadic_scales,
)
from nullseries.cli import main
from nullseries.construction import block_injectivity, check_sandwich, decompose_index, stage_tolerance
from nullseries.fourier_core import (
    CoeffSeq,
    IntervalUnion,
    certified_sup,
    grid_size_for,
    l2_norm,
    partial_sum_eval,
    read_nusr,
    read_support,
)
from nullseries.smooth_builders import build_smooth_cutoff, capacity_probe

RESULTS = {}
HALF = IntervalUnion.interval(0, Fraction(1, 2))


def record(k, ok, detail):
    line = f"CRITERION {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[k] = line
    print(line)
    return ok


# 1 ------------------------------------------------------------------------------------------
def test_criterion_01_window_function(tmp_path):
    t = time.perf_counter()
    code = main(["build-block", "h", "--eps", "0.25", "--out", str(tmp_path)])
    elapsed = time.perf_counter() - t
    h = read_nusr(tmp_path / "h.nusr", real_valued=True)
    supp = read_support(tmp_path / "h.support.json")
    summary = json.loads((tmp_path / "h.json").read_text())
    m = summary["m"]
    cert = certified_sup(h.truncate(m), HALF, M=1 << 14)
    residual = summary["certificates"]["residual"]
    ok = (code == 0 and h[0] == 1.0 and HALF.contains(supp) and cert.bound <= 0.25
          and residual <= 1e-9 and elapsed <= 30)
    assert record(1, ok, f"h_hat(0)={h[0].real!r} supp in [0,1/2]={HALF.contains(supp)} "
                         f"sup|S_m h| on [0,1/2] <= {cert.bound:.4f} residual={residual:.1e} time={elapsed:.1f}s")


# 2 ------------------------------------------------------------------------------------------
def test_criterion_02_stage_function(tmp_path):
    t = time.perf_counter()
    code = main(["build-block", "f", "--eps", "0.5", "--out", str(tmp_path)])
    elapsed = time.perf_counter() - t
    f = read_nusr(tmp_path / "f.nusr", real_valued=True)
    supp = read_support(tmp_path / "f.support.json")
    summary = json.loads((tmp_path / "f.json").read_text())
    p = summary["params"]
    coef = float(np.abs(np.delete(f.coeffs, f.degree)).max())
    n = summary["n"]
    cert = certified_sup(f.truncate(n), supp, M=1 << 20)
    builder_bound = summary["certificates"]["partial_sum_bound"]
    N, m, B = p["spacings"], p["m"], p["half_width"]
    inj, _ = block_injectivity(N, m, B)
    exact_blocks = all(len(decompose_index(l, N, m, B)) <= (1 if abs(l) > B else 0)
                       for l in range(-f.degree, f.degree + 1))
    sandwich, lower, upper = check_sandwich(n, N, m, p["r"])
    ok = (code == 0 and coef < 0.5 and cert.bound < 0.5 and builder_bound < 0.5 and inj and exact_blocks
          and sandwich and 2 * f.degree + 1 <= 2**26 and elapsed <= 300)
    assert record(2, ok, f"max|f_hat(k!=0)|={coef:.4f} sup|S_n f| on supp <= {cert.bound:.4f} "
                         f"(builder {builder_bound:.4f}) blocks disjoint={inj and exact_blocks} "
                         f"{lower}<n={n}<{upper} degree={f.degree} time={elapsed:.1f}s")


# 3 ------------------------------------------------------------------------------------------
def test_criterion_03_two_stages(two_stage_state):
    st = two_stage_state
    f1, f2 = st.stages
    measured = st.bound_table[(2, 2)]["value"]
    diff = f2.coeffs.coeffs.copy()
    diff[f2.degree] -= f1.coeffs[0]
    drift = float(np.abs(diff).max())
    limit = stage_tolerance(1, f1.n)
    nested = f1.supp.contains(f2.supp)
    m1, m2 = f1.supp.measure(), f2.supp.measure()
    ok = measured <= 8 * 2.0**-2 and drift < limit and nested and m2 < m1
    assert record(3, ok, f"max|S_n2(f_2)| on grid in supp = {measured:.4g} <= 2; drift={drift:.3g} < {limit}; "
                         f"nested={nested} measure {float(m1):.4f} -> {float(m2):.4f}")


# 4 ------------------------------------------------------------------------------------------
def test_criterion_04_parseval():
    rng = np.random.default_rng(4)
    t = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        c = CoeffSeq(rng.standard_normal(2001) + 1j * rng.standard_normal(2001))
        M = grid_size_for(1000)
        quad = float(np.mean(np.abs(partial_sum_eval(c, 1000, M).values) ** 2))
        worst = max(worst, abs(l2_norm(c) ** 2 - quad) / l2_norm(c) ** 2)
    elapsed = time.perf_counter() - t
    ok = worst <= 1e-10 and elapsed <= 10
    assert record(4, ok, f"worst relative defect {worst:.2e} over 100 sequences, time={elapsed:.2f}s")


# 5 ------------------------------------------------------------------------------------------
def test_criterion_05_capacity():
    lo, hi = capacity_probe(24).root_bounds
    ok = 0.68 <= lo and hi <= 0.74
    assert record(5, ok, f"(min sup)^(1/24) in [{lo:.5f}, {hi:.5f}], 1/sqrt2={1 / sqrt(2):.5f}")


# 6 ------------------------------------------------------------------------------------------
def test_criterion_06_dimension():
    cantor = box_dimension(cantor_set(10), triadic_scales(1, 10)).slope
    line = box_dimension(HALF, dyadic_scales(4, 10)).slope
    ok = abs(cantor - log(2) / log(3)) <= 0.05 and abs(line - 1) <= 0.01
    assert record(6, ok, f"Cantor d={cantor:.5f} (log2/log3={log(2) / log(3):.5f}); interval d={line:.5f}")


# 7 ------------------------------------------------------------------------------------------
def test_criterion_07_threshold():
    root = thm3_root()
    err = abs(root - (sqrt(17) - 3) / 2)
    d = np.linspace(0, 1, 1000)
    phi = thm3_exponent(d)
    signs = bool(np.all(phi[d < root] > 0) and np.all(phi[d > root] < 0))
    ok = err <= 1e-12 and signs
    assert record(7, ok, f"root={root:.15f} error={err:.1e} sign pattern correct={signs}")


# 8 ------------------------------------------------------------------------------------------
def test_criterion_08_chain_rate():
    rep = thm2_rate([2**k for k in range(1, 1025)])
    slope_ok = abs(rep.loglog_slope - log(7 / 4)) <= 0.10 * log(7 / 4)
    printed = f"{rep.exponent:.4f}"
    ok = rep.r[:4] == (2, 4, 16, 256) and slope_ok and printed == "1.2386"
    assert record(8, ok, f"chain starts {rep.r[:4]}; loglog slope {rep.loglog_slope:.4f} vs "
                         f"log(7/4)={log(7 / 4):.4f}; exponent {printed}")


# 9 ------------------------------------------------------------------------------------------
def test_criterion_09_localisation():
    rng = np.random.default_rng(9)
    phi = build_smooth_cutoff((0, 1), Fraction(1, 4)).coeffs
    worst_slack, worst_diff = np.inf, 0.0
    for _ in range(100):
        N = int(rng.integers(10, 200))
        c = CoeffSeq(np.sqrt(rng.random(2 * N + 1)) * np.exp(2j * np.pi * rng.random(2 * N + 1)))
        n = int(rng.integers(1, N + 40))
        rep = localisation_error_spectrum(c, phi, n)
        worst_slack = min(worst_slack, rep.worst_slack)
        worst_diff = max(worst_diff, rep.banded_vs_direct)
    ok = worst_slack >= 0 and worst_diff <= 1e-11
    assert record(9, ok, f"worst slack {worst_slack:.3e} >= 0; banded vs direct {worst_diff:.2e}")


# 10 -----------------------------------------------------------------------------------------
def widest_gap(supp):
    gaps = [(a, b) for a, b in supp.complement() if a > 0 and b < 1]
    return max(gaps, key=lambda g: g[1] - g[0])


def test_criterion_10_rajchman(stage2):
    a, b = widest_gap(stage2.supp)
    margin = (b - a) / 4
    cut = build_smooth_cutoff((a, b), margin, tol=1e-8)
    assert cut.support.intersect(stage2.supp).is_empty()
    phi = cut.coeffs
    top = 10 * phi.degree
    orders = [2**k for k in range(10, 64) if 2**k <= top] + [top]
    gaps = [rajchman_gap(stage2.coeffs, phi, n).bound for n in orders]
    rises = [(orders[i], orders[i + 1]) for i in range(len(gaps) - 1) if gaps[i + 1] > gaps[i]]
    ok = not rises and gaps[-1] < 1e-3
    sweep = " ".join(f"{n}:{g:.2e}" for n, g in zip(orders, gaps))
    assert record(10, ok, f"phi on [{float(a):.5f},{float(b):.5f}] deg {phi.degree}; gap at 10 deg phi = "
                          f"{gaps[-1]:.2e}; increases at {rises}; sweep {sweep}")


# 11 -----------------------------------------------------------------------------------------
def test_criterion_11_reproducible(construct_dir, tmp_path):
    other = tmp_path / "run_b"
    code_b = main(["construct", "--stages", "2", "--out", str(other)])
    same = (construct_dir / "manifest.json").read_bytes() == (other / "manifest.json").read_bytes()
    code_v = main(["verify", str(construct_dir)])
    ok = code_b == 0 and same and code_v == 0
    assert record(11, ok, f"second run exit {code_b}; manifests byte-identical={same}; verify exit {code_v}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
