"""Building blocks: a polynomial small on half the circle, a window function h, a stage function f.

Run: python3 demos/01_building_blocks.py
"""

from fractions import Fraction

import numpy as np

from nullseries.construction import build_f, build_h
from nullseries.fourier_core import IntervalUnion, certified_sup
from nullseries.smooth_builders import ARC_CAPACITY, build_arc_poly, capacity_probe

# 1. P with constant term 1 and small on [0, 1/2]
# the degree grows like log(1/eps), and the n-th root of the best sup approaches the arc capacity
for eps in (0.5, 0.1, 0.01):
    arc = build_arc_poly(eps)
    print(f"eps={eps:<5} degree {arc.n}  certified sup on [0,1/2] = {arc.eps_arc:.5f}  "
          f"n/log(1/eps) = {arc.growth_constant:.3f}")

br = capacity_probe(24)
lo, hi = br.root_bounds
print(f"monic degree 24: (min sup)^(1/24) in [{lo:.5f}, {hi:.5f}]; capacity 1/sqrt2 = {ARC_CAPACITY:.5f}")

# 2. h: windows placed at 2n+1 nodes, weights from a Vandermonde solve
# h lives in [0, 1/2] and its partial sum of order m is exactly the polynomial above
h = build_h(0.25)
c = h.certificates
print(f"\nh for eps=0.25: m={h.m}, degree {h.coeffs.degree}, h_hat(0)={h.coeffs[0].real}")
print(f"  Vandermonde condition {c['condition']:.1f}, relative residual {c['residual']:.1e}")
print(f"  sup |S_m(h)| on [0,1/2] <= {c['partial_sum_bound']:.4f}")
print(f"  support: {len(h.supp)} windows inside [0,1/2]: {IntervalUnion.interval(0, Fraction(1, 2)).contains(h.supp)}")

# 3. f: a translates of a squeezed plateau, each modulated by h at its own frequency
f = build_f(0.5)
p, c = f.params, f.certificates
print(f"\nf for eps=0.5: a={p['a']}, r={p['r']}, m={p['m']}, spacings {p['spacings']}")
print(f"  order n={f.n} (between {c['sandwich'][0]} and {c['sandwich'][2]}), degree {f.degree}")
print(f"  largest nonconstant coefficient {c['coef_max']:.4f} < 0.5")
print(f"  partial sum bound on supp f {c['partial_sum_bound']:.4f} < 0.5, "
      f"grid+derivative certificate {certified_sup(f.coeffs, f.supp, M=1 << 20).bound:.4f}")
print(f"  supp f: {len(f.supp)} intervals, measure {float(f.supp.measure()):.4f}")

# off the support the same partial sum is not small at all
off = certified_sup(f.coeffs, f.supp.complement(), M=1 << 20)
print(f"  for contrast, grid max of |S_n f| off the support: {off.grid_max:.3f}")
