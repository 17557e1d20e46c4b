"""Measurements around the necessary conditions: exponents, r-chains, growth, localisation.

Run: python3 demos/03_necessary_conditions.py
"""

from fractions import Fraction
from math import log, sqrt

import numpy as np

from nullseries.analysis import (
    box_dimension,
    cantor_set,
    growth_check,
    localisation_error_spectrum,
    rajchman_gap,
    thm2_rate,
    thm3_exponent,
    thm3_root,
    triadic_scales,
)
from nullseries.construction import build_f
from nullseries.fourier_core import CoeffSeq
from nullseries.smooth_builders import build_smooth_cutoff

# exponent of r in the growth bound as a function of the support dimension d
root = thm3_root()
print(f"exponent vanishes at d = {root:.12f} = (sqrt17 - 3)/2 = {(sqrt(17) - 3) / 2:.12f}")
for d in (0.0, 0.25, 0.5, root, 0.75, 1.0):
    print(f"  d={d:.4f}  exponent {thm3_exponent(d):+.4f}")

# a Cantor set sits on the far side of the threshold
est = box_dimension(cantor_set(10), triadic_scales(1, 10))
print(f"ternary Cantor set: d = {est.slope:.4f} > {root:.4f}")

# r-chain: each link is the first order above the previous one to the power 7/4
rep = thm2_rate([2**k for k in range(1, 1025)])
print("\nchain exponents log2 r_i:", [r.bit_length() - 1 for r in rep.r])
print(f"slope of log log r_i: {rep.loglog_slope:.4f} (log 7/4 = {log(7 / 4):.4f}); "
      f"rate constant log2/log(7/4) = {rep.exponent:.4f}")

# growth report for a stage function: both sides of the L2 inequality, with the implied constant
f = build_f(0.3, observe=False)
g = growth_check(f.coeffs, f.supp, 64, 4096)
print(f"\ngrowth, r=64 s=4096: ||S_r||^2 = {g.lhs:.4f}, ||S_s|| = {g.norm_s:.4f}, "
      f"inflated support measure {g.inflation_measure:.4f}, minimal constant {g.min_constant:.4f}")

# localisation: multiplying partial sums by a smooth cutoff versus taking partial sums of the product
phi = build_smooth_cutoff((0, 1), Fraction(1, 4)).coeffs
rng = np.random.default_rng(0)
c = CoeffSeq(np.exp(2j * np.pi * rng.random(401)))
rep = localisation_error_spectrum(c, phi, 100)
print(f"\nerror spectrum at n=100: worst slack of the tail bound {rep.worst_slack:.2e}, "
      f"banded vs direct {rep.banded_vs_direct:.1e}")
for n in (25, 50, 100, 200, 400):
    print(f"  sup |phi S_n(c) - S_n(c*phi)| <= {rajchman_gap(c, phi, n).bound:.3e}  at n={n}")
# |c_l| = 1 does not decay, so the gap stays of order one until n passes the degree of c
