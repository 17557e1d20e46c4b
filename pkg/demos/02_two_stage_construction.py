"""Two stages of the iteration f_{k+1}(x) = f_k(x) h_k(r_k x), and why a third does not fit.

Run: python3 demos/02_two_stage_construction.py   (about half a minute)
"""

import numpy as np

from nullseries.analysis import box_dimension, dyadic_scales
from nullseries.construction import iterate_construction, reduce_coeffs, stage_tolerance
from nullseries.errors import ResourceError

state = iterate_construction(2)
f1, f2 = state.stages
print("orders n_k:", state.orders)
print("tolerances 2^-k / n_k:", state.eps)
print(f"coefficient drift max|f2_hat - f1_hat| = {state.drift[0]:.4f}")

# the partial sums along the subsequence are small on the shrinking supports
for (j, k), row in sorted(state.bound_table.items()):
    print(f"  max over supp f_{j} of |S_(n_{k}) f_{j}| = {row['value']:.4g}  (target 8*2^-{k} = {row['target']})")

print(f"\nsupp f_2: {len(f2.supp)} intervals, measure {float(f2.supp.measure()):.4f}")
est = box_dimension(f2.supp, dyadic_scales(8, 20))
print("box counts at 2^-8 .. 2^-20:", est.counts)
print(f"fitted slope {est.slope:.3f}: at these scales the support still looks one-dimensional")

# stage 3 needs r > 2 deg f_2, so its degree is at least (2 deg f_2 + 2) * 64
eps3 = stage_tolerance(2, f2.n)
try:
    reduce_coeffs(f2, eps3, f2.n + 1)
except ResourceError as err:
    d = err.diagnostics
    print(f"\nstage 3 at eps={eps3:.3g}: least degree {d['least_degree']:,} exceeds the cap {d['cap']:,}")

# the largest coefficients of f_2 away from 0 are tiny, yet the series is far from zero
coef = np.abs(f2.coeffs.coeffs)
coef[f2.degree] = 0
print(f"max |f2_hat(l)|, l != 0: {coef.max():.4f}")
