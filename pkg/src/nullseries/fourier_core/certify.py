"""Rigorous sup-norm bounds for trigonometric polynomials from grid samples."""

from dataclasses import asdict, dataclass

import numpy as np

from .coeffs import partial_sum_eval, grid_size_for
from .intervals import grid_mask


@dataclass(frozen=True)
class SupCertificate:
    """``bound`` dominates ``sup |T|`` over the named set.

    ``bound = grid_max + correction``: the correction accounts for points
    between grid nodes (second-order Taylor term with a global bound on
    ``|T''|``) and for floating-point error in the FFT.
    """

    name: str
    bound: float
    grid_max: float
    correction: float
    grid_size: int
    points: int

    def holds(self, limit):
        return self.bound < limit

    def slack(self, limit):
        return float(limit - self.bound)

    def to_dict(self):
        return asdict(self)


def second_derivative_bound(c):
    """``sum (2 pi l)^2 |c_l|``, an upper bound for ``sup |T''|``."""
    l = c.indices.astype(float)
    return float(np.sum((2 * np.pi * l) ** 2 * np.abs(c.coeffs)))


def first_derivative_bound(c):
    l = c.indices.astype(float)
    return float(np.sum(2 * np.pi * np.abs(l) * np.abs(c.coeffs)))


def certified_sup(c, where=None, M=None, name="sup"):
    """Certified bound on ``sup |T(x)|`` for ``x`` in ``where`` (whole circle if None).

    Every point of ``where`` lies within ``h/2`` of a selected grid node ``x*``
    (``h = 1/M``), and ``|T(x)| <= |T(x*)| + (h/2)|T'(x*)| + (h/2)^2/2 sup|T''|``.
    """
    if M is None:
        M = grid_size_for(c.degree)
    vals = partial_sum_eval(c, c.degree, M)
    ders = partial_sum_eval(c.derivative(), c.degree, M)
    if where is None:
        mask = slice(None)
        npts = M
    else:
        mask = grid_mask(where, M)
        npts = int(mask.sum())
        if npts == 0:
            return SupCertificate(name, 0.0, 0.0, 0.0, M, 0)
    half = 0.5 / M
    absval = np.abs(vals.values[mask])
    local = absval + half * np.abs(ders.values[mask])
    grid_max = float(absval.max())
    bound = (
        float(local.max())
        + 0.5 * half**2 * second_derivative_bound(c)
        + vals.error_bound
        + half * ders.error_bound
    )
    return SupCertificate(name, bound, grid_max, bound - grid_max, M, npts)


def certified_sups(c, regions, M=None, name="sup"):
    """Certified sups over several regions sharing one pair of FFT evaluations."""
    if M is None:
        M = grid_size_for(c.degree)
    vals = partial_sum_eval(c, c.degree, M)
    ders = partial_sum_eval(c.derivative(), c.degree, M)
    half = 0.5 / M
    absval = np.abs(vals.values)
    local = absval + half * np.abs(ders.values)
    extra = 0.5 * half**2 * second_derivative_bound(c) + vals.error_bound + half * ders.error_bound
    out = []
    for i, where in enumerate(regions):
        mask = grid_mask(where, M)
        npts = int(mask.sum())
        if npts == 0:
            out.append(SupCertificate(f"{name}[{i}]", 0.0, 0.0, 0.0, M, 0))
            continue
        gm = float(absval[mask].max())
        bound = float(local[mask].max()) + extra
        out.append(SupCertificate(f"{name}[{i}]", bound, gm, bound - gm, M, npts))
    return out
