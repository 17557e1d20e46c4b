"""Stage records and exact integer checks on the block layout."""

from dataclasses import dataclass, field

import numpy as np

from ..fourier_core import CoeffSeq, IntervalUnion


@dataclass(frozen=True, eq=False)
class StageFunction:
    """A built trigonometric polynomial with its support, order ``n`` and certificates.

    ``blocks`` holds the pieces the coefficients were assembled from (for
    independent re-verification); ``params`` the integer layout.
    """

    coeffs: CoeffSeq
    n: int
    supp: IntervalUnion
    params: dict
    certificates: dict
    blocks: dict = field(default_factory=dict, repr=False)

    @property
    def degree(self):
        return self.coeffs.degree

    def l1(self):
        return float(np.abs(self.coeffs.coeffs).sum())


def compact_base_spacing(a, m, r):
    """Smallest ``D`` of the form used here that makes every block disjoint.

    With ``N_j = D + j r`` and ``|q| <= m``, two block centres differ by at least
    ``D - 2 m (a - 1) r`` when their ``q`` differ, so ``D = 2 m (a - 1) r + 2 r``
    leaves a gap of ``2r`` between blocks of half-width ``r/2 - 1``.
    """
    return 2 * m * (a - 1) * r + 2 * r


def spacings(a, r, m, mode="compact"):
    if mode == "cubic":
        base = r**3
    elif mode == "compact":
        base = compact_base_spacing(a, m, r)
    else:
        raise ValueError(f"unknown spacing mode {mode!r}")
    return [base + j * r for j in range(a)]


def choose_order(a, r, m, N, mode="compact"):
    """The order ``n`` at which the partial sum is taken."""
    if mode == "cubic":
        return m * (r**3 + r**2)
    return m * N[-1] + r


def sandwich_bounds(N, m, r):
    """``(max_j m N_j + r/2, min_j (m+1) N_j - r/2)``: ``n`` must lie strictly between."""
    lower = max(m * Nj + r // 2 for Nj in N)
    upper = min((m + 1) * Nj - r // 2 for Nj in N)
    return lower, upper


def check_sandwich(n, N, m, r):
    lower, upper = sandwich_bounds(N, m, r)
    return lower < n < upper, lower, upper


def block_injectivity(N, m, half_width):
    """Exact check that the index blocks ``[q N_j - B, q N_j + B]`` never overlap.

    Ranges over ``j < a``, ``0 < |q| <= m`` plus the shared low band ``q = 0``.
    Returns ``(ok, min_gap)`` where ``min_gap`` is the smallest distance between
    consecutive block centres.
    """
    centres = sorted({0} | {q * Nj for Nj in N for q in range(-m, m + 1) if q != 0})
    count = 1 + 2 * m * len(N)
    gaps = [b - a for a, b in zip(centres, centres[1:])]
    min_gap = min(gaps) if gaps else None
    ok = len(centres) == count and (min_gap is None or min_gap > 2 * half_width)
    return ok, min_gap


def block_injectivity_exhaustive(a, r, m, mode="cubic"):
    """Enumerate ``l = p + q N_j`` (``|p| < r/2``, ``0 < |q| <= m``) and check distinctness.

    Intended for small parameters; complements :func:`block_injectivity`.
    """
    N = spacings(a, r, m, mode)
    B = r // 2 - 1
    seen = {}
    for j, Nj in enumerate(N):
        for q in range(-m, m + 1):
            if q == 0:
                continue
            for p in range(-B, B + 1):
                key = p + q * Nj
                if key in seen or abs(key) <= B:
                    return False
                seen[key] = (j, q, p)
    return True


def decompose_index(l, N, m, half_width):
    """All ``(j, q, p)`` with ``l = p + q N_j``, ``0 < |q| <= m``, ``|p| <= half_width``."""
    out = []
    for j, Nj in enumerate(N):
        for q in range(-m, m + 1):
            if q == 0:
                continue
            p = l - q * Nj
            if abs(p) <= half_width:
                out.append((j, q, p))
    return out
