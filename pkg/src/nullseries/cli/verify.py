"""Independent re-verification of a ``construct`` directory.

Nothing here reuses the producing path's evaluation or norm code: coefficient
files are parsed directly, trigonometric sums are evaluated by Horner's rule
at explicit points (no FFT), and supports are rebuilt with a separate exact
interval routine.
"""

import json
import os
import struct
from fractions import Fraction
from math import ceil, floor, pi

import numpy as np

from .jsonutil import sha256_file

_HEADER = struct.Struct("<4sIq")


# -- raw readers -------------------------------------------------------------
def read_coeffs(path):
    with open(path, "rb") as fh:
        data = fh.read()
    magic, version, degree = _HEADER.unpack_from(data)
    if magic != b"NUSR" or version != 1:
        raise ValueError(f"{path}: not a NUSR v1 file")
    body = np.frombuffer(data, dtype="<f8", offset=_HEADER.size)
    if body.size != 2 * (2 * degree + 1):
        raise ValueError(f"{path}: payload size mismatch")
    return body[0::2] + 1j * body[1::2]


def read_pairs(path):
    with open(path) as fh:
        obj = json.load(fh)
    return [(Fraction(int(a[0]), int(a[1])), Fraction(int(b[0]), int(b[1]))) for a, b in obj]


# -- exact interval routines ---------------------------------------------------
def merge(pairs):
    out = []
    for a, b in sorted(pairs):
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(b, out[-1][1]))
        else:
            out.append((a, b))
    return out


def intersect(A, B):
    out, i, j = [], 0, 0
    while i < len(A) and j < len(B):
        lo, hi = max(A[i][0], B[j][0]), min(A[i][1], B[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if A[i][1] < B[j][1]:
            i += 1
        else:
            j += 1
    return merge(out)


def subset(inner, outer):
    j = 0
    for a, b in inner:
        while j < len(outer) and outer[j][1] < a:
            j += 1
        if j == len(outer) or outer[j][0] > a or outer[j][1] < b:
            return False
    return True


def preimage(pairs, N, lo=Fraction(0), hi=Fraction(1)):
    """``{x in [lo, hi] : N x mod 1 in pairs}``."""
    out = []
    for k in range(max(0, floor(lo * N) - 1), min(N - 1, ceil(hi * N)) + 1):
        for a, b in pairs:
            x0, x1 = max((k + a) / N, lo), min((k + b) / N, hi)
            if x0 <= x1:
                out.append((x0, x1))
    return merge(out)


def measure(pairs):
    return sum((b - a for a, b in pairs), Fraction(0))


# -- direct evaluation -----------------------------------------------------------
def horner(c, x, order=0, chunk=1 << 15):
    """``sum_l (2 pi i l)^order c_l e(l x)`` at points ``x`` by Horner's rule in ``e(x)``."""
    N = (c.size - 1) // 2
    coef = c * (2j * pi * np.arange(-N, N + 1)) ** order if order else c
    x = np.asarray(x, dtype=float)
    out = np.empty(x.size, dtype=complex)
    for s in range(0, x.size, chunk):
        z = np.exp(2j * pi * x[s : s + chunk])
        acc = np.full(z.size, coef[-1])
        for v in coef[-2::-1]:
            acc = acc * z + v
        out[s : s + chunk] = acc * np.exp(-2j * pi * N * x[s : s + chunk])
    return out


def curvature(c):
    N = (c.size - 1) // 2
    return float(np.sum((2 * pi * np.arange(-N, N + 1)) ** 2 * np.abs(c)))


def sup_on(c, regions, G):
    """Bounds on ``sup |T|`` over each region ``(lo, hi)`` from a uniform grid of ``G`` points.

    Every point of a region is within ``1/(2G)`` of a grid point kept for it,
    and ``|T(x)| <= |T(x_j)| + |T'(x_j)|/(2G) + curvature/(8 G^2)`` plus rounding.
    """
    x = np.arange(G) / G
    v, d = np.abs(horner(c, x)), np.abs(horner(c, x, 1))
    local = v + d / (2 * G)
    extra = curvature(c) / (8.0 * G * G) + 1e-13 * float(np.abs(c).sum())
    out = []
    for lo, hi in regions:
        j0 = ceil(float(lo) * G - 0.5) - 1
        j1 = floor(float(hi) * G + 0.5) + 1
        idx = np.arange(j0, j1 + 1) % G
        out.append(float(local[idx].max()) + extra)
    return out


def grid_for(c, target):
    """Power-of-two grid making the curvature term at most ``target``."""
    G = 1 << 12
    while curvature(c) / (8.0 * G * G) > target and G < (1 << 20):
        G *= 2
    return G


# -- stage checks -----------------------------------------------------------------
def frac(pair):
    return Fraction(int(pair[0]), int(pair[1]))


def assemble_blocks(V, P, N, a):
    """``sum_j V(x - j/a) P(x N_j)`` by scattering every product to its index."""
    B, m = (V.size - 1) // 2, (P.size - 1) // 2
    deg = m * N[-1] + B
    out = np.zeros(2 * deg + 1, dtype=complex)
    p = np.arange(-B, B + 1)
    idx, val = [], []
    for j, Nj in enumerate(N):
        phase = np.exp(-2j * pi * p * j / a)
        for q in range(-m, m + 1):
            idx.append(q * Nj + p + deg)
            val.append(P[q + m] * V * phase)
    np.add.at(out, np.concatenate(idx), np.concatenate(val))
    return out


def inner_support(params):
    a = params["a"]
    t0 = frac(params["plateau_t0"])
    hull = [(frac(params["hull"][0]), frac(params["hull"][1]))]
    out = []
    for e, Ne in enumerate(params["spacings"]):
        out.extend(preimage(hull, Ne, (e + t0) / a, (e + 1 - t0) / a))
    return merge(out)


def check_inner(rec, h, V, P, stored_supp):
    """Recompute the inner function's coefficient and partial-sum certificates."""
    prm, man = rec["inner"]["params"], rec["inner"]["certificates"]
    a, N, eps = prm["a"], prm["spacings"], prm["eps"]
    m, B = (P.size - 1) // 2, (V.size - 1) // 2
    F = assemble_blocks(V, P, N, a)
    F0 = F[(F.size - 1) // 2].real
    hd = (h.size - 1) // 2
    assembly = float(np.abs(F / F0 - h).max()) if F.size == h.size else float("inf")
    nonconst = np.abs(h).copy()
    nonconst[hd] = 0.0
    coef_max = float(nonconst.max())

    t0 = frac(prm["plateau_t0"])
    regions = [((e + t0) / a, (e + 1 - t0) / a) for e in range(a)]
    s = sup_on(V, regions, grid_for(V, 1e-7))
    hull = (frac(prm["hull"][0]), frac(prm["hull"][1]))
    GP = grid_for(P, 1e-9)
    eps_P = sup_on(P, [hull], GP)[0]
    P_inf = sup_on(P, [(Fraction(0), Fraction(1))], GP)[0]
    partial = (eps_P * s[0] + P_inf * sum(s[1:])) / F0

    lower, upper = max(m * Nj + B + 1 for Nj in N), min((m + 1) * Nj - B - 1 for Nj in N)
    supp = inner_support(prm)
    return {
        "hhat0_exact": bool(h[hd] == 1.0),
        "assembly_max_diff": {"recomputed": assembly, "limit": 1e-12, "ok": assembly <= 1e-12},
        "coef_max": {"manifest": man["coef_max"], "recomputed": coef_max, "limit": eps, "ok": coef_max < eps},
        "partial_sum_bound": {"manifest": man["partial_sum_bound"], "recomputed": partial,
                              "limit": eps, "ok": partial < eps},
        "order_beyond_degree": prm["n"] > hd,
        "order_in_sandwich": lower <= prm["n"] <= upper,
        "support_matches": supp == stored_supp,
    }


def spot_values(dirpath, manifest, j, k, xs, cache):
    """``S_{n_k}(f_j)`` at ``xs`` via the stored blocks, or ``None`` if too costly."""
    stages = manifest["stages"]
    n_k = stages[k - 1]["n"]
    deg_j = stages[j - 1]["degree"]
    if n_k >= deg_j:
        val = np.ones(xs.size, dtype=complex)
        for i in range(2, j + 1):
            rec = stages[i - 1]
            prm = rec["inner"]["params"]
            V, P = cache(f"inner_{i}.V.nusr"), cache(f"inner_{i}.P.nusr")
            a, N = prm["a"], prm["spacings"]
            y = (rec["r"] * xs) % 1.0
            F = np.zeros(xs.size, dtype=complex)
            for e, Ne in enumerate(N):
                F += horner(V, (y - e / a) % 1.0) * horner(P, (y * Ne) % 1.0)
            F0 = a * V[(V.size - 1) // 2].real * P[(P.size - 1) // 2].real
            val *= F / F0
        return val
    if 2 * n_k + 1 <= 1 << 13:
        c = cache(f"stage_{j}.nusr")
        d = (c.size - 1) // 2
        n = min(n_k, d)
        return horner(c[d - n : d + n + 1], xs)
    return None


def sample_points(pairs, count=4096):
    step = max(1, len(pairs) // count)
    return np.array([float((a + b) / 2) for a, b in pairs[::step]])


def verify_dir(dirpath):
    """Returns ``(ok, report)``."""
    with open(os.path.join(dirpath, "manifest.json")) as fh:
        manifest = json.load(fh)
    report = {"hashes": {}, "stages": [], "bounds": [], "slack": {}}
    hashes_ok = True
    for name, info in manifest["files"].items():
        path = os.path.join(dirpath, name)
        got = sha256_file(path) if os.path.exists(path) else None
        ok = got == info["sha256"]
        hashes_ok &= ok
        if not ok:
            report["hashes"][name] = {"expected": info["sha256"], "found": got}
    report["hashes_ok"] = hashes_ok
    if not hashes_ok:
        return False, report

    loaded = {}

    def cache(name):
        if name not in loaded:
            loaded[name] = read_coeffs(os.path.join(dirpath, name))
        return loaded[name]

    all_ok = True
    prev_c, prev_supp = None, None
    for rec in manifest["stages"]:
        k = rec["k"]
        c = cache(f"stage_{k}.nusr")
        supp = read_pairs(os.path.join(dirpath, f"stage_{k}.support.json"))
        d = (c.size - 1) // 2
        out = {"k": k}
        if k == 1:
            delta = np.zeros_like(c)
            delta[d] = 1.0
            out["initial_is_delta"] = bool(np.array_equal(c, delta)) and rec["n"] == 2
            out["initial_support_full"] = supp == [(Fraction(0), Fraction(1))]
            ok = out["initial_is_delta"] and out["initial_support_full"]
            slacks = []
        else:
            man = rec["certificates"]
            r, eps = rec["r"], rec["eps"]
            h = cache(f"inner_{k}.nusr")
            V, P = cache(f"inner_{k}.V.nusr"), cache(f"inner_{k}.P.nusr")
            hsupp = read_pairs(os.path.join(dirpath, f"inner_{k}.support.json"))
            inner = check_inner(rec, h, V, P, hsupp)
            # g = f(x) h(r x): entry r q + p is f_p h_q
            fd, hd = (prev_c.size - 1) // 2, (h.size - 1) // 2
            prod = np.zeros_like(c)
            q, p = np.meshgrid(np.arange(-hd, hd + 1), np.arange(-fd, fd + 1), indexing="ij")
            np.add.at(prod, (r * q + p + d).ravel(), np.outer(h, prev_c).ravel())
            prod_ok = c.size == 2 * (r * hd + fd) + 1 and bool(np.array_equal(prod, c))
            pad = np.zeros_like(c)
            pad[d - fd : d + fd + 1] = prev_c
            drift = float(np.abs(c - pad).max())
            sup_f = float(np.abs(prev_c).sum())
            partial = sup_f * inner["partial_sum_bound"]["recomputed"]
            want = intersect(prev_supp, preimage(hsupp, r))
            out.update({
                "inner": inner,
                "product_structure": prod_ok,
                "drift_max": {"manifest": man["drift_max"], "recomputed": drift, "limit": eps, "ok": drift < eps},
                "partial_sum_bound": {"manifest": man["partial_sum_bound"], "recomputed": partial,
                                      "limit": eps, "ok": partial < eps},
                "order_beyond_degree": rec["n"] > d,
                "order_exceeds_previous": rec["n"] > manifest["stages"][k - 2]["n"],
                "support_matches": want == supp,
                "support_nested": subset(supp, prev_supp),
                "support_shrinks": measure(supp) < measure(prev_supp),
            })
            flags = [inner["hhat0_exact"], inner["assembly_max_diff"]["ok"], inner["coef_max"]["ok"],
                     inner["partial_sum_bound"]["ok"], inner["order_beyond_degree"],
                     inner["order_in_sandwich"], inner["support_matches"], prod_ok,
                     out["drift_max"]["ok"], out["partial_sum_bound"]["ok"], out["order_beyond_degree"],
                     out["order_exceeds_previous"], out["support_matches"], out["support_nested"],
                     out["support_shrinks"]]
            ok = all(flags)
            slacks = [eps - drift, eps - partial,
                      inner["coef_max"]["limit"] - inner["coef_max"]["recomputed"],
                      inner["partial_sum_bound"]["limit"] - inner["partial_sum_bound"]["recomputed"]]
        out["ok"] = ok
        all_ok &= ok
        report["slack"][str(k)] = min(slacks) if slacks else None
        report["stages"].append(out)
        prev_c, prev_supp = c, supp

    K = len(manifest["stages"])
    for j in range(2, K + 1):
        supp = read_pairs(os.path.join(dirpath, f"stage_{j}.support.json"))
        xs = sample_points(supp)
        for k in range(1, j + 1):
            vals = spot_values(dirpath, manifest, j, k, xs, cache)
            target = 8 * 2.0**-k
            if vals is None:
                report["bounds"].append({"j": j, "k": k, "recomputed": None})
                continue
            top = float(np.abs(vals).max())
            row = {"j": j, "k": k, "recomputed_sample_max": top, "target": target, "ok": top <= target}
            if k == j:
                cert = report["stages"][j - 1]["partial_sum_bound"]["recomputed"]
                row["certified_bound"] = cert
                row["ok"] = row["ok"] and top <= cert
            all_ok &= row["ok"]
            report["bounds"].append(row)
    report["ok"] = bool(all_ok)
    return bool(all_ok), report
