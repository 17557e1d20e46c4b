"""``construct``: run the stage iteration and persist coefficients, supports and a manifest."""

import os
import time

from .. import __version__
from ..errors import CertificateError, NumericError, ResourceError
from ..fourier_core import PrecisionContext, nusr_bytes, support_json_bytes
from ..construction import initial_stage, measure_bounds, reduce_coeffs, stage_tolerance
from ..construction.iteration import ConstructionState
from .config import config_hash
from .jsonutil import dumps, plain, sha256_bytes

MANIFEST = "manifest.json"
TIMINGS = "timings.json"


class Writer:
    """Single funnel for every file a run writes; records hashes in write order."""

    def __init__(self, out):
        self.out = out
        self.files = {}
        os.makedirs(out, exist_ok=True)

    def write(self, name, data, record=True):
        if name in self.files:
            raise ValueError(f"{name} written twice")
        with open(os.path.join(self.out, name), "wb") as fh:
            fh.write(data)
        if record:
            self.files[name] = {"sha256": sha256_bytes(data), "bytes": len(data)}


def inner_record(h):
    """Layout and certificates of the inner stage function ``h`` (JSON-ready)."""
    c = h.certificates
    keys = ["coef_max", "coef_limit", "coef_slack", "partial_sum_bound", "partial_sum_limit",
            "partial_sum_slack", "normaliser", "fhat0", "sandwich", "block_min_gap",
            "piece_sups", "arc_sup", "P_sup"]
    return {"params": plain(h.params), "degree": h.degree,
            "certificates": {k: plain(c[k]) for k in keys}}


def stage_record(k, stage, eps):
    rec = {"k": k, "n": stage.n, "degree": stage.degree,
           "support_intervals": len(stage.supp),
           "support_measure": plain(stage.supp.measure()),
           "support_measure_float": float(stage.supp.measure())}
    if k == 1:
        rec["kind"] = "initial"
        return rec
    c = stage.certificates
    rec.update({
        "kind": "reduction",
        "eps": eps,
        "r": stage.params["r"],
        "inner_order": stage.params["m"],
        "certificates": plain({key: c[key] for key in [
            "drift_max", "drift_limit", "drift_slack", "partial_sum_bound", "partial_sum_limit",
            "partial_sum_slack", "sup_f_bound", "inner_eps", "support_nested", "support_shrinks",
            "ghat0", "order_exceeds_N_min"]}),
        "inner": inner_record(stage.blocks["h_stage"]),
    })
    return rec


def stage_passes(rec):
    if rec["k"] == 1:
        return True
    c, ic = rec["certificates"], rec["inner"]["certificates"]
    return (c["drift_max"] < c["drift_limit"] and c["partial_sum_bound"] < c["partial_sum_limit"]
            and c["support_nested"] and c["support_shrinks"] and c["order_exceeds_N_min"]
            and ic["coef_max"] < ic["coef_limit"] and ic["partial_sum_bound"] < ic["partial_sum_limit"])


def write_stage(writer, k, stage):
    writer.write(f"stage_{k}.nusr", nusr_bytes(stage.coeffs))
    writer.write(f"stage_{k}.support.json", support_json_bytes(stage.supp))
    if k > 1:
        h = stage.blocks["h_stage"]
        writer.write(f"inner_{k}.nusr", nusr_bytes(h.coeffs))
        writer.write(f"inner_{k}.support.json", support_json_bytes(h.supp))
        writer.write(f"inner_{k}.V.nusr", nusr_bytes(h.blocks["V"]))
        writer.write(f"inner_{k}.P.nusr", nusr_bytes(h.blocks["P"]))


def bounds_csv(table, K):
    lines = ["k,bound,measured"]
    for k in range(1, K + 1):
        row = table[(K, k)]
        lines.append(f"{k},{row['target']!r},{row['value']!r}")
    return ("\n".join(lines) + "\n").encode()


def run_construct(cfg, out):
    """Build ``cfg['stages']`` stages into ``out``; returns ``(status, manifest)``.

    ``status`` is ``"ok"``, ``"certificate_failure"`` or ``"resource_cap"``.
    """
    ctx = PrecisionContext(cfg["precision_bits"])
    writer = Writer(out)
    timings = {}
    state = ConstructionState([initial_stage()], canonical=cfg["eps_override"] is None)
    status, failure = "ok", None
    t0 = time.perf_counter()
    write_stage(writer, 1, state.current)
    records = [stage_record(1, state.current, None)]
    timings["stage_1"] = time.perf_counter() - t0
    for k in range(1, cfg["stages"]):
        t = time.perf_counter()
        f = state.current
        eps = stage_tolerance(k, f.n) if cfg["eps_override"] is None else float(cfg["eps_override"][k - 1])
        try:
            g = reduce_coeffs(f, eps, f.n + 1, cap=cfg["degree_cap"], observe=False, ctx=ctx)
        except ResourceError as err:
            status, failure = "resource_cap", {"stage": k + 1, "error": str(err), **plain(err.diagnostics)}
            break
        except (CertificateError, NumericError) as err:
            diag = getattr(err, "certificate", None) or getattr(err, "diagnostics", {})
            status, failure = "certificate_failure", {"stage": k + 1, "error": str(err), **plain(diag or {})}
            break
        state.stages.append(g)
        state.eps.append(eps)
        state.drift.append(g.certificates["drift_max"])
        write_stage(writer, k + 1, g)
        records.append(stage_record(k + 1, g, eps))
        timings[f"stage_{k + 1}"] = time.perf_counter() - t
    t = time.perf_counter()
    table = measure_bounds(state, grid_cap=cfg["observation_grid"])
    timings["measure_bounds"] = time.perf_counter() - t
    writer.write("bounds.csv", bounds_csv(table, state.k))
    table_json = [{"j": j, "k": k, **plain(v)} for (j, k), v in sorted(table.items())]
    certs_ok = all(stage_passes(r) for r in records) and all(
        v["telescoped_ok"] and v["target_ok"] for v in table.values()
    )
    if status == "ok" and not certs_ok:
        status = "certificate_failure"
    manifest = {
        "tool": "nullseries",
        "version": __version__,
        "config": cfg,
        "config_hash": config_hash(cfg),
        "canonical_schedule": state.canonical,
        "status": status,
        "failure": failure,
        "completed_stages": state.k,
        "orders": state.orders,
        "stages": records,
        "bound_table": table_json,
        "all_certificates_pass": certs_ok,
        "files": dict(sorted(writer.files.items())),
        "volatile_files": {TIMINGS: "wall-clock timings; excluded from hashing"},
    }
    writer.write(TIMINGS, dumps({"seconds": timings, "total": sum(timings.values())}).encode(), record=False)
    writer.write(MANIFEST, dumps(manifest).encode(), record=False)
    return status, manifest
