"""``nullseries`` command line: build-block, construct, analyze, verify, report.

Exit codes: 0 ok, 1 usage or configuration error, 2 certificate or
verification failure, 3 resource cap. Errors are also written to stderr as
one JSON object.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from .. import __version__
from ..errors import CertificateError, NullSeriesError, NumericError, ResourceError
from ..fourier_core import (
    CoeffSeq,
    IntervalUnion,
    PrecisionContext,
    read_nusr,
    read_support,
    write_nusr,
    write_support,
)
from .config import ConfigError, load_config_file, make_config
from .jsonutil import dumps, plain

EXIT_OK, EXIT_USAGE, EXIT_CERT, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def emit_error(kind, message, **diag):
    sys.stderr.write(json.dumps(plain({"error": kind, "message": message, "diagnostics": diag}), sort_keys=True) + "\n")


def write_json(path, obj):
    with open(path, "w") as fh:
        fh.write(dumps(obj))


def write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) + "\n")


# -- build-block -----------------------------------------------------------------
def cmd_build_block(args):
    from ..construction import build_f, build_h
    from ..smooth_builders import (
        build_arc_poly,
        build_gevrey_step,
        build_plateau,
        build_smooth_cutoff,
        build_window,
    )

    params = json.loads(args.params) if args.params else {}
    eps = args.eps if args.eps is not None else params.get("eps")
    ctx = PrecisionContext.from_env()
    os.makedirs(args.out, exist_ok=True)
    base = os.path.join(args.out, args.kind)
    coeffs, supp, summary, ok = None, None, {"kind": args.kind}, True

    def need_eps():
        if eps is None:
            raise UsageError(f"build-block {args.kind} needs --eps")
        return float(eps)

    if args.kind == "h":
        e = need_eps()
        h = build_h(e, ctx=ctx)
        coeffs, supp = h.coeffs, h.supp
        c = h.certificates
        in_half = IntervalUnion.interval(0, Fraction(1, 2)).contains(h.supp)
        ok = (c["hhat0"] == 1.0 and c["partial_sum_bound"] <= e and c["residual"] <= 1e-9 and in_half)
        summary.update(eps=e, m=h.m, degree=coeffs.degree, support_in_half=in_half, certificates=c)
    elif args.kind == "f":
        e = need_eps()
        f = build_f(e, spacing=params.get("spacing", "compact"), ctx=ctx)
        coeffs, supp = f.coeffs, f.supp
        c = f.certificates
        summary.update(eps=e, n=f.n, degree=f.degree, params=f.params, certificates=c,
                       support_intervals=len(f.supp), support_measure=float(f.supp.measure()))
        ok = c["coef_max"] < e and c["partial_sum_bound"] < e and c["fhat0"] == 1.0
    elif args.kind == "plateau":
        e = need_eps()
        coeffs, supp, cert = build_plateau(e)
        summary.update(eps=e, degree=coeffs.degree, certificates=cert)
        ok = cert["l1_defect"] <= e and cert["tail_l1_bound"] <= cert["tail_budget"]
    elif args.kind == "window":
        m, n = int(params.get("m", args.m or 1)), int(params.get("n", args.n or 0))
        win = build_window(m, n, rel_tail=float(params.get("rel_tail", 1e-3)))
        coeffs, supp = win.coeffs, win.window.support
        summary.update(m=m, n=n, degree=coeffs.degree, floor=win.floor, tail_bound=win.tail_bound)
        ok = win.floor > 0
    elif args.kind == "arc":
        e = need_eps()
        arc = build_arc_poly(e)
        coeffs = arc.coeffs
        summary.update(eps=e, n=arc.n, eps_arc=arc.eps_arc, lower_bound=arc.lower_bound,
                       method=arc.method, growth_constant=arc.growth_constant, certificate=arc.certificate)
        ok = arc.eps_arc < e
    elif args.kind == "gevrey":
        prof = build_gevrey_step(int(params.get("kmax", 8)))
        summary.update(C_psi=prof.C_psi, derivative_sups=list(prof.derivative_sups), smoothness=prof.smoothness)
    elif args.kind == "cutoff":
        try:
            a, b, margin = (Fraction(str(params[k])) for k in ("a", "b", "margin"))
        except KeyError as err:
            raise UsageError(f"cutoff needs a, b and margin in --params (missing {err})") from None
        cut = build_smooth_cutoff((a, b), margin, tol=float(params.get("tol", 1e-15)))
        coeffs, supp = cut.coeffs, cut.support
        summary.update(interval=[a, b], margin=margin, degree=coeffs.degree,
                       envelope=list(cut.envelope), tail=cut.tail)
    if coeffs is not None:
        write_nusr(base + ".nusr", coeffs)
    if supp is not None:
        write_support(base + ".support.json", supp)
    summary["certificates_pass"] = bool(ok)
    write_json(base + ".json", summary)
    sys.stdout.write(dumps(summary))
    return EXIT_OK if ok else EXIT_CERT


# -- construct / verify / report ---------------------------------------------------
def config_from_args(args):
    raw = load_config_file(args.config) if args.config else {"schema_version": 1}
    if args.stages is not None:
        raw["stages"] = args.stages
    if args.eps_override:
        raw["eps_override"] = [float(x) for x in args.eps_override.split(",")]
    if args.degree_cap is not None:
        raw["degree_cap"] = args.degree_cap
    if args.precision_bits is not None:
        raw["precision_bits"] = args.precision_bits
    elif "precision_bits" not in raw and "NULLSERIES_PRECISION" in os.environ:
        raw["precision_bits"] = int(os.environ["NULLSERIES_PRECISION"])
    return make_config(raw)


def cmd_construct(args):
    from .runner import run_construct

    cfg = config_from_args(args)
    status, manifest = run_construct(cfg, args.out)
    sys.stdout.write(dumps({"status": status, "completed_stages": manifest["completed_stages"],
                            "orders": manifest["orders"], "out": args.out}))
    if status == "resource_cap":
        emit_error("ResourceError", "stage exceeds the degree cap", **manifest["failure"])
        return EXIT_RESOURCE
    if status != "ok":
        emit_error("CertificateError", "stage certificates failed", failure=manifest["failure"])
        return EXIT_CERT
    return EXIT_OK


def cmd_verify(args):
    from .verify import verify_dir

    ok, report = verify_dir(args.dir)
    sys.stdout.write(dumps(report))
    if not ok:
        emit_error("VerificationError", "hash or certificate mismatch",
                   hashes=report["hashes"], hashes_ok=report["hashes_ok"])
        return EXIT_CERT
    return EXIT_OK


def cmd_report(args):
    with open(os.path.join(args.dir, "manifest.json")) as fh:
        man = json.load(fh)
    lines = [f"nullseries {man['version']}  status={man['status']}  stages={man['completed_stages']}",
             f"orders: {man['orders']}"]
    for rec in man["stages"]:
        line = f"stage {rec['k']}: n={rec['n']} degree={rec['degree']} support measure={rec['support_measure_float']:.6g}"
        if rec["k"] > 1:
            c = rec["certificates"]
            line += (f" drift={c['drift_max']:.3g}<{c['drift_limit']:.3g}"
                     f" partial={c['partial_sum_bound']:.3g}<{c['partial_sum_limit']:.3g}")
        lines.append(line)
    for row in man["bound_table"]:
        lines.append(f"max|S_n{row['k']}(f_{row['j']})| on supp = {row['value']:.4g} (target {row['target']:.4g})")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


# -- analyze -----------------------------------------------------------------------
def parse_scales(spec):
    """``dyadic:4:10``, ``triadic:1:10`` or a comma list of fractions."""
    from ..analysis import dyadic_scales, triadic_scales

    if spec.startswith(("dyadic:", "triadic:")):
        kind, lo, hi = spec.split(":")
        return (dyadic_scales if kind == "dyadic" else triadic_scales)(int(lo), int(hi))
    return [Fraction(s) for s in spec.split(",")]


def cmd_analyze(args):
    from .. import analysis as an

    out = args.out
    if out:
        os.makedirs(out, exist_ok=True)
    sub = args.what
    if sub == "thm3-root":
        root = an.thm3_root()
        sys.stdout.write(f"{root:.12f}\n")
        return EXIT_OK
    if sub == "thm3-exponent":
        d = np.linspace(0.0, 1.0, args.points)
        vals = an.thm3_exponent(d)
        if out:
            write_csv(os.path.join(out, "thm3_exponent.csv"), "x,value", zip(d.tolist(), vals.tolist()))
        sys.stdout.write(dumps({"root": an.thm3_root(), "phi0": float(vals[0]), "phi1": float(vals[-1])}))
        return EXIT_OK
    if sub == "thm2-rate":
        rep = an.thm2_rate([args.base**k for k in range(1, args.count + 1)])
        res = rep.to_dict()
        res["exponent_printed"] = f"{rep.exponent:.4f}"
        sys.stdout.write(dumps(res))
        return EXIT_OK
    if sub == "dimension":
        if args.cantor is not None:
            K = an.cantor_set(args.cantor)
        elif args.support:
            K = read_support(args.support)
        else:
            raise UsageError("dimension needs --cantor LEVEL or --support FILE")
        est = an.box_dimension(K, parse_scales(args.scales))
        if out:
            write_csv(os.path.join(out, "dimension.csv"), "scale,count",
                      ((float(s), n) for s, n in zip(est.scales, est.counts)))
        sys.stdout.write(dumps(est.to_dict()))
        return EXIT_OK
    if sub == "growth":
        c = read_nusr(args.coeffs)
        K = read_support(args.support)
        rep = an.growth_check(c, K, args.r, args.s)
        sys.stdout.write(dumps(rep.to_dict()))
        return EXIT_OK
    if sub == "support-detect":
        c = read_nusr(args.coeffs)
        orders = [int(x) for x in args.orders.split(",")]
        tau = [float(x) for x in args.tau.split(",")]
        rep = an.support_detect_report(c, orders, args.grid, tau)
        if out:
            write_support(os.path.join(out, "detected.support.json"), rep.detected)
        sys.stdout.write(dumps({"label": rep.label, "cells": rep.cells, "intervals": len(rep.detected),
                                "measure": float(rep.detected.measure()), "grid": rep.M,
                                "persistent_orders": rep.persistent_orders}))
        return EXIT_OK
    if sub in ("localisation", "rajchman"):
        c = read_nusr(args.coeffs)
        phi = read_nusr(args.cutoff)
        if sub == "localisation":
            rep = an.localisation_error_spectrum(c, phi, args.n)
            sys.stdout.write(dumps({"n": rep.n, "worst_slack": rep.worst_slack, "holds": rep.holds,
                                    "banded_vs_direct": rep.banded_vs_direct, "c_sup": rep.c_sup}))
            return EXIT_OK if rep.holds else EXIT_CERT
        orders = [int(x) for x in args.orders.split(",")]
        rows = [(n, an.rajchman_gap(c, phi, n).bound) for n in orders]
        if out:
            write_csv(os.path.join(out, "rajchman.csv"), "x,value", rows)
        sys.stdout.write(dumps({"orders": orders, "gaps": [g for _, g in rows]}))
        return EXIT_OK
    raise UsageError(f"unknown analysis {sub!r}")


# -- parser ------------------------------------------------------------------------
def build_parser():
    p = Parser(prog="nullseries", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    b = sub.add_parser("build-block", help="build one building block and write it as NUSR")
    b.add_argument("kind", choices=["h", "f", "plateau", "window", "arc", "gevrey", "cutoff"])
    b.add_argument("--eps", type=float)
    b.add_argument("--m", type=int)
    b.add_argument("--n", type=int)
    b.add_argument("--params", help="JSON object of extra parameters")
    b.add_argument("--out", default=".")
    b.set_defaults(func=cmd_build_block)

    c = sub.add_parser("construct", help="run the stage iteration")
    c.add_argument("--stages", type=int)
    c.add_argument("--config", help="RunConfig JSON file")
    c.add_argument("--eps-override", help="comma-separated tolerances (non-canonical run)")
    c.add_argument("--degree-cap", type=int)
    c.add_argument("--precision-bits", type=int)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_construct)

    a = sub.add_parser("analyze", help="measurements and exponent calculators")
    a.add_argument("what", choices=["thm3-root", "thm3-exponent", "thm2-rate", "dimension", "growth",
                                     "support-detect", "localisation", "rajchman"])
    a.add_argument("--out")
    a.add_argument("--points", type=int, default=1001)
    a.add_argument("--base", type=int, default=2)
    a.add_argument("--count", type=int, default=1024)
    a.add_argument("--cantor", type=int)
    a.add_argument("--support")
    a.add_argument("--scales", default="dyadic:4:10")
    a.add_argument("--coeffs")
    a.add_argument("--cutoff")
    a.add_argument("--r", type=int)
    a.add_argument("--s", type=int)
    a.add_argument("--n", type=int)
    a.add_argument("--orders")
    a.add_argument("--tau")
    a.add_argument("--grid", type=int, default=1 << 16)
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="re-verify a construct directory independently")
    v.add_argument("dir")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("report", help="summarise a construct directory")
    r.add_argument("dir")
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as err:
        emit_error("UsageError", str(err))
        return EXIT_USAGE
    except ConfigError as err:
        emit_error("ConfigError", str(err), path=err.path)
        return EXIT_USAGE
    except ResourceError as err:
        emit_error("ResourceError", str(err), **err.diagnostics)
        return EXIT_RESOURCE
    except (CertificateError, NumericError) as err:
        diag = getattr(err, "diagnostics", None) or {"certificate": getattr(err, "certificate", None)}
        emit_error(type(err).__name__, str(err), **diag)
        return EXIT_CERT
    except (ValueError, FileNotFoundError, NullSeriesError) as err:
        emit_error(type(err).__name__, str(err))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
