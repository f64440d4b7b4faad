"""Command-line front end.

Subcommands: verify, transfer, charpoly, dump, lyapunov, ldt, localize,
green, suite.  All write into --out (overridden by the CMVLAB_OUT
environment variable) with deterministic formatting: identical arguments,
configuration and seed give byte-identical files at any --threads value.

Exit codes: 0 success, 1 check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import kernels
from .acceptance import run_all
from .cmv import MatrixKind, build_aux_p, build_restriction
from .cocycle import m_transfer, transfer
from .coefficients import (
    ConstantSequence,
    ExplicitSequence,
    QuasiPeriodicFamily,
    QuasiPeriodicSequence,
    RandomSequence,
    TrigPhase,
)
from .determinants import charpoly_coeffs
from .dynamics import diophantine_check, ldt_empirical, lyapunov_n
from .identities import run_identity_suite
from .reporting import fmt_float, resolve_out_dir, write_csv, write_json
from .spectral import green_column, localize

KIND_NAMES = {
    "C": MatrixKind.HALF_LINE,
    "E": MatrixKind.EXTENDED,
    "C'": MatrixKind.HALF_LINE_PRIMED,
    "E'": MatrixKind.EXTENDED_PRIMED,
    "P": MatrixKind.AUX_P,
    "P'": MatrixKind.AUX_P_PRIMED,
}


def _complex_from(data):
    if isinstance(data, (list, tuple)):
        return complex(data[0], data[1])
    return complex(data)


def parse_phase(data) -> TrigPhase:
    if data is None:
        return TrigPhase()
    return TrigPhase(winding=int(data.get("winding", 1)),
                     cos_coeffs=tuple(data.get("cos", ())),
                     sin_coeffs=tuple(data.get("sin", ())))


def parse_sequence(record):
    """Sequence from its tagged config record."""
    kind = record.get("kind")
    if kind == "constant":
        return ConstantSequence(_complex_from(record["alpha"]))
    if kind == "explicit":
        values = [_complex_from(v) for v in record["values"]]
        negative = [_complex_from(v) for v in record.get("negative", ())]
        return ExplicitSequence(values, negative=negative)
    if kind == "random":
        return RandomSequence(int(record["seed"]), float(record["radius"]))
    if kind == "quasiperiodic":
        return QuasiPeriodicSequence(
            float(record["lambda"]), float(record["omega"]),
            float(record.get("x", 0.0)), parse_phase(record.get("h")))
    raise ValueError(f"unknown sequence kind {kind!r}")


def _load_config(path):
    with open(path) as fh:
        return json.load(fh)


def _seq_from_args(args):
    cfg = _load_config(args.seq)
    return parse_sequence(cfg.get("sequence", cfg))


def _family_from_args(args) -> QuasiPeriodicFamily:
    h = TrigPhase()
    if args.h_coeffs:
        spec = json.loads(args.h_coeffs)
        h = parse_phase(spec)
    return QuasiPeriodicFamily(args.lam, args.omega, h)


def _z_grid(args):
    if getattr(args, "z_thetas", None):
        return [float(t) for t in args.z_thetas.split(",")]
    lo, hi = 0.0, 2.0 * math.pi
    if getattr(args, "z_arc", None):
        lo, hi = (float(t) for t in args.z_arc.split(","))
        return list(np.linspace(lo, hi, args.z_grid))
    return [lo + (hi - lo) * k / args.z_grid for k in range(args.z_grid)]


def cmd_verify(args) -> int:
    out = resolve_out_dir(args.out)
    summaries = run_identity_suite(seed=args.seed, cases=args.cases,
                                   threads=args.threads)
    report = {
        "seed": args.seed,
        "cases": args.cases,
        "kernel_backend": kernels.BACKEND,
        "checks": [s.as_dict() for s in summaries],
        "all_pass": all(s.passed for s in summaries),
    }
    write_json(out / "verify_report.json", report)
    for s in summaries:
        print(f"[{'PASS' if s.passed else 'FAIL'}] {s.check}: "
              f"max residual {s.max_residual:.3e} (tol {s.tolerance:g}, "
              f"{s.cases} cases)")
    print(f"report: {out / 'verify_report.json'}")
    return 0 if report["all_pass"] else 1


def cmd_transfer(args) -> int:
    out = resolve_out_dir(args.out)
    seq = _seq_from_args(args)
    z = complex(math.cos(args.z_theta), math.sin(args.z_theta))
    t = (m_transfer if args.normalized else transfer)(seq, args.n, z)
    arr = t.to_array()
    report = {
        "n": args.n,
        "z_theta": args.z_theta,
        "normalized": bool(args.normalized),
        "entries": [[arr[0, 0], arr[0, 1]], [arr[1, 0], arr[1, 1]]],
        "det": t.det(),
    }
    write_json(out / "transfer.json", report)
    print(json.dumps({"det": [t.det().real, t.det().imag]}))
    print(f"report: {out / 'transfer.json'}")
    return 0


def _restriction_from_args(args, seq):
    kind = KIND_NAMES[args.kind]
    if kind.is_aux:
        return build_aux_p(seq, args.b + 1, primed=kind.primed)
    return build_restriction(seq, kind, args.a, args.b)


def cmd_charpoly(args) -> int:
    out = resolve_out_dir(args.out)
    seq = _seq_from_args(args)
    m = _restriction_from_args(args, seq)
    poly = charpoly_coeffs(m)
    report = {
        "kind": args.kind,
        "window": [args.a, args.b],
        "coefficients": poly.to_json(),
    }
    write_json(out / "charpoly.json", report)
    print(f"degree {poly.nominal_degree} -> {out / 'charpoly.json'}")
    return 0


def cmd_dump(args) -> int:
    out = resolve_out_dir(args.out)
    seq = _seq_from_args(args)
    m = _restriction_from_args(args, seq)
    rows = []
    for i in range(m.a, m.b + 1):
        for j in range(max(m.a, i - 2), min(m.b, i + 2) + 1):
            v = m.entry(i, j)
            rows.append((i, j, v.real, v.imag))
    path = out / "matrix.csv"
    write_csv(path, ["row", "col", "re", "im"], rows)
    print(f"{len(rows)} in-band entries -> {path}")
    return 0


def cmd_lyapunov(args) -> int:
    out = resolve_out_dir(args.out)
    family = _family_from_args(args)
    schedule = [int(n) for n in args.n_schedule.split(",")]
    thetas = _z_grid(args)
    rows = []
    summary = []
    for theta in thetas:
        z = complex(math.cos(theta), math.sin(theta))
        per_n = []
        for n in schedule:
            est = lyapunov_n(family, n, z, args.x_grid, args.threads)
            rows.append((theta, n, est.value))
            per_n.append({"n": n, "value": est.value})
        summary.append({
            "z_theta": theta,
            "table": per_n,
            "min": min(p["value"] for p in per_n),
            "last": per_n[-1]["value"],
        })
    write_csv(out / "lyapunov.csv", ["theta_z", "n", "L_n"], rows)
    write_json(out / "lyapunov.json", {
        "lambda": args.lam, "omega": args.omega,
        "x_grid": args.x_grid, "schedule": schedule,
        "kernel_backend": kernels.BACKEND,
        "results": summary,
    })
    print(f"{len(rows)} rows -> {out / 'lyapunov.csv'}")
    return 0


def cmd_ldt(args) -> int:
    out = resolve_out_dir(args.out)
    family = _family_from_args(args)
    thetas = _z_grid(args)
    schedule = [int(n) for n in args.n_schedule.split(",")]
    rows = []
    for theta in thetas:
        z = complex(math.cos(theta), math.sin(theta))
        for n in schedule:
            rep = ldt_empirical(family, n, z, args.sigma, args.x_grid,
                                args.threads)
            rows.append((theta, n, rep.mean, rep.threshold,
                         rep.violating_fraction, rep.bound))
    write_csv(out / "ldt.csv",
              ["theta_z", "n", "L_n", "threshold", "violating_fraction",
               "asymptotic_bound"], rows)
    dio = diophantine_check(args.omega, c=1e-3, a=2.0, k_max=10_000)
    write_json(out / "ldt.json", {
        "lambda": args.lam, "omega": args.omega, "sigma": args.sigma,
        "diophantine_ok": dio.passes,
        "rows": len(rows),
    })
    print(f"{len(rows)} rows -> {out / 'ldt.csv'}")
    return 0


def cmd_localize(args) -> int:
    out = resolve_out_dir(args.out)
    family = _family_from_args(args)
    rep = localize(family, args.size, x0=args.x, threads=args.threads,
                   modulus_min=args.modulus_min)
    rows = []
    for f in rep.decay_fits:
        theta = math.atan2(f.eigenvalue.imag, f.eigenvalue.real) % (2 * math.pi)
        rows.append((theta, f.modulus, f.peak,
                     f.rate if f.ok else float("nan"),
                     f.r2 if f.ok else float("nan")))
    write_csv(out / "localize.csv",
              ["eigenvalue_theta", "modulus", "peak", "rate", "r2"], rows)
    usable = [f for f in rep.decay_fits
              if f.ok and f.modulus >= args.modulus_min and f.matched_exponent]
    summary = {
        "size": args.size, "lambda": args.lam, "omega": args.omega,
        "fits": len(usable),
        "median_r2": float(np.median([f.r2 for f in usable])) if usable else None,
        "median_rate": float(np.median([f.rate for f in usable])) if usable else None,
        "median_rate_over_exponent":
            float(np.median([f.rate / f.matched_exponent for f in usable]))
            if usable else None,
        "max_eig_residual": rep.max_residual(),
    }
    write_json(out / "localize.json", summary)
    print(f"{len(rows)} eigenpairs -> {out / 'localize.csv'}")
    return 0


def cmd_green(args) -> int:
    out = resolve_out_dir(args.out)
    seq = _seq_from_args(args)
    m = build_restriction(seq, KIND_NAMES[args.kind], args.a, args.b)
    z = args.z_radius * complex(math.cos(args.z_theta), math.sin(args.z_theta))
    rows = []
    mags = {}
    for n2 in range(m.a, m.b + 1):
        col = green_column(m, z, n2)
        for n1 in range(m.a, m.b + 1):
            g = col[n1 - m.a]
            rows.append((n1, n2, abs(g)))
            mags.setdefault(abs(n1 - n2), []).append(abs(g))
    write_csv(out / "green.csv", ["n1", "n2", "abs_g"], rows)
    # decay exponent from log-mean magnitude against separation
    ds = sorted(d for d in mags if d > 0)
    fit = None
    if len(ds) >= 4:
        xs = np.array(ds, dtype=float)
        ys = np.array([math.log(np.mean(mags[d])) for d in ds])
        design = np.vstack([xs, np.ones_like(xs)]).T
        coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
        fit = -float(coef[0])
    write_json(out / "green.json", {
        "window": [args.a, args.b],
        "z_theta": args.z_theta, "z_radius": args.z_radius,
        "decay_exponent": fit,
    })
    print(f"{len(rows)} entries -> {out / 'green.csv'}")
    return 0


def cmd_suite(args) -> int:
    out = resolve_out_dir(args.out)
    report, results = run_all(seed=args.seed, threads=args.threads)
    write_json(out / "suite_report.json", report)
    print(f"report: {out / 'suite_report.json'}")
    print(f"{'ALL PASS' if report['all_pass'] else 'FAILURES PRESENT'}")
    return 0 if report["all_pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cmvlab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, threads=True):
        sp.add_argument("--out", default=".", help="output directory")
        if threads:
            sp.add_argument("--threads", type=int, default=1)

    sp = sub.add_parser("verify", help="run the randomized identity suite")
    sp.add_argument("--seed", type=int, default=7)
    sp.add_argument("--cases", type=int, default=200)
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("transfer", help="n-step transfer matrix at z")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--z-theta", type=float, required=True)
    sp.add_argument("--seq", required=True, help="sequence config JSON")
    sp.add_argument("--normalized", action="store_true",
                    help="unit-determinant normalization")
    common(sp, threads=False)
    sp.set_defaults(fn=cmd_transfer)

    sp = sub.add_parser("charpoly", help="characteristic polynomial of a window")
    sp.add_argument("--seq", required=True)
    sp.add_argument("--kind", choices=sorted(KIND_NAMES), default="C")
    sp.add_argument("--a", type=int, default=0)
    sp.add_argument("--b", type=int, required=True)
    common(sp, threads=False)
    sp.set_defaults(fn=cmd_charpoly)

    sp = sub.add_parser("dump", help="dump window entries as CSV")
    sp.add_argument("--seq", required=True)
    sp.add_argument("--kind", choices=sorted(KIND_NAMES), default="C")
    sp.add_argument("--a", type=int, default=0)
    sp.add_argument("--b", type=int, required=True)
    common(sp, threads=False)
    sp.set_defaults(fn=cmd_dump)

    def dyn_common(sp):
        sp.add_argument("--lambda", dest="lam", type=float, required=True)
        sp.add_argument("--omega", type=float, required=True)
        sp.add_argument("--h-coeffs", default=None,
                        help='phase function JSON, e.g. {"winding":1,"sin":[0.2]}')
        sp.add_argument("--n-schedule", default="50,100,200")
        sp.add_argument("--z-grid", type=int, default=8)
        sp.add_argument("--z-thetas", default=None,
                        help="explicit comma-separated angles (overrides --z-grid)")
        sp.add_argument("--z-arc", default=None,
                        help="lo,hi angles: place the grid on a compact arc")
        sp.add_argument("--x-grid", type=int, default=256)
        common(sp)

    sp = sub.add_parser("lyapunov", help="finite-n Lyapunov exponents")
    dyn_common(sp)
    sp.set_defaults(fn=cmd_lyapunov)

    sp = sub.add_parser("ldt", help="empirical large-deviation statistics")
    dyn_common(sp)
    sp.add_argument("--sigma", type=float, default=0.3)
    sp.set_defaults(fn=cmd_ldt)

    sp = sub.add_parser("localize", help="eigenfunction decay experiment")
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--omega", type=float, required=True)
    sp.add_argument("--h-coeffs", default=None)
    sp.add_argument("--size", type=int, default=200)
    sp.add_argument("--x", type=float, default=0.0)
    sp.add_argument("--modulus-min", type=float, default=0.99)
    common(sp)
    sp.set_defaults(fn=cmd_localize)

    sp = sub.add_parser("green", help="resolvent entries of a window")
    sp.add_argument("--seq", required=True)
    sp.add_argument("--kind", choices=["C", "E"], default="C")
    sp.add_argument("--a", type=int, default=0)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--z-theta", type=float, required=True)
    sp.add_argument("--z-radius", type=float, default=1.0)
    common(sp, threads=False)
    sp.set_defaults(fn=cmd_green)

    sp = sub.add_parser("suite", help="run the acceptance criteria")
    sp.add_argument("--seed", type=int, default=7)
    common(sp)
    sp.set_defaults(fn=cmd_suite)

    return p


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.fn(args)
    except (ValueError, IndexError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
