"""Command-line interface: `plasmasym {catalog,eval,verify,orbit,reduce}`.

Exit status is 0 when every check passes, 1 when a check fails and 2 on a
usage error. Reports are JSON with sorted keys and a schema_version field.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys

import numpy as np

from . import gss as G
from . import liouville as L
from . import vortex as V
from .expr import DomainError, ParseError, sym
from .expr.sampling import DEFAULT_SEED
from .suites import SCHEMA_VERSION, SUITES, SuiteConfig, harris_static, run

SEED_ENV = "PLASMASYM_SEED"


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer")


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def parse_params(items) -> dict:
    out = {}
    for item in items or []:
        for part in item.split(","):
            if not part.strip():
                continue
            key, sep, val = part.partition("=")
            if not sep:
                raise UsageError(f"parameter {part!r} is not key=value")
            try:
                out[key.strip()] = float(val)
            except ValueError:
                raise UsageError(f"parameter {key}: {val!r} is not a number")
    return out


def parse_grid(text: str):
    try:
        axes = [tuple(a.split(":")) for a in text.split(",")]
        (x0, x1, nx), (y0, y1, ny) = axes
        xs = np.linspace(float(x0), float(x1), int(nx))
        ys = np.linspace(float(y0), float(y1), int(ny))
    except ValueError:
        raise UsageError(f"grid {text!r} must look like x0:x1:nx,y0:y1:ny")
    if len(xs) < 1 or len(ys) < 1:
        raise UsageError("grid needs at least one point per axis")
    return xs, ys


def dump(obj, path=None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def write_csv(path, header, columns):
    rows = np.column_stack(columns)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow(["nan" if not np.isfinite(v) else repr(float(v)) for v in row])


# -------------------------------------------------------------- solutions


def plasma_named():
    return {
        "harris_static": harris_static,
        "traveling_waves": lambda: V.partial_symmetry_solutions("traveling_waves", n=1)[0],
        "spiral": lambda: V.partial_symmetry_solutions("spiral", n=1)[0],
        "shear": lambda: V.partial_symmetry_solutions("shear", n=1)[0],
        "x4_invariant": lambda: V.x4_invariant_solutions("r^2*t", f"r^2*t^({V.v0_exponent(2)!r})"),
    }


def resolve_solution(name, params):
    if name in L.CATALOG:
        try:
            return L.catalog(name, check=False, **params)
        except (KeyError, ValueError) as e:
            raise UsageError(str(e).strip("'\""))
    named = plasma_named()
    if name in named:
        if params:
            raise UsageError(f"{name} takes no parameters")
        return named[name]()
    raise UsageError(f"unknown solution {name!r}; known: {', '.join(list(L.CATALOG) + list(named))}")


def safe_evaluate(sol, pts, mask):
    """Field values on masked points; a point raising DomainError becomes nan."""
    n = mask.size
    out = {k: np.full(n, np.nan, complex) for k in sol.fields}
    idx = np.nonzero(mask)[0]
    try:
        vals = sol.evaluate({k: v[idx] for k, v in pts.items()})
        for k in out:
            out[k][idx] = vals[k]
    except DomainError:
        for i in idx:
            try:
                vals = sol.evaluate({k: v[i : i + 1] for k, v in pts.items()})
            except DomainError:
                continue
            for k in out:
                out[k][i] = vals[k][0]
    return out


# --------------------------------------------------------------- commands


def cmd_catalog(args):
    if args.json:
        sys.stdout.write(L.manifest() + "\n")
        return 0
    for name, e in L.CATALOG.items():
        params = ", ".join(f"{k}={v:g}" for k, v in e.defaults.items())
        print(f"{name:16s} gamma = {e.gamma:32s} {params}")
    for name in plasma_named():
        print(f"{name:16s} (two-field plasma solution)")
    return 0


def cmd_eval(args):
    sol = resolve_solution(args.solution, parse_params(args.params))
    xs, ys = parse_grid(args.grid)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    pts = {"x": X.ravel(), "y": Y.ravel()}
    timed = "t" in sol.box.ranges
    if timed:
        if args.t is None:
            raise UsageError(f"{sol.name} depends on t; pass --t")
        pts["t"] = np.full(X.size, float(args.t))
    with np.errstate(all="ignore"):
        excluded = sol.box.excluded(pts) if sol.box else np.zeros(X.size, bool)
        vals = safe_evaluate(sol, pts, ~excluded)
    cols = [pts["x"], pts["y"]] + ([pts["t"]] if timed else [])
    header = ["x", "y"] + (["t"] if timed else [])
    bad = excluded.copy()
    for k in sorted(vals):
        v = np.asarray(vals[k])
        if np.iscomplexobj(v):
            v = np.where(np.abs(v.imag) <= 1e-9 * (1 + np.abs(v.real)), v.real, np.nan)
        v = np.where(excluded, np.nan, v.astype(float))
        bad |= ~np.isfinite(v)
        header.append(k)
        cols.append(v)
    write_csv(args.out, header, cols)
    dump({"schema_version": SCHEMA_VERSION, "solution": sol.to_dict(), "cells": int(X.size), "nan_cells": int(bad.sum()), "out": args.out}, args.report)
    return 0


def cmd_verify(args):
    cfg = SuiteConfig(args.suite, args.seed, args.samples, args.tol, args.out)
    report = run(cfg)
    dump(report, args.out)
    if args.out:
        print(f"{report['n_checks'] - report['n_failed']}/{report['n_checks']} checks ok; report written to {args.out}", file=sys.stderr)
    return 0 if report["pass"] else 1


def _fd_laplacian_residual(gf, phi, lam, x, y, h=5e-3):
    """Liouville residual of the orbit by a fourth-order 9-point-per-axis stencil."""
    w = np.array([-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12]) / h**2
    offs = np.arange(-2, 3) * h
    lap = np.zeros_like(x)
    for c, o in zip(w, offs):
        lap += c * (L.orbit_values(gf, phi, lam, x + o, y) + L.orbit_values(gf, phi, lam, x, y + o))
    u = L.orbit_values(gf, phi, lam, x, y)
    e2u = np.exp(2 * u)
    return np.abs(lap + e2u) / (1 + np.maximum(np.abs(lap), e2u))


def cmd_orbit(args):
    if args.equation != "liouville":
        raise UsageError("only --equation liouville is supported")
    key, sep, expr = args.symmetry.partition("=")
    if key.strip() != "phi" or not sep:
        raise UsageError("--symmetry must look like phi=<expression in z>")
    phi = sym(expr)
    if phi.free_vars - {"z"}:
        raise UsageError("phi must depend on z only")
    if args.base not in L.CATALOG:
        raise UsageError(f"unknown base {args.base!r}")
    gf = L.CATALOG[args.base].generating_function(parse_params(args.params))
    xs, ys = parse_grid(args.grid)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    x, y = X.ravel(), Y.ravel()
    z = x + 1j * y
    with np.errstate(all="ignore"):
        w, _ = L.flow_map(phi, args.lam, z, gf.params)
        back, _ = L.flow_map(phi, -args.lam, w, gf.params)
        u = L.orbit_values(gf, phi, args.lam, x, y)
        bad = ~np.isfinite(u) | gf.excluded(w)
        u = np.where(bad, np.nan, u)
        round_trip = np.abs(back - z) / (1 + np.abs(z))
        round_trip = float(np.max(np.where(bad, 0, round_trip), initial=0.0))
        good = ~bad
        fd = _fd_laplacian_residual(gf, phi, args.lam, x[good][:50], y[good][:50]) if good.any() else np.zeros(0)
        fd_max = float(np.max(fd[np.isfinite(fd)], initial=0.0))
    write_csv(args.out, ["x", "y", "u"], [x, y, u])
    checks = [
        {"check": "flow round trip", "value": round_trip, "tol": 1e-9, "ok": round_trip <= 1e-9},
        {"check": "finite-difference Liouville residual", "value": fd_max, "tol": 1e-6, "ok": fd_max <= 1e-6},
    ]
    ok = all(c["ok"] for c in checks)
    dump({"schema_version": SCHEMA_VERSION, "base": args.base, "phi": expr.strip(), "lambda": args.lam, "nan_cells": int(bad.sum()), "checks": checks, "pass": ok}, args.report)
    return 0 if ok else 1


def cmd_reduce(args):
    key, sep, expr = args.ode.partition("=")
    if key.replace(" ", "") != "F(u)" or not sep:
        raise UsageError('--ode must look like "F(u)=<expression in u>"')
    F = sym(expr)
    if F.free_vars - {"u"}:
        raise UsageError("F must depend on u only")
    if args.smax <= 0:
        raise UsageError("--smax must be positive")
    try:
        e_phi, e_dphi, prof = G.quadrature_vs_rk(F, args.u0, args.p0, args.smax, args.n)
    except ValueError as e:
        raise UsageError(str(e))
    s, phi, dphi = prof.table(args.n)
    write_csv(args.out, ["s", "phi", "dphi"], [s, phi, dphi])
    err = max(e_phi, e_dphi)
    ok = err <= 1e-7
    dump(
        {
            "schema_version": SCHEMA_VERSION,
            "F": expr.strip(),
            "u0": args.u0,
            "p0": args.p0,
            "smax": args.smax,
            "turning_points": [[float(a), float(b)] for a, b in prof.switches],
            "checks": [{"check": "quadrature vs Runge-Kutta", "value": err, "tol": 1e-7, "ok": ok}],
            "pass": ok,
        },
        args.report,
    )
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plasmasym", description="Symmetry checks and exact solutions for plasma equilibrium equations.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", help="list named solutions")
    c.add_argument("action", choices=["list"])
    c.add_argument("--json", action="store_true", help="print the machine-readable manifest")
    c.set_defaults(func=cmd_catalog)

    e = sub.add_parser("eval", help="evaluate a solution on a grid")
    e.add_argument("--solution", required=True)
    e.add_argument("--params", action="append", help="k=v[,k=v...]")
    e.add_argument("--grid", required=True, help="x0:x1:nx,y0:y1:ny")
    e.add_argument("--t", type=float)
    e.add_argument("--out", required=True)
    e.add_argument("--report", help="summary JSON path (default stdout)")
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=list(SUITES) + ["all"], default="all")
    v.add_argument("--seed", type=int)
    v.add_argument("--samples", type=_positive_int)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("orbit", help="push a Liouville solution along a holomorphic symmetry")
    o.add_argument("--equation", default="liouville")
    o.add_argument("--symmetry", required=True, help="phi=<expression in z>")
    o.add_argument("--lambda", dest="lam", type=float, required=True)
    o.add_argument("--base", default="harris")
    o.add_argument("--params", action="append")
    o.add_argument("--grid", default="-1:1:21,-1:1:21")
    o.add_argument("--out", required=True)
    o.add_argument("--report")
    o.set_defaults(func=cmd_orbit)

    r = sub.add_parser("reduce", help="integrate the reduced ODE u_ss = F(u) by quadrature")
    r.add_argument("--ode", required=True, help='"F(u)=<expression>"')
    r.add_argument("--u0", type=float, required=True)
    r.add_argument("--p0", type=float, required=True)
    r.add_argument("--smax", type=float, required=True)
    r.add_argument("--n", type=_positive_int, default=201)
    r.add_argument("--out", required=True)
    r.add_argument("--report")
    r.set_defaults(func=cmd_reduce)
    return p


GLUED = ("--grid", "--params")


def _glue(argv):
    """`--grid -3:3:61,...` would read as an option; pass such values inline."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in GLUED:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue(sys.argv[1:] if argv is None else list(argv)))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        if getattr(args, "seed", "absent") is None:
            args.seed = _default_seed()
        return args.func(args)
    except (UsageError, ParseError) as e:
        print(f"plasmasym: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
