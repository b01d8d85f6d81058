"""Verification suites grouped by acceptance criterion.

Every entry is a plain dict with at least `check`, `ok` and `criterion`; the
CLI serializes them and the acceptance test reads them back.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import gss as G
from . import liouville as L
from . import vortex as V
from .expr import sym
from .expr.sampling import DEFAULT_SEED, scaled_difference
from .lie import ResidualReport, consistency_report, identity_check, infinitesimal_symmetry_check, partial_symmetry_check, worst
from .lie.checks import flow_orbit_check
from .systems import constraint_u_lap_u, liouville, plasma

SCHEMA_VERSION = 1
SUITES = ("liouville", "vortex", "gss")


@dataclass
class SuiteConfig:
    suite: str = "all"
    seed: int = DEFAULT_SEED
    samples: int | None = None
    tol: float = 1e-9
    out: str | None = None

    def n(self, default: int) -> int:
        return self.samples if self.samples is not None else default

    def echo(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "samples": self.samples, "tol": self.tol}


@dataclass
class Check:
    """A scalar check that is not a residual over samples."""

    check: str
    ok: bool
    value: float
    tol: float
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {"check": self.check, "ok": bool(self.ok), "value": _num(self.value), "tol": self.tol, "detail": self.detail}


def _num(v):
    v = float(v)
    return v if math.isfinite(v) else repr(v)


def entry(criterion: str, r) -> dict:
    d = r.to_dict()
    d["criterion"] = criterion
    return d


# ----------------------------------------------------------------- liouville


def deformed_harris_flow(sol, lam):
    """Harris pushed along phi = z^2 for time lam: g(z/(1 - lam z))."""
    gf = L.CATALOG["harris"].generating_function()
    new = L.compose_gamma(gf, sym("z/(1 - lam*z)"), name="harris@z^2", params={"lam": lam})
    out = L.solution_from_gamma(new, check=False)
    out.name = f"harris_z2({lam})"
    return out


def ode_orbit_agreement(lam, n=100, seed=DEFAULT_SEED, tol=1e-9) -> ResidualReport:
    """ODE-integrated flow of z^2 on Harris against the closed-form family."""
    closed = L.catalog("deformed_harris", check=False, lam=lam)
    pts = closed.sample(n, seed)
    (u,) = closed.evaluate(pts).values()
    u_ode = L.orbit_values(L.CATALOG["harris"].generating_function(), sym("z^2"), lam, pts["x"], pts["y"])
    res = scaled_difference(np.real(u), u_ode)
    return ResidualReport(f"orbit-ode:z^2@{lam}", seed, tol, res, worst(res, pts))


def liouville_suite(cfg: SuiteConfig) -> list[dict]:
    seed, tol = cfg.seed, cfg.tol
    out = []
    sys = liouville(+1)
    for name in L.catalog_names():
        sol = L.catalog(name, check=False)
        out.append(entry("1", sol.residual_report(sys, cfg.n(100), seed, tol, check=f"liouville:{name}")))
    for name in L.catalog_names():
        entry_ = L.CATALOG[name]
        gf = entry_.generating_function()
        sol = L.catalog(name, check=False)
        out.append(entry("2", L.invariance_check(gf, sol, cfg.n(100), seed, tol)))
    for k in (0.5, 1.0, 5.0):
        res = L.normalization_integral(L.catalog("bennet", check=False, k=k))
        err = abs(res.value - 4 * math.pi)
        out.append(entry("3", Check(f"normalization:bennet(k={k})", err <= 1e-6, err, 1e-6, {"value": res.value})))
    h = L.normalization_integral(L.catalog("harris", check=False))
    out.append(entry("3", Check("normalization:harris diverges", h.divergent, h.annuli[-1], 0.0, {"annuli": h.annuli})))
    for r in L.variant_equation_checks(cfg.n(100), seed, tol):
        out.append(entry("extra", r))
    harris = L.catalog("harris", check=False)
    out.append(entry("6", flow_orbit_check(deformed_harris_flow, harris, sys, (0.1, 0.3), cfg.n(100), seed, tol, check="orbit:harris z^2")))
    out.append(entry("6", identity_check(deformed_harris_flow, harris, cfg.n(100), seed)))
    for lam in (0.1, 0.3):
        out.append(entry("6", ode_orbit_agreement(lam, cfg.n(100), seed, tol)))
    return out


# -------------------------------------------------------------------- vortex


def harris_static():
    return V.plasma_solution("harris_static", sym("-ln(cosh(x))"), sym("0"))


def vortex_suite(cfg: SuiteConfig) -> list[dict]:
    seed, tol = cfg.seed, cfg.tol
    sys = plasma()
    out = [entry("4", consistency_report(sys, cfg.n(200), seed))]
    for g in V.point_generators():
        out.append(entry("4", infinitesimal_symmetry_check(g, sys, cfg.n(200), seed, tol, check=f"point:{g.name}")))
    for g in V.negative_controls():
        out.append(
            entry("4", infinitesimal_symmetry_check(g, sys, cfg.n(200), seed, tol, check=f"negative:{g.name}", expect_fail=True, fail_threshold=1e-3))
        )
    for label, got, want in V.commutator_table():
        out.append(entry("5", Check(f"commutator:{label}", V.fields_equal(got, want, tol=1e-10, seed=seed), 0.0, 1e-10)))
    x1, x2, x4 = (V.build_generator(n) for n in ("X1", "X2", "X4"))
    out.append(entry("5", Check("jacobi:X1,X2,X4", V.fields_equal(V.jacobi(x1, x2, x4), V.zero_field(), tol=1e-10, seed=seed), 0.0, 1e-10)))
    base = harris_static()
    out.append(entry("6", flow_orbit_check(V.x4_rotation, base, sys, (0.5, 1.0), cfg.n(100), seed, tol, check="orbit:x4 rotation")))
    out.append(entry("6", identity_check(V.x4_rotation, base, cfg.n(100), seed)))
    frame = V.moving_frame_transform(base, "sin(t)", "t^2")
    out.append(entry("6", frame.residual_report(sys, cfg.n(100), seed, tol, check="moving frame:harris_static")))
    for a in (1, 2, 3):
        V0 = f"r^{a}*t^({V.v0_exponent(a)!r})"
        r1, r2 = V.x4_linear_checks("r^2*t", V0, cfg.n(100), seed, tol)
        out += [entry("7", r1), entry("7", r2)]
        sol = V.x4_invariant_solutions("r^2*t", V0, tol)
        out.append(entry("7", sol.residual_report(sys, cfg.n(100), seed, tol, check=f"x4-invariant:a={a}")))
        out.append(entry("7", V.invariance_report(x4, sol, cfg.n(100), seed, tol)))
    eq, rule = constraint_u_lap_u()
    part = partial_symmetry_check(V.scaling_u(), sys, [eq], [rule], cfg.n(200), seed, tol)
    out += [entry("8", part["on_subset"]), entry("8", part["off_subset"])]
    for name in V.ELEMENTARY:
        _, red, full = V.partial_symmetry_solutions(name, cfg.n(100), seed, tol)
        out += [entry("8", red), entry("8", full)]
    reports, rogue = V.truncated_system_check(cfg.n(200), seed, tol)
    out += [entry("8", r) for r in reports] + [entry("8", rogue)]
    canon = V.canonical_reduction("cos(t)", "sin(t)", "s^2", "s^2/2")
    out.append(entry("extra", canon.residual_report(sys, cfg.n(100), seed, tol, check="canonical:cos,sin")))
    a = V.combined_symmetry_ansatz("t_plus_XH", cfg.n(100), seed, tol, T="t^3", U="1", V="2")
    out += [entry("extra", a.reduced), entry("extra", a.invariance), entry("extra", a.system)]
    a = V.combined_symmetry_ansatz("t_plus_XAB", cfg.n(100), seed, tol, A="cos(t)", B="sin(t)", alpha="sin(t)", beta="-cos(t)", U="-ln(cosh(x))", V="0")
    out += [entry("extra", a.invariance), entry("extra", a.system)]
    out.append(entry("extra", V.contact_check(math.sqrt(2), 1.0, form="exp_sin", n=cfg.n(100), seed=seed, tol=tol)))
    return out


# ----------------------------------------------------------------------- gss

CLASSIFICATION = (
    ("a", {"q": -2, "p": 1, "a": -1}),
    ("a'", {"c": 1.0, "c1": 1.0, "c2": 1.0, "p": 1, "q": 1}),
    ("b", {"p": 1, "a": -1}),
    ("c", {"a": -1, "F": "u^3"}),
    ("laplace_power", {"k": 3}),
)

REDUCTIONS = ((1.0, -1.0, 1.0), (2.0, 1.0, -1.0))


def gss_suite(cfg: SuiteConfig) -> list[dict]:
    seed, tol = cfg.seed, cfg.tol
    out = []
    for name, params in CLASSIFICATION:
        out.append(entry("9", G.verify_classification_case(name, cfg.n(200), seed, tol, **params)))
        out += [entry("9", r) for r in G.classification_negatives(name, cfg.n(200), seed, **params)]
    ys, xs = G.kernel_check(5, cfg.n(200), seed)
    out += [entry("9", r) for r in ys + xs]
    for F, u0, p0, smax in G.QUADRATURE_CASES:
        e_phi, e_dphi, prof = G.quadrature_vs_rk(F, u0, p0, smax)
        err = max(e_phi, e_dphi)
        out.append(entry("9", Check(f"quadrature-vs-rk:{F}", err <= 1e-7, err, 1e-7, {"switches": len(prof.switches)})))
        for k, p, a in REDUCTIONS:
            cr = G.conditional_reduction(k, p, a, F)
            out.append(entry("9", cr.lifted_residual(prof, cfg.n(100), seed, tol)))
    cr = G.conditional_reduction(1, -1, 1, "u")
    out.append(entry("9", cr.lift_solution("cosh(s)").residual_report(cr.equation.system(), cfg.n(100), seed, tol, check="lift:cosh(ln x - y)")))
    w = G.worked_cylindrical_solution(2.0, 1.0)
    out.append(entry("10", w.solution.residual_report(w.equation.system(), cfg.n(100), seed, 1e-12, check="worked:u=x^4")))
    out.append(entry("10", Check("worked:pressure(x0)=0", w.pressure(w.x0) == 0, float(w.pressure(w.x0)), 0.0)))
    out.append(entry("10", Check("worked:I^2(x0)=0", w.current_sq(w.x0) == 0, float(w.current_sq(w.x0)), 0.0)))
    i0 = float(w.current_sq(0.0))
    out.append(entry("10", Check("worked:I^2(0)=8", abs(i0 - 8) <= 1e-12, i0, 1e-12)))
    return out


RUNNERS = {"liouville": liouville_suite, "vortex": vortex_suite, "gss": gss_suite}


def run(cfg: SuiteConfig) -> dict:
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    entries = []
    for name in names:
        for e in RUNNERS[name](cfg):
            e["suite"] = name
            entries.append(e)
    ok = all(e["ok"] for e in entries)
    return {"schema_version": SCHEMA_VERSION, "config": cfg.echo(), "pass": ok, "n_checks": len(entries), "n_failed": sum(not e["ok"] for e in entries), "checks": entries}


__all__ = ["SuiteConfig", "Check", "run", "SUITES", "SCHEMA_VERSION", "liouville_suite", "vortex_suite", "gss_suite", "deformed_harris_flow"]
