"""Generating-function solutions of the elliptic Liouville equation lap u + e^{2u} = 0.

u = ln(2|g'(z)| / (1 + |g(z)|^2)) with z = x + iy for a holomorphic g, or
equivalently u = -ln(cosh(Re b) / |b'(z)|) with g = exp(b).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .expr import (
    Box,
    DomainError,
    Expr,
    I,
    Tape,
    Var,
    add,
    as_expr,
    call,
    differentiate,
    div,
    mul,
    power,
    simplify,
    substitute,
    sym,
    to_infix,
)
from .expr.sampling import DEFAULT_SEED, scaled_difference
from .lie.report import ResidualReport, worst
from .solution import ClosedFormSolution
from .systems import liouville

Z = Var("z")
X, Y = Var("x"), Var("y")
ZXY = add(X, mul(I, Y))
SAFETY = 0.05


def safe_values(e: Expr, env: dict, n: int) -> np.ndarray:
    """Evaluate e pointwise, returning nan where evaluation leaves the domain."""
    try:
        (v,) = Tape([e]).run(env)
        return np.broadcast_to(np.asarray(v, complex), (n,)).copy()
    except DomainError:
        out = np.full(n, np.nan + 0j)
        for i in range(n):
            pt = {k: (np.asarray(v)[i] if np.ndim(v) else v) for k, v in env.items()}
            try:
                out[i] = complex(Tape([e]).run(pt)[0])
            except DomainError:
                pass
        return out


def near(points, eps=SAFETY):
    """Exclusion: z within eps of any of the given complex points."""
    pts = [complex(p) for p in points]
    return lambda z: np.any([np.abs(z - p) < eps for p in pts], axis=0) if pts else np.zeros(np.shape(z), bool)


def outside_disk(radius):
    return lambda z: np.abs(z) > radius


@dataclass
class GeneratingFunction:
    """A holomorphic g(z) with bound parameters and an excluded set.

    `exclusions` are predicates on complex z arrays (True = excluded). Points
    where g or g' cannot be evaluated, or where |g'| < eps, are always excluded.
    """

    gamma: Expr
    params: dict = field(default_factory=dict)
    exclusions: list = field(default_factory=list)
    name: str = ""
    eps: float = 1e-6

    def __post_init__(self):
        self.gamma = simplify(as_expr(self.gamma))

    @property
    def derivative(self) -> Expr:
        return differentiate(self.gamma, "z")

    def values(self, z):
        z = np.asarray(z, complex)
        env = dict(self.params)
        env["z"] = z
        n = z.size
        g = safe_values(self.gamma, env, n)
        dg = safe_values(self.derivative, env, n)
        return g, dg

    def excluded(self, z) -> np.ndarray:
        z = np.asarray(z, complex)
        bad = np.zeros(z.shape, bool)
        for ex in self.exclusions:
            bad |= np.asarray(ex(z), bool)
        g, dg = self.values(z)
        bad |= ~np.isfinite(g) | ~np.isfinite(dg) | (np.abs(dg) < self.eps)
        return bad

    def in_xy(self) -> Expr:
        return substitute(self.gamma, {"z": ZXY})

    def box(self, ranges=((-1, 1), (-1, 1)), label=None) -> Box:
        (x0, x1), (y0, y1) = ranges
        return Box({"x": (x0, x1), "y": (y0, y1)}, [lambda p: self.excluded(p["x"] + 1j * p["y"])], label or self.name)


def _u_from_gamma(gamma: Expr) -> Expr:
    g = substitute(gamma, {"z": ZXY})
    dg = substitute(differentiate(gamma, "z"), {"z": ZXY})
    return call("ln", div(mul(2, call("abs", dg)), add(1, power(call("abs", g), 2))))


def _u_from_beta(beta: Expr) -> Expr:
    b = substitute(beta, {"z": ZXY})
    db = substitute(differentiate(beta, "z"), {"z": ZXY})
    return mul(-1, call("ln", div(call("cosh", call("re", b)), call("abs", db))))


def _check_construction(sol: ClosedFormSolution, n=100, seed=DEFAULT_SEED, tol=1e-9):
    rep = sol.residual_report(liouville(), n, seed, tol)
    if not rep.passed:
        raise ValueError(f"{sol.name}: Liouville residual {rep.max:.3e} exceeds {tol:g}; worst {rep.worst_points[:1]}")
    return rep


def solution_from_gamma(gf: GeneratingFunction, ranges=((-1, 1), (-1, 1)), check=True, global_domain=None) -> ClosedFormSolution:
    """u = ln(2|g'|/(1+|g|^2)); verified against the equation at 100 samples."""
    sol = ClosedFormSolution(
        gf.name or "gamma",
        {"u": _u_from_gamma(gf.gamma)},
        dict(gf.params),
        gf.box(ranges),
        [f"gamma={to_infix(gf.gamma)}"],
        global_domain,
        gf,
    )
    if check:
        _zero_check(gf, sol)
        _check_construction(sol)
    return sol


def _zero_check(gf, sol):
    pts = sol.box.sample(100, DEFAULT_SEED)
    z = pts["x"] + 1j * pts["y"]
    _, dg = gf.values(z)
    small = np.abs(dg) < gf.eps
    if small.any():
        raise ValueError(f"{gf.name}: g' vanishes near z={z[np.argmax(small)]}")


def solution_from_beta(beta, params=None, ranges=((-1, 1), (-1, 1)), name="beta", exclusions=(), check=True) -> ClosedFormSolution:
    """u = -ln(cosh(Re b)/|b'|); same solution as g = exp(b)."""
    beta = simplify(as_expr(beta))
    params = dict(params or {})
    gf = GeneratingFunction(call("exp", beta), params, list(exclusions), name)
    sol = ClosedFormSolution(name, {"u": _u_from_beta(beta)}, params, gf.box(ranges), [f"beta={to_infix(beta)}"], None, gf)
    if check:
        _check_construction(sol)
    return sol


# ------------------------------------------------------------------ catalog


@dataclass
class CatalogEntry:
    name: str
    gamma: str
    defaults: dict
    ranges: dict
    doc: str
    box: tuple = ((-1, 1), (-1, 1))
    exclusions: object = None
    validate: object = None
    global_domain: object = None

    def params(self, overrides=None) -> dict:
        p = dict(self.defaults)
        for k, v in (overrides or {}).items():
            if k not in self.defaults:
                raise KeyError(f"{self.name} has no parameter {k!r}; known: {sorted(self.defaults)}")
            p[k] = v
        for k, (lo, hi) in self.ranges.items():
            if not (lo <= p[k] <= hi):
                raise ValueError(f"{self.name}: {k}={p[k]} outside [{lo}, {hi}]")
        if self.validate:
            self.validate(p)
        return p

    def generating_function(self, overrides=None) -> GeneratingFunction:
        p = self.params(overrides)
        ex = self.exclusions(p) if self.exclusions else []
        return GeneratingFunction(sym(self.gamma), p, ex, self.name)

    def manifest(self) -> dict:
        return {
            "name": self.name,
            "gamma": self.gamma,
            "parameters": {k: {"default": v, "range": list(self.ranges.get(k, (None, None)))} for k, v in self.defaults.items()},
            "box": [list(r) for r in self.box],
            "doc": self.doc,
        }


def _nonzero(key):
    def check(p):
        if p[key] == 0:
            raise ValueError(f"{key} must be nonzero")

    return check


def _radial_excl(p):
    return [lambda z: np.abs(z) < SAFETY]


def _deformed_excl(p):
    lam = p["lam"]
    return [near([1 / lam])] if lam != 0 else []


def _pfam_excl(p):
    return [near([-1 / p["p"]])]


def _magnetotail_excl(p):
    q = p["p"]
    crit = math.sqrt(q * q + 2 * q) if q * q + 2 * q >= 0 else 1j * math.sqrt(-(q * q + 2 * q))
    return [near([q], 0.1), near([crit, -crit])]


def _bennet_excl(p):
    return []


def _erf_excl(p):
    return [outside_disk(3.0)]


CATALOG = {
    e.name: e
    for e in [
        CatalogEntry("harris", "exp(z)", {}, {}, "one-dimensional current sheet", global_domain=True),
        CatalogEntry(
            "island_chain",
            "k*exp(k*z) + sqrt(k^2 - 1)",
            {"k": 2.0},
            {"k": (1.0 + 1e-9, 50.0)},
            "periodic chain of magnetic islands",
            global_domain=True,
        ),
        CatalogEntry(
            "bennet",
            "(z - (x0 + I*y0))/k",
            {"k": 1.0, "x0": 0.0, "y0": 0.0},
            {"x0": (-10, 10), "y0": (-10, 10)},
            "radially symmetric pinch, u = ln(2|k|/(k^2 + r^2))",
            validate=_nonzero("k"),
            exclusions=_bennet_excl,
            global_domain=True,
        ),
        CatalogEntry(
            "radial",
            "z^a",
            {"a": 2.0},
            {"a": (1e-9, 20.0)},
            "radial family; log singularity at the origin unless a = 1",
            exclusions=_radial_excl,
            global_domain=lambda p: p["a"] == 1,
        ),
        CatalogEntry(
            "deformed_harris",
            "exp(z/(1 - lam*z))",
            {"lam": 0.2},
            {"lam": (-5, 5)},
            "curved current sheet; singular point moved to z = 1/lam",
            exclusions=_deformed_excl,
            global_domain=lambda p: p["lam"] == 0,
        ),
        CatalogEntry(
            "p_family",
            "(1 + p*z)^(1/p)",
            {"p": 0.5},
            {"p": (1e-9, 20.0)},
            "circular field lines; p = 1 is the pinch, p -> 0 the current sheet",
            exclusions=_pfam_excl,
            global_domain=lambda p: p["p"] == 1,
        ),
        CatalogEntry(
            "erf_bar",
            "p*erf(z)",
            {"p": 1.0},
            {"p": (-100, 100)},
            "bar-like current distribution; sampled on |z| <= 3",
            box=((-2.1, 2.1), (-2.1, 2.1)),
            exclusions=_erf_excl,
            validate=_nonzero("p"),
            global_domain=False,
        ),
        CatalogEntry(
            "magnetotail",
            "(z + p)/(z - p)*exp(z)",
            {"p": 1.0},
            {"p": (1e-3, 10)},
            "magnetotail-like configuration; excludes |z - p| <= 0.1",
            box=((-2, 2), (-2, 2)),
            exclusions=_magnetotail_excl,
            global_domain=False,
        ),
    ]
}


def catalog_names():
    return list(CATALOG)


def catalog(name: str, check=True, **overrides) -> ClosedFormSolution:
    """A named solution with validated parameters."""
    if name not in CATALOG:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG)}")
    entry = CATALOG[name]
    gf = entry.generating_function(overrides)
    glob = entry.global_domain(gf.params) if callable(entry.global_domain) else entry.global_domain
    sol = solution_from_gamma(gf, entry.box, check=check, global_domain=glob)
    sol.provenance = [f"catalog:{name}"] + sol.provenance
    return sol


def manifest() -> str:
    """Machine-readable description of the catalog (JSON text)."""
    return json.dumps({"schema_version": 1, "entries": [e.manifest() for e in CATALOG.values()]}, indent=2, sort_keys=True)


# ------------------------------------------------------- generating functions


def compose_gamma(gf: GeneratingFunction, psi, name=None, params=None) -> GeneratingFunction:
    """g(psi(z)); the excluded set is pulled back through psi and adds zeros of psi'."""
    psi = simplify(as_expr(psi))
    merged = dict(gf.params)
    merged.update(params or {})
    dpsi = differentiate(psi, "z")

    def pulled_back(z):
        z = np.asarray(z, complex)
        env = dict(merged)
        env["z"] = z
        w = safe_values(psi, env, z.size)
        dw = safe_values(dpsi, env, z.size)
        bad = ~np.isfinite(w) | ~np.isfinite(dw) | (np.abs(dw) < gf.eps)
        wz = np.where(bad, 0, w)
        for ex in gf.exclusions:
            bad |= np.asarray(ex(wz), bool) & ~bad
        return bad

    return GeneratingFunction(substitute(gf.gamma, {"z": psi}), merged, [pulled_back], name or f"{gf.name}∘psi")


def invariance_field_of(gf: GeneratingFunction) -> Expr:
    """phi0 = i g / g' : the holomorphic field leaving the solution invariant."""
    return simplify(div(mul(I, gf.gamma), gf.derivative))


def liouville_field(phi: Expr):
    """(xi, eta, zeta) of the point field generated by the holomorphic phi(z)."""
    p = substitute(as_expr(phi), {"z": ZXY})
    xi = call("re", p)
    eta = call("im", p)
    zeta = mul(-1, differentiate(xi, "x"))
    return simplify(xi), simplify(eta), simplify(zeta)


def invariance_check(gf: GeneratingFunction, sol: ClosedFormSolution | None = None, n=100, seed=DEFAULT_SEED, tol=1e-9) -> ResidualReport:
    """The characteristic zeta - xi u_x - eta u_y of the phi0 field vanishes on u."""
    sol = sol or solution_from_gamma(gf, check=False)
    phi0 = invariance_field_of(gf)
    xi, eta, zeta = liouville_field(phi0)
    ux, uy = sol.jet_expr("u", "x"), sol.jet_expr("u", "y")
    drift = add(mul(xi, ux), mul(eta, uy))
    pts = sol.sample(n, seed)
    a, b = Tape([zeta, drift]).run(sol.env(pts))
    res = scaled_difference(np.broadcast_to(a, (n,)), np.broadcast_to(b, (n,)))
    rep = ResidualReport(f"invariance:{sol.name}", seed, tol, res, worst(res, pts))
    rep.notes.append(f"phi0={to_infix(phi0)}")
    return rep


# ------------------------------------------------------------- diagnostics


@dataclass
class NormalizationResult:
    value: float
    error: float
    divergent: bool
    annuli: list

    def to_dict(self):
        return {"value": self.value, "error": self.error, "divergent": self.divergent, "annuli": self.annuli}


def _angular(sol, center, tol=1e-13, n0=32, nmax=1 << 15):
    """Theta-integral of exp(2u) on a circle, by trapezoid doubling (periodic)."""
    tape = Tape([mul(2, sol.fields["u"])])
    cx, cy = center

    def ring(r):
        n = n0
        prev = None
        while True:
            th = np.arange(n) * (2 * np.pi / n)
            env = sol.env({"x": cx + r * np.cos(th), "y": cy + r * np.sin(th)})
            (v,) = tape.run(env)
            val = float(np.mean(np.exp(np.real(np.broadcast_to(v, (n,)))))) * 2 * np.pi
            if prev is not None and abs(val - prev) <= tol * (1 + abs(val)):
                return val
            if n >= nmax:
                return val
            prev = val
            n *= 2

    return ring


def normalization_integral(sol: ClosedFormSolution, center=None, r0=8.0, doublings=5) -> NormalizationResult:
    """Integral of exp(2u) over the plane in polar coordinates about `center`.

    Divergence is diagnosed by annulus contributions over r in [8*2^j, 8*2^(j+1)]
    that fail to decay.
    """
    if center is None:
        center = (float(sol.params.get("x0", 0.0)), float(sol.params.get("y0", 0.0)))
    ring = _angular(sol, center)

    def radial(r):
        return r * ring(r)

    annuli = []
    for j in range(doublings):
        a, b = r0 * 2**j, r0 * 2 ** (j + 1)
        val, _ = integrate.quad(radial, a, b, epsabs=1e-12, epsrel=1e-10, limit=200)
        annuli.append(val)
    growth = [annuli[j + 1] / annuli[j] if annuli[j] > 0 else math.inf for j in range(len(annuli) - 1)]
    divergent = all(g > 0.9 for g in growth[-3:])
    if divergent:
        return NormalizationResult(math.inf, math.inf, True, annuli)
    inner, e1 = integrate.quad(radial, 0, r0, epsabs=1e-12, epsrel=1e-12, limit=200)
    outer, e2 = integrate.quad(radial, r0, np.inf, epsabs=1e-12, epsrel=1e-12, limit=200)
    return NormalizationResult(inner + outer, e1 + e2, False, annuli)


def eq2_solution(c, cp, name=None) -> ClosedFormSolution:
    """u = -ln(cosh(c x + c')/|c|)."""
    e = sym("-ln(cosh(c*x + cp)/abs(c))")
    return ClosedFormSolution(name or f"eq2(c={c},cp={cp})", {"u": e}, {"c": c, "cp": cp}, Box({"x": (-1, 1), "y": (-1, 1)}))


def variant_solutions():
    """The two x-only solutions of lap u - e^{2u} = 0."""
    u1 = ClosedFormSolution("u1", {"u": sym("-ln(abs(sinh(x)))")}, {}, Box({"x": (0.2, 2), "y": (-1, 1)}))
    u2 = ClosedFormSolution("u2", {"u": sym("-ln(abs(sin(x)))")}, {}, Box({"x": (0.2, 3), "y": (-1, 1)}))
    return u1, u2


def variant_equation_checks(n=100, seed=DEFAULT_SEED, tol=1e-9):
    """Reports: u1, u2 on the minus-sign equation; three sech-type profiles on
    the plus-sign equation; u1 on the plus-sign equation (expected to fail)."""
    plus, minus = liouville(+1), liouville(-1)
    u1, u2 = variant_solutions()
    reports = [u1.residual_report(minus, n, seed, tol), u2.residual_report(minus, n, seed, tol)]
    for c, cp in ((1.0, 0.0), (2.0, 0.5), (-0.7, 1.3)):
        reports.append(eq2_solution(c, cp).residual_report(plus, n, seed, tol))
    neg = u1.residual_report(plus, n, seed, tol, check="u1 on lap u + e^{2u}")
    neg.expect_fail = True
    neg.fail_threshold = 1e-3
    reports.append(neg)
    return reports


def explicit_deformed_harris(lam) -> ClosedFormSolution:
    """Closed form of the curved-sheet family, written in x, y."""
    e = sym("-ln((1 - 2*lam*x + lam^2*(x^2+y^2))*cosh((x - lam*(x^2+y^2))/(1 - 2*lam*x + lam^2*(x^2+y^2))))")
    gf = CATALOG["deformed_harris"].generating_function({"lam": lam})
    return ClosedFormSolution(f"deformed_harris_explicit({lam})", {"u": e}, {"lam": lam}, gf.box(), ["explicit"])


# -------------------------------------------------------------- orbits


def flow_map(phi: Expr, lam: float, z, params=None, rtol=1e-12, atol=1e-13):
    """Time-lam flow Phi of dz/de = phi(z) and its derivative dPhi/dz, pointwise."""
    phi = simplify(as_expr(phi))
    dphi = differentiate(phi, "z")
    tape = Tape([phi, dphi])
    z0 = np.asarray(z, complex).ravel()
    n = z0.size
    params = dict(params or {})

    def rhs(_, y):
        w = y[:n] + 1j * y[n : 2 * n]
        d = y[2 * n : 3 * n] + 1j * y[3 * n :]
        env = dict(params)
        env["z"] = w
        f, df = (np.broadcast_to(np.asarray(v, complex), (n,)) for v in tape.run(env))
        g = df * d
        return np.concatenate([f.real, f.imag, g.real, g.imag])

    y0 = np.concatenate([z0.real, z0.imag, np.ones(n), np.zeros(n)])
    if lam == 0:
        return z0.reshape(np.shape(z)), np.ones_like(z0).reshape(np.shape(z))
    out = integrate.solve_ivp(rhs, (0.0, lam), y0, method="DOP853", rtol=rtol, atol=atol)
    if not out.success:
        raise RuntimeError(f"flow integration failed: {out.message}")
    y = out.y[:, -1]
    w = y[:n] + 1j * y[n : 2 * n]
    d = y[2 * n : 3 * n] + 1j * y[3 * n :]
    return w.reshape(np.shape(z)), d.reshape(np.shape(z))


def orbit_values(gf: GeneratingFunction, phi, lam: float, x, y):
    """u of the deformed generating function g(Phi_lam(z)) on points (x, y)."""
    z = np.asarray(x) + 1j * np.asarray(y)
    w, dw = flow_map(phi, lam, z, gf.params)
    g, dg = gf.values(w.ravel())
    g = g.reshape(z.shape)
    dg = dg.reshape(z.shape)
    with np.errstate(all="ignore"):
        return np.log(2 * np.abs(dg * dw) / (1 + np.abs(g) ** 2))


__all__ = [
    "GeneratingFunction",
    "solution_from_gamma",
    "solution_from_beta",
    "catalog",
    "catalog_names",
    "CATALOG",
    "manifest",
    "compose_gamma",
    "invariance_field_of",
    "invariance_check",
    "liouville_field",
    "normalization_integral",
    "variant_equation_checks",
    "variant_solutions",
    "eq2_solution",
    "explicit_deformed_harris",
    "flow_map",
    "orbit_values",
]
