"""Numerical symmetry checks on sampled jet points."""
from __future__ import annotations

import numpy as np

from ..expr import Tape, sub
from ..expr.sampling import DEFAULT_SEED, scaled_difference
from .generator import GeneratorField, apply_prolonged, characteristic, prolong
from .report import ResidualReport, combine, worst
from .system import Equation, EquationSystem

CONSISTENCY_TOL = 1e-12


def prolonged_equations(g: GeneratorField, sys: EquationSystem, equations=None):
    """[(pr X lhs, pr X rhs)] for the selected equation indices."""
    idx = range(len(sys.equations)) if equations is None else equations
    table = prolong(g, max(sys.order, 1), sys.space)
    return [(apply_prolonged(table, sys.equations[k].lhs), apply_prolonged(table, sys.equations[k].rhs)) for k in idx]


def consistency_report(sys: EquationSystem, samples: int = 200, seed: int = DEFAULT_SEED) -> ResidualReport:
    """Substituting the solve rules must make every equation hold."""
    pts, resampled = sys.sample_on_manifold(samples, seed)
    res = sys.residuals(pts).max(axis=0)
    return ResidualReport(f"consistency:{sys.name}", seed, CONSISTENCY_TOL, res, worst(res, pts), resampled)


def infinitesimal_symmetry_check(
    g: GeneratorField,
    sys: EquationSystem,
    samples: int = 200,
    seed: int = DEFAULT_SEED,
    tol: float = 1e-9,
    equations=None,
    check: str | None = None,
    expect_fail: bool = False,
    fail_threshold: float | None = None,
) -> ResidualReport:
    """pr X (lhs - rhs) on seeded jet points projected onto the equation manifold.

    The per-point residual is |pr X lhs - pr X rhs| / (1 + max(|pr X lhs|, |pr X rhs|)),
    maximized over the selected equations.
    """
    pairs = prolonged_equations(g, sys, equations)
    pts, resampled = sys.sample_on_manifold(samples, seed)
    tape = Tape([e for pair in pairs for e in pair])
    vals = tape.run(sys.env(pts))
    n = samples
    rows = [
        scaled_difference(np.broadcast_to(vals[2 * k], (n,)), np.broadcast_to(vals[2 * k + 1], (n,)))
        for k in range(len(pairs))
    ]
    res = np.max(np.array(rows), axis=0) if rows else np.zeros(n)
    name = check or f"symmetry:{g.name or 'X'}@{sys.name}"
    rep = ResidualReport(name, seed, tol, res, worst(res, _independent_view(sys, pts)), resampled)
    rep.expect_fail = expect_fail
    rep.fail_threshold = fail_threshold
    return rep


def _independent_view(sys, pts):
    keep = set(sys.space.independents) | set(sys.space.dependents)
    return {k: v for k, v in pts.items() if k in keep}


def evaluate_on_manifold(exprs, sys: EquationSystem, samples: int = 200, seed: int = DEFAULT_SEED):
    pts, resampled = sys.sample_on_manifold(samples, seed)
    vals = Tape(list(exprs)).run(sys.env(pts))
    return [np.broadcast_to(v, (samples,)) for v in vals], pts, resampled


def flow_orbit_check(flow, sol, sys: EquationSystem, params, samples: int = 100, seed: int = DEFAULT_SEED, tol: float = 1e-9, check: str | None = None):
    """Every transformed solution flow(sol, lam) must solve `sys`."""
    base = sol.residual_report(sys, samples, seed, tol)
    if not base.passed:
        base.notes.append("base solution fails at parameter 0")
        return base
    reports = []
    for lam in params:
        new = flow(sol, lam)
        rep = new.residual_report(sys, samples, seed, tol, check=f"{new.name}@{lam}")
        reports.append(rep)
    out = combine(check or f"orbit:{sol.name}", reports, seed, tol)
    out.notes = [f"lambda={lam}: max={r.max:.3e}" for lam, r in zip(params, reports)]
    return out


def identity_check(flow, sol, samples: int = 100, seed: int = DEFAULT_SEED, tol: float = 1e-12):
    """flow(sol, 0) equals sol pointwise."""
    new = flow(sol, 0.0)
    pts = sol.sample(samples, seed)
    a = sol.evaluate(pts)
    b = new.evaluate(pts)
    res = np.max([scaled_difference(a[k], b[k]) for k in sorted(a)], axis=0)
    return ResidualReport(f"identity:{sol.name}", seed, tol, res, worst(res, pts))


def conditional_symmetry_check(g: GeneratorField, sys: EquationSystem, sol, samples: int = 100, seed: int = DEFAULT_SEED, tol: float = 1e-9):
    """sol must satisfy both the system and the invariant-surface conditions of g.

    The invariant-surface condition for dependent variable a is
    zeta_a - sum_i xi_i u_{a,i} = 0, with the coefficients evaluated on the jet
    of the candidate solution (so contact fields are allowed).
    """
    sys_rep = sol.residual_report(sys, samples, seed, tol, check=f"system:{sys.name}")
    pts = sol.sample(samples, seed)
    rows = []
    names = set()
    pieces = []
    for dep in sys.space.dependents:
        q = characteristic(g, dep, sys.space)
        zeta = g.coeff(dep)
        pieces.append((zeta, sub(zeta, q)))
        names |= {v for v in q.free_vars | zeta.free_vars if sys.space.parse(v) is not None}
    jet = sol.jet(names, pts)
    vals = Tape([e for pair in pieces for e in pair]).run(sol.env(jet))
    for k in range(len(pieces)):
        rows.append(scaled_difference(np.broadcast_to(vals[2 * k], (samples,)), np.broadcast_to(vals[2 * k + 1], (samples,))))
    inv = np.max(rows, axis=0)
    inv_rep = ResidualReport(f"invariance:{g.name}", seed, tol, inv, worst(inv, pts))
    out = combine(f"conditional:{g.name}:{sol.name}", [sys_rep, inv_rep], seed, tol)
    if not sys_rep.passed:
        out.notes.append(f"fails the system ({sys_rep.max:.3e})")
    if not inv_rep.passed:
        out.notes.append(f"fails the invariant-surface condition ({inv_rep.max:.3e})")
    return out


def partial_symmetry_check(g: GeneratorField, sys: EquationSystem, extra, extra_rules, samples: int = 200, seed: int = DEFAULT_SEED, tol: float = 1e-9):
    """Reports for a partial symmetry: X*(Delta) on the enlarged manifold, exactness
    of the enlarged system, and (expected to fail) X*(Delta) on Delta = 0 alone."""
    enlarged = sys.with_equations(extra, extra_rules, name=f"{sys.name}+constraint")
    base_idx = list(range(len(sys.equations)))
    on_subset = infinitesimal_symmetry_check(g, enlarged, samples, seed, tol, equations=base_idx, check=f"partial:{g.name}:on-subset")
    exact = infinitesimal_symmetry_check(g, enlarged, samples, seed, tol, check=f"partial:{g.name}:enlarged-exact")
    off = infinitesimal_symmetry_check(g, sys, samples, seed, tol, check=f"partial:{g.name}:off-subset", expect_fail=True, fail_threshold=1e-3)
    return {"on_subset": on_subset, "enlarged_exact": exact, "off_subset": off}


__all__ = [
    "infinitesimal_symmetry_check",
    "consistency_report",
    "flow_orbit_check",
    "identity_check",
    "conditional_symmetry_check",
    "partial_symmetry_check",
    "prolonged_equations",
    "evaluate_on_manifold",
    "Equation",
]
