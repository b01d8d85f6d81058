"""Symmetries, transformed solutions and reductions of the two-field plasma system

    d/dt(u - lap u +- lap v) + {v +- u, u - lap u +- lap v} = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .expr import (
    ONE,
    Box,
    Expr,
    Tape,
    Var,
    add,
    as_expr,
    call,
    differentiate,
    div,
    mul,
    numeric_equal,
    power,
    simplify,
    sub,
    substitute,
    sym,
    to_infix,
)
from .expr.sampling import DEFAULT_SEED, scaled_difference
from .lie import (
    GeneratorField,
    ResidualReport,
    SolveRule,
    bracket,
    characteristic,
    commutator,
    conditional_symmetry_check,
    infinitesimal_symmetry_check,
    laplacian_jet,
    worst,
)
from .lie.system import Equation, EquationSystem
from .solution import ClosedFormSolution
from .systems import PLASMA, plasma, plasma_box, truncated, with_constraints

X, Y, T = Var("x"), Var("y"), Var("t")
R2 = add(power(X, 2), power(Y, 2))
NAMES = ("X1", "X2", "X3", "X4", "XH", "XAB")


class ReductionError(ValueError):
    pass


def _t_expr(e) -> Expr:
    e = simplify(as_expr(sym(e) if isinstance(e, str) else e))
    extra = e.free_vars - {"t"}
    if extra:
        raise ValueError(f"time function {to_infix(e)} depends on {sorted(extra)}")
    return e


def _dt(e):
    return differentiate(e, "t")


@dataclass(frozen=True)
class TimeFunctionTriple:
    A: Expr = as_expr(0)
    B: Expr = as_expr(0)
    H: Expr = as_expr(0)

    @classmethod
    def of(cls, A=0, B=0, H=0):
        return cls(_t_expr(A), _t_expr(B), _t_expr(H))


def build_generator(name: str, A=None, B=None, H=None) -> GeneratorField:
    """One of X1, X2, X3, X4, XH (needs H) or XAB (needs A, B)."""
    S = PLASMA
    if name == "X1":
        c = {"t": ONE}
    elif name == "X2":
        c = {"x": Y, "y": mul(-1, X)}
    elif name == "X3":
        c = {"u": ONE}
    elif name == "X4":
        c = {"x": mul(-1, T, Y), "y": mul(T, X), "v": div(R2, 2)}
    elif name == "XH":
        if H is None:
            raise ValueError("XH needs H(t)")
        c = {"v": _t_expr(H)}
    elif name == "XAB":
        if A is None or B is None:
            raise ValueError("XAB needs A(t) and B(t)")
        A, B = _t_expr(A), _t_expr(B)
        c = {"x": A, "y": B, "v": sub(mul(X, _dt(B)), mul(Y, _dt(A)))}
    else:
        raise KeyError(f"unknown generator {name!r}; known: {', '.join(NAMES)}")
    label = name
    if name == "XH":
        label = f"XH[{to_infix(c['v'])}]"
    elif name == "XAB":
        label = f"XAB[{to_infix(A)},{to_infix(B)}]"
    return GeneratorField(S, c, label)


def XH(H):
    return build_generator("XH", H=H)


def XAB(A, B):
    return build_generator("XAB", A=A, B=B)


# ------------------------------------------------------------- commutators


def fields_equal(g1: GeneratorField, g2: GeneratorField, n=50, tol=1e-10, seed=DEFAULT_SEED) -> bool:
    box = Box({"x": (-1, 1), "y": (-1, 1), "t": (-1, 1), "u": (-2, 2), "v": (-2, 2)})
    keys = set(g1.space.independents) | set(g1.space.dependents)
    return all(numeric_equal(g1.coeff(k), g2.coeff(k), box, n, tol, seed) for k in sorted(keys))


def zero_field():
    return GeneratorField(PLASMA, {}, "0")


def h_tilde(A, B, C, D) -> Expr:
    """v-coefficient of [X_(A,B), X_(C,D)] as computed: A D_t - B C_t - C B_t + D A_t."""
    A, B, C, D = map(_t_expr, (A, B, C, D))
    return simplify(add(mul(A, _dt(D)), mul(-1, B, _dt(C)), mul(-1, C, _dt(B)), mul(D, _dt(A))))


def h_tilde_printed(A, B, C, D) -> Expr:
    """The printed form A C_t - B D_t - C B_t + D A_t (kept for comparison)."""
    A, B, C, D = map(_t_expr, (A, B, C, D))
    return simplify(add(mul(A, _dt(C)), mul(-1, B, _dt(D)), mul(-1, C, _dt(B)), mul(D, _dt(A))))


def commutator_table(A="t", B="1", C="t^2", D="t", H="sin(t)"):
    """Rows (label, [g1,g2] computed, expected field)."""
    A_, B_, C_, D_, H_ = map(_t_expr, (A, B, C, D, H))
    X1, X2, X3, X4 = (build_generator(n) for n in ("X1", "X2", "X3", "X4"))
    xh = XH(H_)
    xab = XAB(A_, B_)
    xcd = XAB(C_, D_)
    rows = [
        ("[X1,X4] = -X2", commutator(X1, X4), X2.scaled(-1)),
        ("[X1,XH] = X_(H_t)", commutator(X1, xh), XH(_dt(H_))),
        ("[X1,XAB] = X_(A_t,B_t)", commutator(X1, xab), XAB(_dt(A_), _dt(B_))),
        ("[X2,XAB] = X_(-B,A)", commutator(X2, xab), XAB(mul(-1, B_), A_)),
        ("[X4,XAB] = -X_(-tB,tA)", commutator(X4, xab), XAB(mul(-1, T, B_), mul(T, A_)).scaled(-1)),
        ("[XAB,XCD] = X_(H~)", commutator(xab, xcd), XH(h_tilde(A_, B_, C_, D_))),
    ]
    base = {"X1": X1, "X2": X2, "X3": X3, "X4": X4}
    listed = {("X1", "X4")}
    for i, a in enumerate(base):
        for b in list(base)[i + 1 :]:
            if (a, b) not in listed:
                rows.append((f"[{a},{b}] = 0", commutator(base[a], base[b]), zero_field()))
    for name, g in (("XH", xh), ("XAB", xab)):
        rows.append((f"[X3,{name}] = 0", commutator(X3, g), zero_field()))
    rows.append(("[X2,XH] = 0", commutator(X2, xh), zero_field()))
    rows.append(("[X4,XH] = 0", commutator(X4, xh), zero_field()))
    rows.append(("[XH,XAB] = 0", commutator(xh, xab), zero_field()))
    return rows


def jacobi(g1, g2, g3) -> GeneratorField:
    return commutator(g1, commutator(g2, g3)) + commutator(g2, commutator(g3, g1)) + commutator(g3, commutator(g1, g2))


# ------------------------------------------------------------- flows


def _mapped_box(box: Box, mapping, label) -> Box:
    """Same ranges; a point is excluded when its preimage is excluded by `box`."""
    tape = Tape([mapping["x"], mapping["y"]])

    def ex(p):
        env = dict(p)
        mx, my = tape.run(env)
        q = dict(p)
        n = len(p["x"])
        q["x"] = np.broadcast_to(mx, (n,))
        q["y"] = np.broadcast_to(my, (n,))
        return box.excluded(q)

    return Box(dict(box.ranges), [ex], label)


def _transform(sol, mapping, v_extra, name, provenance):
    fields = {}
    for dep, e in sol.fields.items():
        fields[dep] = substitute(e, mapping)
    fields["v"] = add(fields.get("v", as_expr(0)), v_extra)
    fields.setdefault("u", as_expr(0))
    box = _mapped_box(sol.box, mapping, name)
    return ClosedFormSolution(name, fields, dict(sol.params), box, list(sol.provenance) + [provenance])


def moving_frame_transform(sol: ClosedFormSolution, A, B) -> ClosedFormSolution:
    """u~ = u(x - A, y - B, t), v~ = x B_t - y A_t - (A B_t - A_t B)/2 + v(x - A, y - B, t)."""
    A, B = _t_expr(A), _t_expr(B)
    mapping = {"x": sub(X, A), "y": sub(Y, B)}
    extra = add(mul(X, _dt(B)), mul(-1, Y, _dt(A)), mul(-0.5, sub(mul(A, _dt(B)), mul(_dt(A), B))))
    return _transform(sol, mapping, extra, f"{sol.name}|frame({to_infix(A)},{to_infix(B)})", f"moving_frame(A={to_infix(A)},B={to_infix(B)})")


def x4_rotation(sol: ClosedFormSolution, lam: float) -> ClosedFormSolution:
    """Rotation by angle lam*t plus lam r^2/2 in v."""
    c, s = call("cos", mul(lam, T)), call("sin", mul(lam, T))
    mapping = {"x": add(mul(X, c), mul(Y, s)), "y": add(mul(-1, X, s), mul(Y, c))}
    return _transform(sol, mapping, mul(lam, div(R2, 2)), f"{sol.name}|rot({lam})", f"x4_rotation(lambda={lam})")


def plasma_solution(name, u, v, params=None, box=None, provenance=None) -> ClosedFormSolution:
    box = box or Box({"x": (-1, 1), "y": (-1, 1), "t": (-1, 1)})
    return ClosedFormSolution(name, {"u": sym(u) if isinstance(u, str) else u, "v": sym(v) if isinstance(v, str) else v}, dict(params or {}), box, list(provenance or []))


# ----------------------------------------------------- canonical reduction


@dataclass
class CanonicalChart:
    A: Expr
    B: Expr

    @property
    def N(self) -> Expr:
        return add(power(self.A, 2), power(self.B, 2))

    @property
    def s(self) -> Expr:
        return sub(mul(self.B, X), mul(self.A, Y))

    @property
    def w(self) -> Expr:
        return div(add(mul(self.A, X), mul(self.B, Y)), self.N)

    def inverse(self):
        """x, y as expressions in s, w, t."""
        S_, W_ = Var("s"), Var("w")
        x = add(div(mul(self.B, S_), self.N), mul(self.A, W_))
        y = add(div(mul(-1, self.A, S_), self.N), mul(self.B, W_))
        return x, y

    @property
    def Q(self) -> Expr:
        A, B = self.A, self.B
        At, Bt = _dt(A), _dt(B)
        quad = sub(mul(add(mul(At, B), mul(A, Bt)), sub(power(X, 2), power(Y, 2))), mul(2, X, Y, sub(mul(A, At), mul(B, Bt))))
        return simplify(div(mul(0.5, quad), self.N))

    def to_xy(self, f: Expr) -> Expr:
        return substitute(f, {"s": self.s, "w": self.w})

    def to_sw(self, f: Expr) -> Expr:
        x, y = self.inverse()
        return substitute(f, {"x": x, "y": y})


def chart(A, B) -> CanonicalChart:
    return CanonicalChart(_t_expr(A), _t_expr(B))


def reduced_relations(A, B, U0, V0):
    """(U0 - N U0_ss, N V0_ss): both must be independent of t."""
    ch = chart(A, B)
    U0, V0 = sym(U0) if isinstance(U0, str) else U0, sym(V0) if isinstance(V0, str) else V0
    F = sub(U0, mul(ch.N, differentiate(differentiate(U0, "s"), "s")))
    G = mul(ch.N, differentiate(differentiate(V0, "s"), "s"))
    return simplify(F), simplify(G)


def _t_independence(e: Expr, n=100, seed=DEFAULT_SEED, tol=1e-9, box=None):
    box = box or Box({"s": (-1, 1), "t": (-1, 1)})
    d = _dt(e)
    pts = box.sample(n, seed)
    a, b = Tape([d, e]).run(pts)
    a = np.abs(np.broadcast_to(a, (n,)))
    scale = 1 + np.abs(np.broadcast_to(b, (n,)))
    return float(np.max(a / scale))


def canonical_reduction(A, B, U0, V0, tol=1e-9, box=None) -> ClosedFormSolution:
    """u = U0(s, t), v = Q + V0(s, t); rejects inputs whose reduced relations depend on t."""
    F, G = reduced_relations(A, B, U0, V0)
    bad = []
    for label, e in (("U0 - (A^2+B^2) U0_ss", F), ("(A^2+B^2) V0_ss", G)):
        m = _t_independence(e, tol=tol)
        if m > tol:
            bad.append(f"{label} depends on t (max |d/dt| {m:.3e})")
    if bad:
        raise ReductionError("; ".join(bad))
    ch = chart(A, B)
    U0 = sym(U0) if isinstance(U0, str) else U0
    V0 = sym(V0) if isinstance(V0, str) else V0
    u = ch.to_xy(U0)
    v = add(ch.Q, ch.to_xy(V0))
    box = box or Box({"x": (-1, 1), "y": (-1, 1), "t": (-1, 1)}, [lambda p: _n_small(ch, p)])
    return ClosedFormSolution(
        f"canonical(A={to_infix(ch.A)},B={to_infix(ch.B)})",
        {"u": u, "v": v},
        {},
        box,
        [f"canonical_reduction(U0={to_infix(U0)},V0={to_infix(V0)})"],
    )


def _n_small(ch, p, eps=0.05):
    (n,) = Tape([ch.N]).run({"t": p["t"]})
    return np.broadcast_to(n, np.shape(p["t"])) < eps


# ------------------------------------------------------ X4-invariant family

RV, TV = Var("r"), Var("t")


def x4_linear_terms(U0: Expr, V0: Expr):
    """Term lists of the two linear PDEs for U0(r, t) and V0(r, t)."""
    d = differentiate
    r, t = RV, TV

    def D(f, idx):
        for ch in idx:
            f = d(f, ch)
        return f

    p1 = [
        mul(power(r, 2), D(U0, "rrr")),
        mul(-2, r, t, D(U0, "rrt")),
        mul(r, D(U0, "rr")),
        mul(-2, t, D(U0, "rt")),
        mul(-1, power(r, 2), D(U0, "r")),
        mul(2, r, t, D(U0, "t")),
        mul(3, D(U0, "r")),
    ]
    p2 = [
        mul(2, r, t, D(V0, "rrt")),
        mul(-1, power(r, 2), D(V0, "rrr")),
        mul(2, t, D(V0, "rt")),
        mul(-1, r, D(V0, "rr")),
        mul(5, D(V0, "r")),
    ]
    return p1, p2


def terms_residual(terms, pts, n):
    vals = [np.broadcast_to(v, (n,)) for v in Tape(terms).run(pts)]
    total = np.sum(vals, axis=0)
    scale = 1 + np.max(np.abs(vals), axis=0)
    return np.abs(total) / scale


def v0_exponent(a: float) -> float:
    """b = (a^2 - 2a - 4)/(2a) for V0 = r^a t^b."""
    return (a * a - 2 * a - 4) / (2 * a)


def x4_linear_checks(U0, V0, n=100, seed=DEFAULT_SEED, tol=1e-9):
    U0 = sym(U0) if isinstance(U0, str) else U0
    V0 = sym(V0) if isinstance(V0, str) else V0
    p1, p2 = x4_linear_terms(U0, V0)
    box = Box({"r": (0.2, 2), "t": (0.2, 2)})
    pts = box.sample(n, seed)
    r1 = terms_residual(p1, pts, n)
    r2 = terms_residual(p2, pts, n)
    return (
        ResidualReport(f"x4-linear-U:{to_infix(U0)}", seed, tol, r1, worst(r1, pts)),
        ResidualReport(f"x4-linear-V:{to_infix(V0)}", seed, tol, r2, worst(r2, pts)),
    )


def cut_plane_box(t_range=(0.2, 2)):
    def ex(p):
        th = np.arctan2(p["y"], p["x"])
        return (np.abs(th) > math.pi - 0.1) | (p["x"] ** 2 + p["y"] ** 2 < 0.05**2)

    return Box({"x": (-1, 1), "y": (-1, 1), "t": t_range}, [ex], "cut-plane")


def x4_invariant_solutions(U0, V0, tol=1e-9) -> ClosedFormSolution:
    """u = U0(r, t), v = (r^2/2t) theta + V0(r, t), theta = arctan2(y, x)."""
    U0 = sym(U0) if isinstance(U0, str) else U0
    V0 = sym(V0) if isinstance(V0, str) else V0
    r1, r2 = x4_linear_checks(U0, V0, tol=tol)
    if not (r1.passed and r2.passed):
        raise ReductionError(f"linear equations violated: U {r1.max:.3e}, V {r2.max:.3e}")
    r = call("sqrt", R2)
    u = substitute(U0, {"r": r})
    theta = call("arctan2", Y, X)
    v = add(mul(div(R2, mul(2, T)), theta), substitute(V0, {"r": r}))
    return ClosedFormSolution(f"x4inv(U0={to_infix(U0)},V0={to_infix(V0)})", {"u": u, "v": v}, {}, cut_plane_box(), ["x4_invariant"])


# ------------------------------------------------------ combined symmetries

XY_BOX = Box({"x": (-1, 1), "y": (-1, 1)})


def _plane_bracket(f, g):
    d = differentiate
    return sub(mul(d(f, "x"), d(g, "y")), mul(d(g, "x"), d(f, "y")))


def _plane_lap(f):
    d = differentiate
    return add(d(d(f, "x"), "x"), d(d(f, "y"), "y"))


def static_reduced_checks(U, V, n=100, seed=DEFAULT_SEED, tol=1e-9):
    """{U - lap U, V} = {U, lap V} and {U, lap U} = {V, lap V} on the plane."""
    lu, lv = _plane_lap(U), _plane_lap(V)
    pairs = [
        (_plane_bracket(sub(U, lu), V), _plane_bracket(U, lv)),
        (_plane_bracket(U, lu), _plane_bracket(V, lv)),
    ]
    pts = XY_BOX.sample(n, seed)
    vals = Tape([e for p in pairs for e in p]).run(pts)
    rows = [scaled_difference(np.broadcast_to(vals[2 * k], (n,)), np.broadcast_to(vals[2 * k + 1], (n,))) for k in range(2)]
    res = np.max(rows, axis=0)
    return ResidualReport(f"reduced-static(U={to_infix(U)},V={to_infix(V)})", seed, tol, res, worst(res, pts))


@dataclass
class Ansatz:
    kind: str
    generator: GeneratorField
    solution: ClosedFormSolution
    reduced: ResidualReport | None
    invariance: ResidualReport
    system: ResidualReport

    @property
    def ok(self) -> bool:
        return (self.reduced is None or self.reduced.passed) and self.invariance.passed and self.system.passed


def combined_symmetry_ansatz(kind: str, n=100, seed=DEFAULT_SEED, tol=1e-9, **params) -> Ansatz:
    """Invariant solutions of d/dt + X_H (kind 't_plus_XH', params T, U, V) or of
    d/dt + X_(A,B) (kind 't_plus_XAB', params A, B, alpha, beta, U, V with
    alpha_t = A, beta_t = B; U, V are written in x, y and shifted)."""
    P = {k: (sym(v) if isinstance(v, str) else as_expr(v)) for k, v in params.items()}
    sys = plasma()
    if kind == "t_plus_XH":
        Tf, U, V = P["T"], P["U"], P["V"]
        gen = build_generator("X1") + XH(_dt(Tf))
        sol = plasma_solution(f"ansatz_XH(U={to_infix(U)},V={to_infix(V)})", U, add(Tf, V))
        reduced = static_reduced_checks(U, V, n, seed, tol)
    elif kind == "t_plus_XAB":
        A, B, al, be = (_t_expr(P[k]) for k in ("A", "B", "alpha", "beta"))
        for a, b, label in ((al, A, "alpha_t = A"), (be, B, "beta_t = B")):
            if not numeric_equal(_dt(a), b, Box({"t": (-1, 1)}), 20, 1e-12, seed):
                raise ReductionError(f"{label} does not hold")
        U, V = P["U"], P["V"]
        shift = {"x": sub(X, al), "y": sub(Y, be)}
        u = substitute(U, shift)
        v = add(mul(sub(X, al), B), mul(-1, sub(Y, be), A), mul(al, B), mul(-1, be, A), substitute(V, shift))
        gen = build_generator("X1") + XAB(A, B)
        sol = plasma_solution(f"ansatz_XAB(U={to_infix(U)},V={to_infix(V)})", u, v)
        reduced = None
    else:
        raise KeyError(f"unknown ansatz kind {kind!r}")
    gen = GeneratorField(gen.space, gen.coeffs, kind)
    inv = _invariance_only(gen, sys, sol, n, seed, tol)
    return Ansatz(kind, gen, sol, reduced, inv, sol.residual_report(sys, n, seed, tol))


def _invariance_only(gen, sys, sol, n, seed, tol):
    pts = sol.sample(n, seed)
    rows = []
    names = set()
    qs = []
    for dep in sys.space.dependents:
        q = characteristic(gen, dep, sys.space)
        qs.append((gen.coeff(dep), sub(gen.coeff(dep), q)))
        names |= {v for v in q.free_vars | gen.coeff(dep).free_vars if sys.space.parse(v) is not None}
    jet = sol.jet(names, pts)
    vals = Tape([e for p in qs for e in p]).run(sol.env(jet))
    for k in range(len(qs)):
        rows.append(scaled_difference(np.broadcast_to(vals[2 * k], (n,)), np.broadcast_to(vals[2 * k + 1], (n,))))
    res = np.max(rows, axis=0)
    return ResidualReport(f"invariance:{gen.name}:{sol.name}", seed, tol, res, worst(res, pts))


def invariance_report(gen, sol, n=100, seed=DEFAULT_SEED, tol=1e-9):
    """Characteristic of `gen` evaluated on the jet of `sol`."""
    return _invariance_only(gen, plasma(), sol, n, seed, tol)


# ---------------------------------------------------- contact conditional


def contact_field() -> GeneratorField:
    S = PLASMA
    return GeneratorField(S, {"u": S.var("u", "y"), "v": S.var("v", "x")}, "u_y du + v_x dv", contact=True)


def contact_solution(k, kappa, T="t^2", form="sin_exp", sign=+1) -> ClosedFormSolution:
    """form 'sin_exp': u = sin(k(x - T)), v = exp(+-kappa y) - T_t y;
    form 'exp_sin': u = exp(+-k(x - T)), v = sin(kappa y) - T_t y."""
    Tf = _t_expr(T)
    Tt = _dt(Tf)
    xs = sub(X, Tf)
    if form == "sin_exp":
        u = call("sin", mul(k, xs))
        v = sub(call("exp", mul(sign * kappa, Y)), mul(Tt, Y))
    elif form == "exp_sin":
        u = call("exp", mul(sign * k, xs))
        v = sub(call("sin", mul(kappa, Y)), mul(Tt, Y))
    else:
        raise KeyError(form)
    return plasma_solution(f"contact[{form},k={k:g},kappa={kappa:g}]", u, v)


def contact_check(k, kappa, T="t^2", form="sin_exp", sign=+1, n=100, seed=DEFAULT_SEED, tol=1e-9):
    return conditional_symmetry_check(contact_field(), plasma(), contact_solution(k, kappa, T, form, sign), n, seed, tol)


# ------------------------------------------------------- partial symmetry


def scaling_u() -> GeneratorField:
    return GeneratorField(PLASMA, {"u": Var("u")}, "u du")


def reduced_ab_system(A_of_u: Expr, B_of_u: Expr, name="reduced_ab") -> EquationSystem:
    """u_t = {u, v}, lap u = A(u), lap v = B(u)."""
    S = PLASMA
    u, v = S.var("u"), S.var("v")
    eqs = [
        Equation(S.var("u", "t"), bracket(S, u, v), "u_t={u,v}"),
        Equation(laplacian_jet(S, u), A_of_u, "lap u=A(u)"),
        Equation(laplacian_jet(S, v), B_of_u, "lap v=B(u)"),
    ]
    rules = [SolveRule("u_t", 0), SolveRule("u_yy", 1), SolveRule("v_yy", 2)]
    return EquationSystem(name, S, eqs, rules, plasma_box())


def _elementary(name):
    if name == "traveling_waves":
        c1, c2, c3, k = 1.0, 1.0, 0.0, 2.0
        sol = plasma_solution(
            "traveling_waves",
            sym(f"{c1}*sin({k}*(x - t)) + {c2}*sin({k}*(y - t)) + {c3}"),
            sym("x - y"),
            provenance=["c1=c2=1,c3=0,k=2"],
        )
        A = mul(-(k**2), sub(Var("u"), c3))
        B = as_expr(0)
    elif name == "spiral":
        sol = plasma_solution("spiral", sym("2*t - arctan2(y, x)"), sym("x^2 + y^2"), box=cut_plane_box((-1, 1)))
        A, B = as_expr(0), as_expr(4)
    elif name == "shear":
        sol = plasma_solution("shear", sym("tanh(y - t)"), sym("x"))
        u = Var("u")
        A = mul(-2, u, sub(1, power(u, 2)))
        B = as_expr(0)
    else:
        raise KeyError(f"unknown elementary solution {name!r}")
    return sol, A, B


ELEMENTARY = ("traveling_waves", "spiral", "shear")


def partial_symmetry_solutions(name: str, n=100, seed=DEFAULT_SEED, tol=1e-9):
    """(solution, report on the reduced system, report on the full system)."""
    sol, A, B = _elementary(name)
    red = sol.residual_report(reduced_ab_system(A, B), n, seed, tol, check=f"reduced_ab:{name}")
    full = sol.residual_report(plasma(), n, seed, tol, check=f"plasma:{name}")
    return sol, red, full


# -------------------------------------------------------- suites


def instances():
    """Three (A, B, H) choices for the function-dependent families."""
    return [("t^2", "sin(t)", "1"), ("sin(t)", "cos(t)", "sin(t)"), ("exp(t)", "t^3 - t", "t^3 + exp(t)")]


def point_generators():
    gens = [build_generator(n) for n in ("X1", "X2", "X3", "X4")]
    for A, B, H in instances():
        gens.append(XH(H))
        gens.append(XAB(A, B))
    return gens


def negative_controls():
    S = PLASMA
    x4 = build_generator("X4")
    flipped = GeneratorField(S, {**x4.coeffs, "v": mul(-1, x4.coeff("v"))}, "X4 with -r^2/2")
    return [GeneratorField(S, {"x": X}, "x dx"), scaling_u(), flipped]


def truncated_system_check(samples=200, seed=DEFAULT_SEED, tol=1e-9):
    """Every generator on the truncated system, alone and with each/both constraints."""
    base = truncated()
    variants = [
        base,
        with_constraints(base, ("u_lap_v",)),
        with_constraints(base, ("u_lap_u",)),
        with_constraints(base, ("u_lap_v", "u_lap_u")),
    ]
    reports = []
    for sys in variants:
        for g in point_generators():
            reports.append(infinitesimal_symmetry_check(g, sys, samples, seed, tol))
    rogue = infinitesimal_symmetry_check(
        GeneratorField(PLASMA, {"x": X}, "x dx"), base, samples, seed, tol, expect_fail=True, fail_threshold=1e-3
    )
    return reports, rogue


__all__ = [
    "build_generator",
    "XH",
    "XAB",
    "TimeFunctionTriple",
    "commutator_table",
    "fields_equal",
    "jacobi",
    "h_tilde",
    "h_tilde_printed",
    "moving_frame_transform",
    "x4_rotation",
    "plasma_solution",
    "CanonicalChart",
    "chart",
    "canonical_reduction",
    "reduced_relations",
    "ReductionError",
    "x4_linear_checks",
    "x4_invariant_solutions",
    "v0_exponent",
    "combined_symmetry_ansatz",
    "static_reduced_checks",
    "contact_field",
    "contact_solution",
    "contact_check",
    "scaling_u",
    "reduced_ab_system",
    "partial_symmetry_solutions",
    "ELEMENTARY",
    "point_generators",
    "negative_controls",
    "truncated_system_check",
    "invariance_report",
]
