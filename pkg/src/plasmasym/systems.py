"""The equation systems in scope, written over jet coordinates."""
from __future__ import annotations

from .expr import Expr, Var, add, as_expr, call, mul, power, sub
from .lie.jet import JetBox, JetSpace, bracket, laplacian_jet, small_abs, small_radius
from .lie.system import Equation, EquationSystem, SolveRule

PLANE = JetSpace(("x", "y"), ("u",), 2)
PLASMA = JetSpace(("x", "y", "t"), ("u", "v"), 3)

U = Var("u")


def liouville(sign: int = +1) -> EquationSystem:
    """lap u + exp(2u) = 0 (sign=+1) or lap u - exp(2u) = 0 (sign=-1)."""
    S = PLANE
    lap = add(S.var("u", "xx"), S.var("u", "yy"))
    rhs = mul(-sign, call("exp", mul(2, U)))
    name = "liouville" if sign > 0 else "liouville_minus"
    box = JetBox({"x": (-1, 1), "y": (-1, 1)}, {"u": (-2, 2)})
    return EquationSystem(name, S, [Equation(lap, rhs, name)], [SolveRule("u_yy", 0)], box)


def _w(sign):
    S = PLASMA
    return add(S.var("u"), mul(-1, laplacian_jet(S, S.var("u"))), mul(sign, laplacian_jet(S, S.var("v"))))


def plasma_equations():
    """The signed pair: d/dt(w) + {v +- u, w} = 0 with w = u - lap u +- lap v."""
    S = PLASMA
    eqs = []
    for sign, label in ((+1, "delta_plus"), (-1, "delta_minus")):
        w = _w(sign)
        eqs.append(Equation(S.total_derivative(w, "t"), mul(-1, bracket(S, add(S.var("v"), mul(sign, S.var("u"))), w)), label))
    return eqs


def plasma_box():
    return JetBox(
        {"x": (-1, 1), "y": (-1, 1), "t": (-1, 1)},
        {"u": (-2, 2), "v": (-2, 2)},
        exclusions=(small_abs("x"), small_radius()),
    )


def plasma() -> EquationSystem:
    rules = [SolveRule("u_txx", ((0, 1), (1, 1))), SolveRule("v_txx", ((0, 1), (1, -1)))]
    return EquationSystem("plasma", PLASMA, plasma_equations(), rules, plasma_box())


def truncated() -> EquationSystem:
    """The system with the {u, lap v} term dropped."""
    S = PLASMA
    u, v = S.var("u"), S.var("v")
    w = sub(u, laplacian_jet(S, u))
    e1 = Equation(S.total_derivative(w, "t"), bracket(S, w, v), "truncated_1")
    lv = laplacian_jet(S, v)
    e2 = Equation(
        S.total_derivative(lv, "t"),
        sub(bracket(S, u, laplacian_jet(S, u)), bracket(S, v, lv)),
        "truncated_2",
    )
    rules = [SolveRule("u_txx", 0), SolveRule("v_txx", 1)]
    return EquationSystem("truncated", S, [e1, e2], rules, plasma_box())


def _split_bracket(f: Expr, g: Expr, label: str) -> Equation:
    S = PLASMA
    Dt = S.total_derivative
    return Equation(mul(Dt(f, "x"), Dt(g, "y")), mul(Dt(g, "x"), Dt(f, "y")), label)


def constraint_u_lap_v():
    """{u, lap v} = 0, solved for v_yyy (pivot u_x)."""
    S = PLASMA
    return _split_bracket(S.var("u"), laplacian_jet(S, S.var("v")), "u_lap_v"), SolveRule("v_yyy", 0)


def constraint_u_lap_u():
    """{u, lap u} = 0, solved for u_yyy (pivot u_x)."""
    S = PLASMA
    return _split_bracket(S.var("u"), laplacian_jet(S, S.var("u")), "u_lap_u"), SolveRule("u_yyy", 0)


def with_constraints(sys: EquationSystem, which=("u_lap_v", "u_lap_u")) -> EquationSystem:
    table = {"u_lap_v": constraint_u_lap_v, "u_lap_u": constraint_u_lap_u}
    eqs, rules = [], []
    for key in which:
        eq, rule = table[key]()
        rules.append(SolveRule(rule.coord, len(eqs)))
        eqs.append(eq)
    return sys.with_equations(eqs, rules, name=f"{sys.name}+" + "+".join(which))


def euler_v() -> Equation:
    """d/dt lap v + {v, lap v} = 0."""
    S = PLASMA
    lv = laplacian_jet(S, S.var("v"))
    return Equation(S.total_derivative(lv, "t"), mul(-1, bracket(S, S.var("v"), lv)), "euler_v")


def gss(a, p, F: Expr, G: Expr, x_range=(0.05, 2.0), u_range=(0.2, 2.0)) -> EquationSystem:
    """u_xx + (a/x) u_x + u_yy = x^(2p) F(u) + G(u). F, G are expressions in u."""
    S = PLANE
    x = Var("x")
    lhs = add(S.var("u", "xx"), mul(as_expr(a), power(x, -1), S.var("u", "x")), S.var("u", "yy"))
    rhs = add(mul(power(x, mul(2, as_expr(p))), as_expr(F)), as_expr(G))
    box = JetBox({"x": x_range, "y": (-1, 1)}, {"u": u_range})
    return EquationSystem(f"gss(a={a},p={p})", S, [Equation(lhs, rhs, "gss")], [SolveRule("u_yy", 0)], box)


__all__ = [
    "PLANE",
    "PLASMA",
    "liouville",
    "plasma",
    "plasma_equations",
    "truncated",
    "constraint_u_lap_v",
    "constraint_u_lap_u",
    "with_constraints",
    "euler_v",
    "gss",
]
