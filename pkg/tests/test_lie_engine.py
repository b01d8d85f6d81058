import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from plasmasym.expr import ONE, ZERO, Box, Tape, Var, add, mul, numeric_equal, power, sub, sym
from plasmasym.lie import (
    Equation,
    EquationSystem,
    GeneratorField,
    JetBox,
    JetSpace,
    ResidualReport,
    SolveRule,
    bracket,
    characteristic,
    commutator,
    consistency_report,
    infinitesimal_symmetry_check,
    laplacian_jet,
    partial_symmetry_check,
    prolong,
)
from plasmasym.liouville import catalog, liouville_field
from plasmasym.systems import PLANE, PLASMA, constraint_u_lap_u, liouville, plasma, truncated, with_constraints

x, y, u = Var("x"), Var("y"), Var("u")
JET_BOX = Box({n: (-1.5, 1.5) for n in ["x", "y", "u"] + PLANE.derivative_coords(3)})


def z2_field():
    xi, eta, zeta = liouville_field(sym("z^2"))
    return GeneratorField(PLANE, {"x": xi, "y": eta, "u": zeta}, "z^2")


# --- jet space -------------------------------------------------------------


def test_coordinate_names_are_sorted():
    assert PLASMA.var("u", "xt").name == "u_tx"
    assert PLASMA.parse("v_txx") == ("v", "txx")
    assert PLASMA.parse("v_xxt") is None
    assert PLASMA.parse("w_x") is None
    assert PLASMA.order_of("u") == 0 and PLASMA.order_of("x") == -1


def test_multi_index_count():
    # three letters, orders 0..3: 1 + 3 + 6 + 10
    assert len(PLASMA.multi_indices()) == 20
    assert len(PLANE.coords(2)) == 6


def test_total_derivative_of_coordinates():
    S = PLASMA
    assert S.total_derivative(S.var("u"), "x") is S.var("u", "x")
    assert S.total_derivative(S.var("u", "y"), "x") is S.var("u", "xy")
    assert S.total_derivative(Var("t"), "t") is ONE
    assert S.total_derivative(Var("t"), "x") is ZERO


def test_total_derivative_chain_rule():
    S = PLANE
    f = mul(x, power(S.var("u"), 2))
    got = S.total_derivative(f, "x")
    want = add(power(u, 2), mul(2, x, u, S.var("u", "x")))
    assert numeric_equal(got, want, JET_BOX)


def test_bracket_is_antisymmetric():
    S = PLASMA
    f, g = S.var("u"), laplacian_jet(S, S.var("v"))
    assert numeric_equal(bracket(S, f, g), mul(-1, bracket(S, g, f)), Box({n: (-1, 1) for n in S.coords()}))


def test_single_letter_independents_required():
    with pytest.raises(ValueError):
        JetSpace(("xx", "y"), ("u",), 2)


# --- prolongation -------------------------------------------------------------


def test_translation_has_no_prolonged_part():
    table = prolong(GeneratorField(PLANE, {"y": ONE}), 3)
    assert table["y"] is ONE
    assert all(table[c] is ZERO for c in PLANE.coords(3))


def test_scaling_of_u_prolongs_to_itself():
    table = prolong(GeneratorField(PLANE, {"u": u}), 3)
    for c in PLANE.coords(3):
        assert table[c] is Var(c)


def test_z2_first_prolongation():
    # xi = x^2 - y^2, eta = 2xy, zeta = -2x; D_x xi = 2x, D_x eta = 2y
    table = prolong(z2_field(), 1)
    ux, uy = PLANE.var("u", "x"), PLANE.var("u", "y")
    want = sub(sub(-2, mul(2, x, ux)), mul(2, y, uy))
    assert numeric_equal(table["u_x"], want, JET_BOX, tol=1e-12)


def test_z2_prolongation_matches_transport_of_the_orbit():
    """d/de of u_x along the flow equals zeta^x - xi u_xx - eta u_xy.

    The flow of z^2 carries Harris to exp(z/(1 + e z)), i.e. the deformed
    family at lam = -e; the derivative is taken by central differences.
    """
    base = catalog("harris", check=False)
    pts = Box({"x": (-1, 1), "y": (-1, 1)}).sample(40, 3)
    h = 1e-4
    plus = catalog("deformed_harris", check=False, lam=-h)
    minus = catalog("deformed_harris", check=False, lam=h)
    fd = (plus.jet(["u_x"], pts)["u_x"] - minus.jet(["u_x"], pts)["u_x"]) / (2 * h)

    g = z2_field()
    table = prolong(g, 1)
    Q_x = sub(sub(table["u_x"], mul(g.coeff("x"), PLANE.var("u", "xx"))), mul(g.coeff("y"), PLANE.var("u", "xy")))
    jet = base.jet(["u", "u_x", "u_y", "u_xx", "u_xy"], pts)
    (pred,) = Tape([Q_x]).run(jet)
    assert np.max(np.abs(np.real(pred) - fd)) < 1e-5


def test_contact_field_is_rejected_by_prolong():
    g = GeneratorField(PLASMA, {"u": PLASMA.var("u", "y")}, "contact", contact=True)
    with pytest.raises(ValueError):
        prolong(g, 2)


@pytest.mark.parametrize("order", [-1, 4])
def test_prolong_order_range(order):
    with pytest.raises(ValueError):
        prolong(GeneratorField(PLANE, {"x": ONE}), order)


def test_point_field_with_jet_coordinate_is_rejected():
    with pytest.raises(ValueError):
        GeneratorField(PLANE, {"u": PLANE.var("u", "x")})


def test_unknown_variable_is_rejected():
    with pytest.raises(ValueError):
        GeneratorField(PLANE, {"t": ONE})


monomials = st.sampled_from(["x", "y", "u", "x*y", "x*u", "u^2", "y^2", "sin(x)", "exp(u)", "1"])
coeffs = st.lists(st.tuples(st.integers(-3, 3), monomials), min_size=1, max_size=3).map(
    lambda ts: add(*(mul(c, sym(m)) for c, m in ts))
)
point_fields = st.builds(lambda a, b, c: GeneratorField(PLANE, {"x": a, "y": b, "u": c}), coeffs, coeffs, coeffs)


@given(point_fields, st.sampled_from(["x", "y", "xx", "xy", "yy", "xxy"]))
def test_prolongation_equals_characteristic_form(g, J):
    """zeta^J = D_J Q + sum_i xi_i u_{J,i} with Q = zeta - xi_i u_i."""
    table = prolong(g, 3)
    Q = characteristic(g, "u")
    want = add(PLANE.D(Q, J), *(mul(g.coeff(i), PLANE.var("u", J + i)) for i in "xy"))
    assert numeric_equal(table[f"u_{''.join(sorted(J))}"], want, JET_BOX, n=20, tol=1e-9)


@given(point_fields, point_fields)
def test_commutator_antisymmetric(g1, g2):
    box = Box({"x": (-1, 1), "y": (-1, 1), "u": (-1, 1)})
    c12, c21 = commutator(g1, g2), commutator(g2, g1)
    for k in "xyu":
        assert numeric_equal(c12.coeff(k), mul(-1, c21.coeff(k)), box, n=20, tol=1e-9)


@given(point_fields, point_fields, point_fields)
def test_jacobi_identity(a, b, c):
    box = Box({"x": (-1, 1), "y": (-1, 1), "u": (-1, 1)})
    j = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b))
    for k in "xyu":
        assert numeric_equal(j.coeff(k), ZERO, box, n=15, tol=1e-8)


def test_commutator_needs_same_space():
    with pytest.raises(ValueError):
        commutator(GeneratorField(PLANE, {"x": ONE}), GeneratorField(PLASMA, {"x": ONE}))


# --- systems and projections ------------------------------------------------------


@pytest.mark.parametrize(
    "make",
    [liouville, lambda: liouville(-1), plasma, truncated, lambda: with_constraints(truncated())],
    ids=["liouville", "liouville-", "plasma", "truncated", "truncated+constraints"],
)
def test_solve_rules_are_consistent(make):
    rep = consistency_report(make(), 200, 5)
    assert rep.passed, str(rep)
    assert rep.max <= 1e-12


@given(st.integers(0, 2**31 - 1))
def test_projection_lands_on_the_manifold(seed):
    sys = plasma()
    pts, _ = sys.sample_on_manifold(30, seed)
    assert np.max(sys.residuals(pts)) <= 1e-12


def test_rule_must_be_affine():
    eq = Equation(power(PLANE.var("u", "yy"), 2), ZERO)
    with pytest.raises(ValueError):
        EquationSystem("bad", PLANE, [eq], [SolveRule("u_yy", 0)], JetBox({"x": (-1, 1), "y": (-1, 1)}, {"u": (-1, 1)}))


def test_rule_coordinate_must_appear():
    eq = Equation(PLANE.var("u", "xx"), ZERO)
    with pytest.raises(ValueError):
        EquationSystem("bad", PLANE, [eq], [SolveRule("u_yy", 0)], JetBox({"x": (-1, 1), "y": (-1, 1)}, {"u": (-1, 1)}))


def test_small_pivots_are_resampled():
    # u_x * u_yyy = 0 solved for u_yyy: pivot u_x vanishes on part of the box
    sys = with_constraints(truncated(), ("u_lap_u",))
    pts, resampled = sys.sample_on_manifold(200, 11)
    assert resampled > 0
    assert np.all(np.abs(pts["u_x"]) >= 0.05)


# --- symmetry checks -------------------------------------------------------------


def test_z2_is_a_liouville_symmetry():
    rep = infinitesimal_symmetry_check(z2_field(), liouville(), 200)
    assert rep.passed, str(rep)


def test_broken_sign_field_fails():
    g = z2_field()
    broken = GeneratorField(PLANE, {**g.coeffs, "u": mul(-1, g.coeff("u"))}, "broken")
    rep = infinitesimal_symmetry_check(broken, liouville(), 200, expect_fail=True, fail_threshold=1e-3)
    assert not rep.passed and rep.ok


def test_report_flags():
    rep = ResidualReport("c", 1, 1e-9, np.array([1e-3]), expect_fail=True, fail_threshold=1e-4)
    assert not rep.passed and rep.ok
    assert "expected fail" in str(rep)
    assert ResidualReport("empty", 1, 1e-9, np.zeros(0)).passed is False


def test_scaling_u_is_a_partial_symmetry():
    eq, rule = constraint_u_lap_u()
    reps = partial_symmetry_check(GeneratorField(PLASMA, {"u": u}, "u du"), plasma(), [eq], [rule], 200)
    assert reps["on_subset"].passed, str(reps["on_subset"])
    assert reps["off_subset"].ok and not reps["off_subset"].passed
