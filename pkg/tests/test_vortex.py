import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plasmasym.expr import Box, numeric_equal, sym
from plasmasym.lie import conditional_symmetry_check, infinitesimal_symmetry_check
from plasmasym.systems import plasma
from plasmasym.vortex import (
    ELEMENTARY,
    XAB,
    XH,
    ReductionError,
    build_generator,
    canonical_reduction,
    chart,
    combined_symmetry_ansatz,
    commutator_table,
    contact_check,
    contact_field,
    contact_solution,
    fields_equal,
    h_tilde,
    h_tilde_printed,
    instances,
    invariance_report,
    jacobi,
    moving_frame_transform,
    negative_controls,
    partial_symmetry_solutions,
    plasma_solution,
    point_generators,
    static_reduced_checks,
    truncated_system_check,
    v0_exponent,
    x4_invariant_solutions,
    x4_linear_checks,
    x4_rotation,
    zero_field,
)

SYS = plasma()
HARRIS = plasma_solution("harris_static", "-ln(cosh(x))", "0")


# --- generators ----------------------------------------------------------------


@pytest.mark.parametrize("g", point_generators(), ids=lambda g: g.name)
def test_point_generators_are_symmetries(g):
    rep = infinitesimal_symmetry_check(g, SYS, 200)
    assert rep.passed, str(rep)


@pytest.mark.parametrize("g", negative_controls(), ids=lambda g: g.name)
def test_negative_controls_fail(g):
    rep = infinitesimal_symmetry_check(g, SYS, 200)
    assert rep.max > 1e-3


time_fn = st.sampled_from(["t", "t^2", "sin(t)", "cos(2*t)", "exp(t)", "1", "t^3 - 2*t", "1/(2 + t)"])


@settings(max_examples=10, deadline=None)
@given(time_fn, time_fn)
def test_xab_is_a_symmetry_for_any_time_functions(A, B):
    assert infinitesimal_symmetry_check(XAB(A, B), SYS, 60).passed


@settings(max_examples=10, deadline=None)
@given(time_fn)
def test_xh_is_a_symmetry_for_any_time_function(H):
    assert infinitesimal_symmetry_check(XH(H), SYS, 60).passed


def test_instances_count():
    assert len(instances()) == 3
    assert len(point_generators()) == 4 + 2 * 3


def test_time_functions_must_depend_on_t_only():
    with pytest.raises(ValueError):
        XH("x*t")
    with pytest.raises(ValueError):
        build_generator("XAB", A="t")
    with pytest.raises(KeyError):
        build_generator("X9")


# --- commutators ---------------------------------------------------------------


@pytest.mark.parametrize("row", commutator_table(), ids=lambda r: r[0])
def test_commutator_table(row):
    _, got, want = row
    assert fields_equal(got, want)


@pytest.mark.parametrize("A, B, C, D", [("t", "1", "t^2", "t"), ("sin(t)", "t^2", "exp(t)", "cos(t)")])
def test_commutator_table_other_time_functions(A, B, C, D):
    assert all(fields_equal(g, w) for _, g, w in commutator_table(A, B, C, D, H="t^3"))


def test_abelian_bracket_coefficient():
    box = Box({"t": (-1, 1)})
    # H~ is A D_t - B C_t - C B_t + D A_t; the misprinted variant differs
    assert numeric_equal(h_tilde("t", "1", "t^2", "t"), sym("0"), box)
    assert not numeric_equal(h_tilde_printed("t", "1", "t^2", "t"), h_tilde("t", "1", "t^2", "t"), box)


@pytest.mark.parametrize("names", [("X1", "X2", "X4"), ("X1", "X3", "X4")])
def test_jacobi(names):
    gs = [build_generator(n) for n in names]
    assert fields_equal(jacobi(*gs), zero_field())


def test_jacobi_with_function_families():
    assert fields_equal(jacobi(build_generator("X4"), XAB("t", "t^2"), XAB("sin(t)", "1")), zero_field())


# --- flows -----------------------------------------------------------------------


def test_static_harris_solves_plasma_system():
    assert HARRIS.residual_report(SYS).passed


@pytest.mark.parametrize("lam", [0.0, 0.5, 1.0, -2.0])
def test_rotation_orbit(lam):
    assert x4_rotation(HARRIS, lam).residual_report(SYS).passed


def test_rotation_at_zero_is_identity():
    pts = HARRIS.sample(50)
    a, b = HARRIS.evaluate(pts), x4_rotation(HARRIS, 0.0).evaluate(pts)
    assert all(np.max(np.abs(a[k] - b[k])) <= 1e-12 for k in "uv")


@pytest.mark.parametrize("A, B", [("sin(t)", "t^2"), ("exp(t)", "1"), ("t", "-t")])
def test_moving_frame(A, B):
    assert moving_frame_transform(HARRIS, A, B).residual_report(SYS).passed


# --- canonical reduction ---------------------------------------------------------


@pytest.mark.parametrize("A, B", [("cos(t)", "sin(t)"), ("2*cos(3*t)", "2*sin(3*t)")])
def test_canonical_chart_inverts(A, B):
    ch = chart(A, B)
    box = Box({"s": (-1, 1), "w": (-1, 1), "t": (-1, 1)})
    assert numeric_equal(ch.to_xy(ch.to_sw(sym("x"))), sym("x"), Box({"x": (-1, 1), "y": (-1, 1), "t": (-1, 1)}))
    assert numeric_equal(ch.to_sw(ch.s), sym("s"), box)
    assert numeric_equal(ch.to_sw(ch.w), sym("w"), box)


@pytest.mark.parametrize("U0, V0", [("s^2", "s^2/2"), ("cosh(s)", "s"), ("exp(s)", "0")])
def test_canonical_reduction_solves(U0, V0):
    sol = canonical_reduction("cos(t)", "sin(t)", U0, V0)
    assert sol.residual_report(SYS).passed


def test_canonical_reduction_rejects_time_dependence():
    # N = 1 + t^2 makes U0 - N U0_ss depend on t
    with pytest.raises(ReductionError):
        canonical_reduction("1", "t", "s^2", "0")


# --- invariant solutions ---------------------------------------------------------


@pytest.mark.parametrize("a", [1, 2, 3])
def test_x4_invariant_family(a):
    V0 = f"r^{a}*t^({v0_exponent(a)!r})"
    r1, r2 = x4_linear_checks("r^2*t", V0)
    assert r1.passed and r2.passed
    sol = x4_invariant_solutions("r^2*t", V0)
    assert sol.residual_report(SYS).passed
    assert invariance_report(build_generator("X4"), sol).passed


@given(st.floats(0.5, 4.0))
def test_v0_exponent_solves_its_linear_equation(a):
    _, r2 = x4_linear_checks("r^2*t", f"r^({a!r})*t^({v0_exponent(a)!r})", n=30)
    assert r2.passed


def test_wrong_exponent_rejected():
    with pytest.raises(ReductionError):
        x4_invariant_solutions("r^2*t", "r^2*t^(0.5)")


# --- combined ansatz ---------------------------------------------------------------


def test_time_plus_xh_ansatz():
    a = combined_symmetry_ansatz("t_plus_XH", T="t^3", U="1", V="2")
    assert a.ok


def test_time_plus_xab_ansatz():
    a = combined_symmetry_ansatz("t_plus_XAB", A="cos(t)", B="sin(t)", alpha="sin(t)", beta="-cos(t)", U="-ln(cosh(x))", V="0")
    assert a.ok


def test_xab_ansatz_needs_primitives():
    with pytest.raises(ReductionError):
        combined_symmetry_ansatz("t_plus_XAB", A="cos(t)", B="sin(t)", alpha="cos(t)", beta="-cos(t)", U="0", V="0")


def test_reduced_static_negative():
    rep = static_reduced_checks(sym("x"), sym("y"))
    assert not rep.passed


# --- contact and partial symmetries --------------------------------------------------


def test_contact_field_is_marked():
    assert contact_field().contact


@pytest.mark.parametrize("sign", [1, -1])
@pytest.mark.parametrize("k, kappa", [(math.sqrt(2), 1.0), (math.sqrt(5), 2.0)])
def test_exchanged_contact_solutions(k, kappa, sign):
    # needs k^2 - kappa^2 = 1
    sol = contact_solution(k, kappa, form="exp_sin", sign=sign)
    assert conditional_symmetry_check(contact_field(), SYS, sol, 100).passed


def test_exchanged_contact_needs_the_dispersion_relation():
    assert not contact_check(1.0, 1.0, form="exp_sin").passed


def test_literal_contact_form_fails():
    # sin in x with exp in y does not satisfy the system; the exchanged form does
    assert not contact_check(math.sqrt(2), 1.0, form="sin_exp").passed


@pytest.mark.parametrize("name", ELEMENTARY)
def test_elementary_partial_symmetry_solutions(name):
    _, red, full = partial_symmetry_solutions(name)
    assert red.passed, str(red)
    assert full.passed, str(full)


def test_truncated_system():
    reports, rogue = truncated_system_check(100)
    assert all(r.passed for r in reports)
    assert rogue.ok and not rogue.passed
