import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plasmasym.expr import Box, numeric_equal, sym
from plasmasym.liouville import (
    CATALOG,
    GeneratingFunction,
    catalog,
    catalog_names,
    compose_gamma,
    eq2_solution,
    explicit_deformed_harris,
    flow_map,
    invariance_check,
    invariance_field_of,
    manifest,
    normalization_integral,
    orbit_values,
    solution_from_beta,
    solution_from_gamma,
    variant_equation_checks,
)
from plasmasym.systems import liouville

SYS = liouville()


def grid(n=30, seed=1, lo=-0.9, hi=0.9):
    return Box({"x": (lo, hi), "y": (lo, hi)}).sample(n, seed)


def u_of(sol, pts):
    return np.real(sol.evaluate(pts)["u"])


# --- catalog -----------------------------------------------------------------


def test_catalog_has_eight_entries():
    assert len(catalog_names()) == 8
    assert {"harris", "bennet", "island_chain", "deformed_harris", "p_family"} <= set(catalog_names())


@pytest.mark.parametrize("name", catalog_names())
def test_catalog_solutions_satisfy_liouville(name):
    rep = catalog(name, check=False).residual_report(SYS, 100)
    assert rep.passed, str(rep)


@pytest.mark.parametrize("name", catalog_names())
def test_invariance_characteristic_vanishes(name):
    rep = invariance_check(CATALOG[name].generating_function())
    assert rep.passed, str(rep)


def test_manifest_round_trips():
    data = json.loads(manifest())
    assert data["schema_version"] == 1
    names = [e["name"] for e in data["entries"]]
    assert names == catalog_names()
    bennet = data["entries"][names.index("bennet")]
    assert set(bennet["parameters"]) == {"k", "x0", "y0"}


def test_unknown_entry_and_parameter():
    with pytest.raises(KeyError):
        catalog("nope")
    with pytest.raises(KeyError):
        catalog("harris", lam=1.0)


@pytest.mark.parametrize("name, bad", [("island_chain", {"k": 1.0}), ("bennet", {"k": 0.0}), ("erf_bar", {"p": 0.0})])
def test_invalid_parameters_rejected(name, bad):
    with pytest.raises(ValueError):
        catalog(name, **bad)


def test_bennet_closed_form():
    sol = catalog("bennet", k=2.0, x0=0.5, y0=-0.3)
    pts = grid()
    r2 = (pts["x"] - 0.5) ** 2 + (pts["y"] + 0.3) ** 2
    assert np.allclose(u_of(sol, pts), np.log(4 / (4 + r2)), atol=1e-14)


def test_harris_is_minus_ln_cosh():
    pts = grid()
    assert np.allclose(u_of(catalog("harris"), pts), -np.log(np.cosh(pts["x"])), atol=1e-14)


# --- generating functions ------------------------------------------------------


poly = st.lists(st.integers(-3, 3), min_size=2, max_size=4).filter(lambda c: any(c[1:]))


def poly_expr(cs):
    return " + ".join(f"({c})*z^{i}" for i, c in enumerate(cs))


@settings(max_examples=25)
@given(poly)
def test_beta_form_matches_gamma_form(cs):
    """exp(beta) in the gamma formula gives the beta formula."""
    beta = sym(poly_expr(cs))
    a = solution_from_beta(beta, check=False)
    b = solution_from_gamma(GeneratingFunction(sym(f"exp({poly_expr(cs)})")), check=False)
    pts = a.sample(30, 2)
    assert np.allclose(u_of(a, pts), u_of(b, pts), rtol=1e-10, atol=1e-10)


@settings(max_examples=25)
@given(poly)
def test_polynomial_generators_solve_liouville(cs):
    gf = GeneratingFunction(sym(poly_expr(cs)))
    rep = solution_from_gamma(gf, check=False).residual_report(SYS, 40)
    assert rep.passed, str(rep)


@pytest.mark.parametrize("gamma", ["exp(z)", "z^2 + 1", "(z + 2)/(z - 3)"])
def test_inversion_gauge(gamma):
    """g and 1/g give the same u."""
    a = solution_from_gamma(GeneratingFunction(sym(gamma)), check=False)
    b = solution_from_gamma(GeneratingFunction(sym(f"1/({gamma})")), check=False)
    pts = a.sample(40, 4)
    assert np.allclose(u_of(a, pts), u_of(b, pts), atol=1e-12)


def test_compose_gamma_substitutes():
    gf = compose_gamma(CATALOG["harris"].generating_function(), sym("2*z + 1"))
    assert numeric_equal(gf.gamma, sym("exp(2*z + 1)"), Box({"z": (-1, 1)}))


def test_compose_pulls_back_exclusions():
    gf = compose_gamma(CATALOG["deformed_harris"].generating_function({"lam": 0.5}), sym("z + 1"))
    # the singular point z = 2 of the base maps back to z = 1
    assert gf.excluded(np.array([1.0 + 0j, 1.02 + 0j]))[0]
    assert not gf.excluded(np.array([0.0 + 0j]))[0]


@pytest.mark.parametrize(
    "gamma, phi0",
    [("exp(z)", "I"), ("z", "I*z"), ("z^2", "I*z/2")],
)
def test_invariance_field(gamma, phi0):
    got = invariance_field_of(GeneratingFunction(sym(gamma)))
    assert numeric_equal(got, sym(phi0), Box({"z": (0.2, 1)}))


# --- families and limits ---------------------------------------------------------


@pytest.mark.parametrize("p", [1e-2, 1e-3, 1e-4])
def test_p_family_first_order_in_p(p):
    # log(1 + pz)/p = z - p z^2/2 + O(p^2) gives u_p - u_harris = p*(-x + tanh(x)(x^2 - y^2)/2) + O(p^2)
    pts = grid()
    x, y = pts["x"], pts["y"]
    diff = u_of(catalog("p_family", p=p), pts) - u_of(catalog("harris"), pts)
    assert np.max(np.abs(diff - p * (-x + np.tanh(x) * (x**2 - y**2) / 2))) < 2 * p**2


def test_p_family_near_harris_close_to_origin():
    pts = grid(lo=-0.07, hi=0.07)
    assert np.max(np.abs(u_of(catalog("p_family", p=1e-3), pts) - u_of(catalog("harris"), pts))) < 1e-4


def test_p_family_at_one_is_shifted_bennet():
    pts = grid()
    assert np.allclose(u_of(catalog("p_family", p=1.0), pts), u_of(catalog("bennet", x0=-1.0), pts), atol=1e-14)


def test_deformed_harris_at_zero_is_harris():
    pts = grid()
    assert np.allclose(u_of(catalog("deformed_harris", lam=0.0), pts), u_of(catalog("harris"), pts), atol=1e-15)


@pytest.mark.parametrize("lam", [-0.4, 0.1, 0.3])
def test_explicit_deformed_harris(lam):
    a = explicit_deformed_harris(lam)
    b = catalog("deformed_harris", lam=lam)
    pts = b.sample(60, 8)
    assert np.allclose(u_of(a, pts), u_of(b, pts), atol=1e-12)


@pytest.mark.parametrize("lam", [0.1, 0.3, -0.2])
def test_flow_of_z2_is_a_mobius_map(lam):
    z = np.array([0.1 + 0.2j, -0.5 + 0.3j, 0.7 - 0.6j])
    w, dw = flow_map(sym("z^2"), lam, z)
    assert np.allclose(w, z / (1 - lam * z), atol=1e-11)
    assert np.allclose(dw, 1 / (1 - lam * z) ** 2, atol=1e-10)


def test_flow_at_zero_is_identity():
    z = np.array([0.3 + 0.1j])
    w, dw = flow_map(sym("z^2"), 0.0, z)
    assert w[0] == z[0] and dw[0] == 1


def test_orbit_values_reproduce_deformed_harris():
    sol = catalog("deformed_harris", lam=-0.2)
    pts = sol.sample(30, 6)
    got = orbit_values(CATALOG["harris"].generating_function(), sym("z^2"), -0.2, pts["x"], pts["y"])
    # g(Phi_lam(z)) with Phi_lam = z/(1 - lam z) is the lam member
    assert np.allclose(got, u_of(sol, pts), atol=1e-9)


# --- normalization -----------------------------------------------------------------


@pytest.mark.parametrize("k", [0.5, 1.0, 5.0])
def test_bennet_normalization(k):
    res = normalization_integral(catalog("bennet", k=k))
    assert not res.divergent
    assert abs(res.value - 4 * math.pi) < 1e-6


def test_bennet_off_center_normalization():
    res = normalization_integral(catalog("bennet", k=1.0, x0=3.0, y0=-2.0))
    assert abs(res.value - 4 * math.pi) < 1e-6


def test_harris_normalization_diverges():
    res = normalization_integral(catalog("harris"))
    assert res.divergent and math.isinf(res.value)
    assert res.annuli[-1] > res.annuli[0]


# --- related equations -------------------------------------------------------------


def test_variant_equations():
    reps = variant_equation_checks()
    assert all(r.ok for r in reps), [str(r) for r in reps if not r.ok]
    assert not reps[-1].passed


@pytest.mark.parametrize("c, cp", [(1.0, 0.0), (3.0, -1.0)])
def test_sech_profiles(c, cp):
    assert eq2_solution(c, cp).residual_report(SYS).passed
