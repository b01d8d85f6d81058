"""Symmetry classification, reduction and a worked equilibrium for

    u_xx + (a/x) u_x + u_yy = x^(2p) F(u) + G(u),   x > 0.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy import integrate, optimize

from .expr import Box, Expr, Tape, Var, add, as_expr, call, differentiate, div, mul, numeric_equal, power, simplify, sub, substitute, sym, to_infix
from .expr.sampling import DEFAULT_SEED, scaled_difference
from .lie import GeneratorField, ResidualReport, infinitesimal_symmetry_check, worst
from .solution import ClosedFormSolution
from .systems import PLANE, gss

log = logging.getLogger(__name__)

X, Y, U = Var("x"), Var("y"), Var("u")
U_RANGE = (0.2, 2.0)
X_RANGE = (0.05, 2.0)


def _e(v) -> Expr:
    return sym(v) if isinstance(v, str) else simplify(as_expr(v))


@dataclass(frozen=True)
class GSSEquation:
    a: float
    p: float
    F: Expr
    G: Expr
    u_range: tuple = U_RANGE

    @classmethod
    def of(cls, a, p, F, G, u_range=U_RANGE):
        F, G = _e(F), _e(G)
        for name, e in (("F", F), ("G", G)):
            if e.free_vars - {"u"}:
                raise ValueError(f"{name} must depend on u only, got {to_infix(e)}")
        return cls(float(a), float(p), F, G, tuple(u_range))

    def system(self):
        return gss(self.a, self.p, self.F, self.G, X_RANGE, self.u_range)

    def residual_expr(self, u: Expr) -> tuple[Expr, Expr]:
        """(lhs, rhs) with u(x, y) substituted."""
        d = differentiate
        lhs = add(d(d(u, "x"), "x"), mul(self.a, power(X, -1), d(u, "x")), d(d(u, "y"), "y"))
        rhs = add(mul(power(X, 2 * self.p), substitute(self.F, {"u": u})), substitute(self.G, {"u": u}))
        return lhs, rhs

    def label(self):
        return f"a={self.a:g},p={self.p:g},F={to_infix(self.F)},G={to_infix(self.G)}"


@dataclass(frozen=True)
class EquivalenceTransform:
    kind: str
    param: float

    def __post_init__(self):
        if self.kind not in ("shift_u", "scale_u", "scale_xy"):
            raise ValueError(f"unknown transform {self.kind!r}")
        if self.kind != "shift_u" and self.param == 0:
            raise ValueError(f"{self.kind} needs a nonzero parameter")

    def inverse(self) -> "EquivalenceTransform":
        if self.kind == "shift_u":
            return EquivalenceTransform("shift_u", -self.param)
        return EquivalenceTransform(self.kind, 1.0 / self.param)


def apply_equivalence(eq: GSSEquation, t: EquivalenceTransform) -> GSSEquation:
    """Equation solved by the transformed solution (see `transform_solution`)."""
    k = t.param
    if t.kind == "shift_u":
        sh = {"u": sub(U, k)}
        F, G = substitute(eq.F, sh), substitute(eq.G, sh)
        rng = (eq.u_range[0] + k, eq.u_range[1] + k)
    elif t.kind == "scale_u":
        sc = {"u": div(U, k)}
        F, G = mul(k, substitute(eq.F, sc)), mul(k, substitute(eq.G, sc))
        rng = tuple(sorted((eq.u_range[0] * k, eq.u_range[1] * k)))
    else:
        F, G = mul(k ** (-2 * (eq.p + 1)), eq.F), mul(k**-2, eq.G)
        rng = eq.u_range
    return GSSEquation(eq.a, eq.p, simplify(F), simplify(G), rng)


def transform_solution(u: Expr, t: EquivalenceTransform) -> Expr:
    k = t.param
    if t.kind == "shift_u":
        return simplify(add(u, k))
    if t.kind == "scale_u":
        return simplify(mul(k, u))
    return simplify(substitute(u, {"x": div(X, k), "y": div(Y, k)}))


def same_equation(e1: GSSEquation, e2: GSSEquation, tol=1e-12, n=50, seed=DEFAULT_SEED) -> bool:
    box = Box({"u": e1.u_range})
    return (
        math.isclose(e1.a, e2.a, abs_tol=tol)
        and math.isclose(e1.p, e2.p, abs_tol=tol)
        and numeric_equal(e1.F, e2.F, box, n, tol, seed)
        and numeric_equal(e1.G, e2.G, box, n, tol, seed)
    )


def solution_residual(eq: GSSEquation, u: Expr, n=100, seed=DEFAULT_SEED, box=None) -> ResidualReport:
    """Scaled residual of u(x, y) in eq over a box in the x > 0 half plane."""
    box = box or Box({"x": (0.2, 1.5), "y": (-1, 1)})
    lhs, rhs = eq.residual_expr(_e(u))
    pts = box.sample(n, seed)
    a, b = Tape([lhs, rhs]).run(pts)
    res = scaled_difference(np.broadcast_to(a, (n,)), np.broadcast_to(b, (n,)))
    return ResidualReport(f"gss-solution:{to_infix(_e(u))}", seed, 1e-9, res, worst(res, pts))


# ------------------------------------------------------------ classification


def dilation(u_coeff) -> GeneratorField:
    return GeneratorField(PLANE, {"x": X, "y": Y, "u": _e(u_coeff)}, f"x dx + y dy + ({to_infix(_e(u_coeff))}) du")


def case(name: str, **params):
    """(equation, generator) for a classification case.

    a: q, p, a           F = u^(1+(p+1)/q), G = u^(1+1/q), X = x dx + y dy - 2q u du
    a': c, c1, c2, q, p, a  shifted/scaled family, X = x dx + y dy - 2q(c+u) du
    b: p, a              F = exp((1+p)u), G = exp(u), X = x dx + y dy - 2 du
    c: a, F              p = -1, G = 0, X = x dx + y dy
    laplace_power: k     a = p = 0, G = 0, F = u^k, X = (k-1)(x dx + y dy) - 2u du
    """
    a = params.get("a", -1.0)
    p = params.get("p", 1.0)
    if name in ("a", "a'"):
        q = params["q"]
        if q == 0:
            raise ValueError("q must be nonzero")
        c = params.get("c", 0.0) if name == "a'" else 0.0
        c1 = params.get("c1", 1.0) if name == "a'" else 1.0
        c2 = params.get("c2", 1.0) if name == "a'" else 1.0
        base = add(c, U)
        F = mul(c1, power(base, 1 + (p + 1) / q))
        G = mul(c2, power(base, 1 + 1 / q))
        lo = max(U_RANGE[0], 0.1 - c + 0.1)
        eq = GSSEquation.of(a, p, F, G, (lo, lo + U_RANGE[1] - U_RANGE[0]))
        return eq, dilation(mul(-2 * q, base))
    if name == "b":
        return GSSEquation.of(a, p, call("exp", mul(1 + p, U)), call("exp", U)), dilation(-2)
    if name == "c":
        return GSSEquation.of(a, -1, params.get("F", "u^3"), 0), dilation(0)
    if name == "laplace_power":
        k = params["k"]
        g = GeneratorField(PLANE, {"x": mul(k - 1, X), "y": mul(k - 1, Y), "u": mul(-2, U)}, f"laplace_power(k={k})")
        return GSSEquation.of(0, 0, power(U, k), 0), g
    raise KeyError(f"unknown case {name!r}")


def _negatives(name, eq, gen, params):
    """(label, equation, generator) pairs that must fail."""
    out = [("perturbed generator", eq, GeneratorField(PLANE, {**gen.coeffs, "u": add(gen.coeff("u"), mul(0.5, U))}, "perturbed"))]
    if name in ("a", "a'"):
        bumped = GSSEquation(eq.a, eq.p, simplify(mul(eq.F, power(add(params.get("c", 0.0) if name == "a'" else 0.0, U), 0.3))), eq.G, eq.u_range)
        out.append(("perturbed exponent", bumped, gen))
    elif name == "b":
        out.append(("perturbed exponent", GSSEquation(eq.a, eq.p, simplify(call("exp", mul(1.3 + eq.p, U))), eq.G, eq.u_range), gen))
    elif name == "c":
        out.append(("nonzero G", GSSEquation(eq.a, eq.p, eq.F, U, eq.u_range), gen))
    elif name == "laplace_power":
        out.append(("perturbed exponent", GSSEquation(eq.a, eq.p, simplify(power(U, params["k"] + 0.5)), eq.G, eq.u_range), gen))
    return out


def verify_classification_case(name: str, samples=200, seed=DEFAULT_SEED, tol=1e-9, **params) -> ResidualReport:
    eq, gen = case(name, **params)
    return infinitesimal_symmetry_check(gen, eq.system(), samples, seed, tol, check=f"gss-case-{name}:{eq.label()}")


def classification_negatives(name: str, samples=200, seed=DEFAULT_SEED, **params) -> list[ResidualReport]:
    eq, gen = case(name, **params)
    return [
        infinitesimal_symmetry_check(g, e.system(), samples, seed, 1e-9, check=f"gss-case-{name}:{label}", expect_fail=True, fail_threshold=1e-3)
        for label, e, g in _negatives(name, eq, gen, params)
    ]


def shifted_family_check(c, c1, c2, p, q, a=-1.0, samples=200, seed=DEFAULT_SEED, tol=1e-9) -> ResidualReport:
    return verify_classification_case("a'", samples, seed, tol, c=c, c1=c1, c2=c2, p=p, q=q, a=a)


def family_image(c, c2, p, q, a=-1.0) -> GSSEquation:
    """Case (a) pushed through scale_u(c2^-q) then shift_u(-c); gives a' with c1 = c2^(p+1)."""
    eq, _ = case("a", q=q, p=p, a=a)
    eq = GSSEquation(eq.a, eq.p, eq.F, eq.G, (0.5, 2.0))
    eq = apply_equivalence(eq, EquivalenceTransform("scale_u", c2 ** (-q)))
    return apply_equivalence(eq, EquivalenceTransform("shift_u", -c))


def random_instances(n=5, seed=DEFAULT_SEED):
    rng = np.random.default_rng(seed)
    forms = ["{c}*u^2", "{c}*exp(u)", "{c}*sin(u) + u", "{c}*u^3 - u", "{c}/(1 + u^2)", "{c}*cosh(u)"]
    out = []
    for _ in range(n):
        a = float(np.round(rng.uniform(0.5, 2), 3)) * (1 if rng.random() < 0.5 else -1)
        p = float(np.round(rng.uniform(-1.5, 1.5), 3))
        fF, fG = rng.choice(forms, 2, replace=False)
        F = fF.format(c=round(float(rng.uniform(0.5, 2)), 3))
        G = fG.format(c=round(float(rng.uniform(0.5, 2)), 3))
        out.append(GSSEquation.of(a, p, F, G))
    return out


def kernel_check(n=5, samples=200, seed=DEFAULT_SEED):
    """(d/dy reports, d/dx reports) over random instances; the latter must fail."""
    dy = GeneratorField(PLANE, {"y": as_expr(1)}, "dy")
    dx = GeneratorField(PLANE, {"x": as_expr(1)}, "dx")
    ys, xs = [], []
    for eq in random_instances(n, seed):
        sys = eq.system()
        ys.append(infinitesimal_symmetry_check(dy, sys, samples, seed, check=f"kernel-dy:{eq.label()}"))
        xs.append(infinitesimal_symmetry_check(dx, sys, samples, seed, check=f"kernel-dx:{eq.label()}", expect_fail=True, fail_threshold=1e-3))
    return ys, xs


# ------------------------------------------------------ conditional reduction


@dataclass
class ConditionalReduction:
    k: float
    p: float
    a: float
    F: Expr

    @property
    def G(self) -> Expr:
        return simplify(mul(self.k**2, self.F))

    @property
    def equation(self) -> GSSEquation:
        return GSSEquation(self.a, self.p, self.F, self.G)

    @property
    def generator(self) -> GeneratorField:
        return GeneratorField(PLANE, {"x": as_expr(self.k), "y": power(X, self.p)}, f"{self.k:g} dx + x^{self.p:g} dy")

    @property
    def s(self) -> Expr:
        if self.p == -1:
            return sub(call("ln", X), mul(self.k, Y))
        return sub(div(power(X, self.p + 1), self.p + 1), mul(self.k, Y))

    def s_of(self, x, y):
        x = np.asarray(x, float)
        base = np.log(x) if self.p == -1 else x ** (self.p + 1) / (self.p + 1)
        return base - self.k * np.asarray(y, float)

    def y_of(self, x, s):
        return (self.s_of(x, 0.0) - s) / self.k

    def lift(self, phi) -> Expr:
        """u(x, y) = phi(s) for a symbolic profile phi (an expression in s)."""
        return simplify(substitute(_e(phi), {"s": self.s}))

    def lift_solution(self, phi, x_range=(0.2, 1.5), y_range=(-1, 1)) -> ClosedFormSolution:
        return ClosedFormSolution(
            f"lifted({to_infix(_e(phi))})", {"u": self.lift(phi)}, {}, Box({"x": x_range, "y": y_range}), [f"conditional_reduction(k={self.k},p={self.p})"]
        )

    def lifted_residual(self, profile: "Profile", n=100, seed=DEFAULT_SEED, tol=1e-9, h=1e-3) -> ResidualReport:
        """Residual of u = phi(s(x, y)) for a numerical profile.

        phi'' is a fourth-order central difference of the quadrature phi', so the
        check is not a restatement of phi'' = F(phi).
        """
        rng = np.random.default_rng(seed)
        lo, hi = profile.s_span
        s = rng.uniform(lo + 2 * h, hi - 2 * h, n)
        x = rng.uniform(0.2, 1.5, n)
        phi, dphi = profile(s)
        d2 = (-profile(s + 2 * h)[1] + 8 * profile(s + h)[1] - 8 * profile(s - h)[1] + profile(s - 2 * h)[1]) / (12 * h)
        sx = x**self.p
        sxx = self.p * x ** (self.p - 1)
        lhs = d2 * sx**2 + dphi * sxx + self.a / x * dphi * sx + d2 * self.k**2
        (Fv,) = Tape([self.F]).run({"u": phi})
        Fv = np.broadcast_to(Fv, (n,))
        rhs = x ** (2 * self.p) * Fv + self.k**2 * Fv
        res = scaled_difference(lhs, rhs)
        pts = {"x": x, "y": self.y_of(x, s), "s": s}
        return ResidualReport(f"lifted-profile:{to_infix(self.F)}", seed, tol, res, worst(res, pts))


def conditional_reduction(k, p, a, F) -> ConditionalReduction:
    if p == 0 or a != -p:
        raise ValueError(f"the reduction needs a = -p != 0 (got a={a}, p={p})")
    return ConditionalReduction(float(k), float(p), float(a), _e(F))


# --------------------------------------------------------------- quadrature


def _cheb_fit(f, lo, hi, tol=1e-14, max_deg=1024):
    """Chebyshev interpolant with degree doubled until the tail is negligible
    or stops shrinking at rounding level."""
    deg, prev = 16, np.inf
    while True:
        c = C.Chebyshev.interpolate(f, deg, domain=[lo, hi])
        scale = max(np.max(np.abs(c.coef)), 1e-300)
        tail = np.max(np.abs(c.coef[-3:])) / scale
        if tail <= tol or (tail <= 1e-11 and tail > 0.1 * prev):
            return c
        if deg >= max_deg:
            raise RuntimeError(f"profile not resolved on [{lo}, {hi}] (tail {tail:.1e})")
        prev = tail
        deg *= 2


_GL = np.polynomial.legendre.leggauss(64)


def _mean(Fc, a, b):
    """Mean of the interpolant over [a, b] (elementwise); no subtraction of antiderivatives."""
    x, w = _GL
    a, b = np.asarray(a, float)[..., None], np.asarray(b, float)[..., None]
    return np.sum(w * Fc((a + b) / 2 + (b - a) / 2 * x), axis=-1) / 2


@dataclass
class _Segment:
    s0: float
    s1: float
    phi0: float
    phi1: float
    direction: int
    W: object
    s_of_theta: C.Chebyshev
    turning_end: bool

    def phi_of_theta(self, th):
        return self.phi0 + (self.phi1 - self.phi0) * (1 - np.cos(th)) / 2

    def theta_of_s(self, s):
        lo = np.zeros_like(s)
        hi = np.full_like(s, math.pi)
        for _ in range(60):
            mid = (lo + hi) / 2
            below = self.s_of_theta(mid) < s
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return (lo + hi) / 2

    def evaluate(self, s):
        th = self.theta_of_s(s)
        phi = self.phi_of_theta(th)
        # W carries no cancellation, unlike dphi/dtheta / ds/dtheta near th = 0
        W = np.maximum(self.W(th), 0.0)
        return phi, self.direction * np.sqrt(2 * W)


@dataclass
class Profile:
    F: Expr
    u0: float
    p0: float
    s_max: float
    segments: list = field(default_factory=list)
    switches: list = field(default_factory=list)
    constant: bool = False

    @property
    def s_span(self):
        return (0.0, self.s_max)

    def __call__(self, s):
        s = np.atleast_1d(np.asarray(s, float))
        phi = np.full(s.shape, self.u0)
        dphi = np.zeros(s.shape)
        if self.constant:
            return phi, dphi
        for k, seg in enumerate(self.segments):
            last = k == len(self.segments) - 1
            m = (s >= seg.s0) & ((s < seg.s1) | (last & (s <= seg.s1 + 1e-12)))
            if np.any(m):
                phi[m], dphi[m] = seg.evaluate(np.minimum(s[m], seg.s1))
        return phi, dphi

    def table(self, n=201):
        s = np.linspace(0, self.s_max, n)
        phi, dphi = self(s)
        return s, phi, dphi


def _scalar(F: Expr):
    tape = Tape([F])

    def f(u):
        u = np.asarray(u, float)
        (v,) = tape.run({"u": u})
        v = np.broadcast_to(np.asarray(v, float), u.shape)
        if not np.all(np.isfinite(v)):
            raise ValueError(f"F = {to_infix(F)} is not finite on the traversed range")
        return np.array(v)

    return f


def _segment(Ff, phi0, phi1, W0, s0, direction, turning_end, anchor=None):
    """Chebyshev representation of one monotone stretch phi0 -> phi1.

    W = phi'^2/2 is formed as (distance to an end) * (mean of F), measured from
    phi0 on the first half and from a turning end on the second half, so W has
    no cancellation where it vanishes. With `anchor` (an equilibrium where W
    vanishes) W is measured from the anchor over the whole stretch.
    """
    far = phi1 if anchor is None else anchor
    Fc = _cheb_fit(Ff, min(phi0, far), max(phi0, far))
    L = phi1 - phi0
    scale = abs(L) * float(np.max(np.abs(Fc(np.array([phi0, (phi0 + phi1) / 2, phi1])))))
    if anchor is None and max(W0, scale) < 1e-280:
        raise ValueError(f"excursion from phi={phi0!r} is too small: phi'^2/2 underflows")
    if anchor is None and W0 < 1e-24 * scale:
        # below resolution phi0 acts as a turning point; shifts s by ~1e-12 relative
        W0 = 0.0
    elif turning_end and anchor is None:
        # match W0 to the represented end so both halves agree at the midpoint
        W0 = max(float(-L * _mean(Fc, np.array([phi0]), np.array([phi1]))[0]), 0.0)

    def W_theta(th):
        th = np.asarray(th, float)
        phi = phi0 + L * np.sin(th / 2) ** 2
        if anchor is not None:
            return -(anchor - phi) * _mean(Fc, phi, anchor)
        w = W0 + L * np.sin(th / 2) ** 2 * _mean(Fc, phi0, phi)
        if turning_end:
            back = -L * np.cos(th / 2) ** 2 * _mean(Fc, phi, phi1)
            w = np.where(th > math.pi / 2, back, w)
        return w

    def dsdth(th):
        w = np.maximum(W_theta(th), 1e-300)
        return np.abs(L) * np.sin(th) / 2 / np.sqrt(2 * w)

    ds = _cheb_fit(dsdth, 0.0, math.pi, tol=1e-13)
    s_th = ds.integ(lbnd=0.0) + s0
    return _Segment(s0, float(s_th(math.pi)), phi0, phi1, direction, W_theta, s_th, turning_end)


def _equilibrium_ahead(Fc, Wc, phi, cand, direction, W):
    """First zero of F between phi and cand at which W also vanishes, if any.

    There phi' -> 0 and phi'' -> 0 together: the profile only approaches it as
    s -> infinity.
    """
    lo, hi = min(phi, cand), max(phi, cand)
    roots = [r.real for r in Fc.roots() if abs(r.imag) <= 1e-12 * (1 + abs(hi - lo)) and lo <= r.real <= hi]
    for r in sorted(roots, key=lambda r: direction * r):
        if direction * (r - phi) > 0 and abs(Wc(r)) <= 1e-13 * (W + 1e-300) + 1e-300:
            return float(r)
    return None


def quadrature_integrate(F, u0: float, p0: float, s_max: float, step: float = 0.25, max_segments: int = 400) -> Profile:
    """phi'' = F(phi), phi(0) = u0, phi'(0) = p0, from the first integral
    phi'^2/2 = int_{u0}^{phi} F + p0^2/2, inverted branch by branch.

    At a turning point (phi' = 0) the motion continues in the direction of
    sign F(phi); each switch is logged and recorded in `Profile.switches`.
    Excursions whose phi'^2/2 underflows (amplitudes below ~1e-150 for O(1)
    forces) raise ValueError.
    """
    F = _e(F)
    if s_max <= 0:
        raise ValueError("s_max must be positive")
    Ff = _scalar(F)
    prof = Profile(F, float(u0), float(p0), float(s_max))
    f0 = float(Ff(np.array([u0]))[0])
    if p0 == 0 and f0 == 0:
        prof.constant = True
        return prof
    if f0 == 0 and p0 != 0 and 0.5 * p0 * p0 < 1e-280:
        # at an equilibrium the whole excursion is set by p0
        raise ValueError(f"p0={p0!r} is too small: p0^2/2 underflows")
    direction = int(np.sign(p0)) if p0 != 0 else int(np.sign(f0))
    phi, s, W = float(u0), 0.0, 0.5 * p0 * p0
    stalled = False
    h = step
    for _ in range(max_segments):
        if s >= s_max:
            return prof
        h, turning, end, Wf, star = _advance(Ff, phi, W, direction, h)
        if star is not None:
            if max(W, abs(float(Wf(0.5 * (phi + star))))) < 1e-280:
                raise ValueError(f"excursion from phi={phi!r} is too small: phi'^2/2 underflows")
            log.info("approaching equilibrium phi=%.17g from phi=%.6g at s=%.6g", star, phi, s)
            return _approach(prof, Ff, phi, star, s, direction, max_segments)
        if end != phi:
            seg = _segment(Ff, phi, end, W, s, direction, turning_end=turning)
            prof.segments.append(seg)
            s = seg.s1
            stalled = False
        elif stalled:
            raise ValueError(f"oscillation about phi={phi!r} is below the resolution of phi'^2/2")
        else:
            # the excursion is below the resolution of phi; turn in place
            stalled = True
        if turning:
            fb = float(Ff(np.array([end]))[0])
            if fb == 0:
                raise RuntimeError(f"equilibrium reached at phi={end}")
            new = int(np.sign(fb))
            log.info("turning point at s=%.6g phi=%.6g; continuing in direction %+d", s, end, new)
            prof.switches.append((s, end))
            direction, phi, W = new, end, 0.0
            h = step
        else:
            W = float(Wf(end))
            phi = end
            h *= 2
        if abs(phi) > 1e8:
            break
    raise RuntimeError(f"profile leaves the range before s_max={s_max}")


def _advance(Ff, phi, W, direction, h, retries=200):
    """Next stretch of length <= h: (h used, turning?, end, W(.), equilibrium or None).

    The step shrinks while the turning point sits in the first 1/64 of it, so
    small excursions are resolved relative to their own size.
    """
    f = abs(float(Ff(np.array([phi]))[0]))
    floor = 4 * np.finfo(float).eps * max(abs(phi), 1e-150)
    if W > 0 and max(1e-24 * f * h, f * floor) <= W < f * h / 64:
        # a small starting W bends s(theta) within the first ~sqrt(W / (f h)); resolve it first
        h = 64 * W / f
    for _ in range(retries):
        cand = phi + direction * h
        Fc = _cheb_fit(Ff, min(phi, cand), max(phi, cand))

        def Wf(v, Fc=Fc):
            v = np.asarray(v, float)
            return W + (v - phi) * _mean(Fc, np.full(v.shape, phi), v)

        star = _equilibrium_ahead(Fc, Wf, phi, cand, direction, W)
        if star is not None:
            return h, False, None, Wf, star
        grid = np.linspace(phi, cand, 513)[1:]
        Wg = Wf(grid)
        neg = np.nonzero(Wg <= 0)[0]
        if neg.size == 0:
            if Wg[-1] < 1e-3 * max(W, Wg.max()) and h > floor:
                # ending just short of a turning point; stop well before it
                h /= 2
                continue
            return h, False, cand, Wf, None
        j = neg[0]
        if j == 0 and W <= 0 and h > floor:
            # starting at a turning point and the return lies inside the first cell
            h = max(h / 512, floor)
            continue
        a = phi if j == 0 else grid[j - 1]
        end = optimize.brentq(lambda v: float(Wf(v)), a, grid[j], xtol=1e-15 * abs(grid[j] - a), rtol=4 * np.finfo(float).eps, maxiter=200) if Wf(a) > 0 else a
        if 0 < abs(end - phi) < h / 64:
            if 4 * abs(end - phi) < floor:
                # a turn within a few ulps is a turn in place
                return h, True, phi, Wf, None
            h = 4 * abs(end - phi)
            continue
        return h, True, end, Wf, None
    raise RuntimeError(f"turning point near phi={phi} not resolved")


def _approach(prof, Ff, phi, star, s, direction, max_segments):
    """Halve the distance to the equilibrium `star` until s_max is covered."""
    for _ in range(max_segments):
        if s >= prof.s_max:
            return prof
        end = phi + (star - phi) / 2
        if end == phi or end == star:
            break
        seg = _segment(Ff, phi, end, None, s, direction, False, anchor=star)
        prof.segments.append(seg)
        phi, s = end, seg.s1
    raise RuntimeError(f"equilibrium phi={star} resolved only up to s={s:.6g} < s_max={prof.s_max}")


def rk_oracle(F, u0, p0, s, rtol=1e-12, atol=1e-12):
    Ff = _scalar(_e(F))
    sol = integrate.solve_ivp(lambda _, y: [y[1], float(Ff(np.array([y[0]]))[0])], (0, float(np.max(s))), [u0, p0], "DOP853", t_eval=s, rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(sol.message)
    return sol.y[0], sol.y[1]


def quadrature_vs_rk(F, u0, p0, s_max, n=201):
    prof = quadrature_integrate(F, u0, p0, s_max)
    s, phi, dphi = prof.table(n)
    rphi, rdphi = rk_oracle(F, u0, p0, s)
    return float(np.max(np.abs(phi - rphi))), float(np.max(np.abs(dphi - rdphi))), prof


QUADRATURE_CASES = (
    ("u", 1.0, 0.0, 2.0),
    ("exp(2*u)", 0.0, -1.0, 2.0),
    ("-sin(u)", 1.0, 0.0, 12.0),
)


# ------------------------------------------------------------ worked example


@dataclass
class WorkedSolution:
    c1: float
    x0: float
    solution: ClosedFormSolution
    equation: GSSEquation

    def pressure(self, x):
        return self.c1 / (4 * math.pi) * (self.x0**4 - np.asarray(x, float) ** 4)

    def current_sq(self, x):
        return 4 * (8 - self.c1) / 3 * (self.x0**6 - np.asarray(x, float) ** 6)

    def table(self, n=101):
        x = np.linspace(0, self.x0, n)
        return x, x**4, self.pressure(x), self.current_sq(x)


def worked_cylindrical_solution(c1=2.0, x0=1.0) -> WorkedSolution:
    """u = x^4 with a = -1, p = 1, F = c1, G = (8 - c1) u^(1/2)."""
    eq = GSSEquation.of(-1, 1, as_expr(c1), mul(8 - c1, power(U, 0.5)))
    sol = ClosedFormSolution("cylindrical", {"u": power(X, 4)}, {}, Box({"x": (0.05, x0), "y": (-1, 1)}), ["q=-2 dilation family"])
    return WorkedSolution(float(c1), float(x0), sol, eq)


__all__ = [
    "GSSEquation",
    "EquivalenceTransform",
    "apply_equivalence",
    "transform_solution",
    "same_equation",
    "solution_residual",
    "case",
    "verify_classification_case",
    "classification_negatives",
    "shifted_family_check",
    "family_image",
    "kernel_check",
    "random_instances",
    "conditional_reduction",
    "ConditionalReduction",
    "quadrature_integrate",
    "rk_oracle",
    "quadrature_vs_rk",
    "QUADRATURE_CASES",
    "Profile",
    "worked_cylindrical_solution",
    "WorkedSolution",
]
