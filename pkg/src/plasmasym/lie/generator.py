"""Vector fields on (independent, dependent) space and their prolongation."""
from __future__ import annotations

from dataclasses import dataclass

from ..expr import ZERO, Expr, Var, add, as_expr, differentiate, mul, simplify, sub, to_prefix
from .jet import JetSpace, coord_name


@dataclass(frozen=True)
class GeneratorField:
    """X = sum_i xi_i d/dx_i + sum_a zeta_a d/du_a.

    `coeffs` maps variable names (independent or dependent) to coefficient
    expressions; missing entries are zero. `contact=True` allows first-order
    jet coordinates in the coefficients; such fields are only accepted by the
    conditional-symmetry path.
    """

    space: JetSpace
    coeffs: dict
    name: str = ""
    contact: bool = False

    def __post_init__(self):
        known = set(self.space.independents) | set(self.space.dependents)
        clean = {}
        for k, v in self.coeffs.items():
            if k not in known:
                raise ValueError(f"{k!r} is not a variable of {self.space}")
            v = simplify(as_expr(v))
            if v is not ZERO:
                clean[k] = v
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))
        if not self.contact:
            for k, v in self.coeffs.items():
                jet = [n for n in v.free_vars if self.space.order_of(n) >= 1]
                if jet:
                    raise ValueError(f"point field {self.name!r} has derivative coordinates {jet} in {k}")

    def coeff(self, var: str) -> Expr:
        return self.coeffs.get(var, ZERO)

    def xi(self):
        return {i: self.coeff(i) for i in self.space.independents}

    def zeta(self):
        return {a: self.coeff(a) for a in self.space.dependents}

    def apply(self, f: Expr) -> Expr:
        """X(f) for f a function of the base variables."""
        return add(*(mul(c, differentiate(f, k)) for k, c in self.coeffs.items()))

    def scaled(self, c) -> "GeneratorField":
        return GeneratorField(self.space, {k: mul(c, v) for k, v in self.coeffs.items()}, self.name, self.contact)

    def __add__(self, other: "GeneratorField") -> "GeneratorField":
        keys = set(self.coeffs) | set(other.coeffs)
        return GeneratorField(
            self.space,
            {k: add(self.coeff(k), other.coeff(k)) for k in keys},
            f"{self.name}+{other.name}",
            self.contact or other.contact,
        )

    def __sub__(self, other):
        return self + other.scaled(-1)

    def to_dict(self):
        return {"name": self.name, "contact": self.contact, "coeffs": {k: to_prefix(v) for k, v in self.coeffs.items()}}


def prolong(g: GeneratorField, order: int, space: JetSpace | None = None) -> dict:
    """Prolonged coefficient table {coordinate name: coefficient}.

    Independent names map to xi; each dependent coordinate u_J (|J| <= order)
    maps to zeta^J built by zeta^{J,i} = D_i zeta^J - sum_j (D_i xi_j) u_{J,j}.
    """
    space = space or g.space
    if g.contact:
        raise ValueError("contact fields are handled by the conditional-symmetry check, not prolong()")
    if not 0 <= order <= 3:
        raise ValueError(f"prolongation order must be in 0..3, got {order}")
    xi = {i: g.coeff(i) for i in space.independents}
    D = space.total_derivative
    Dxi = {(i, j): D(xi[j], i) for i in space.independents for j in space.independents}
    table = dict(xi)
    for dep in space.dependents:
        table[dep] = g.coeff(dep)
        for J in space.multi_indices(order)[1:]:
            prev, i = J[:-1], J[-1]
            base = table[coord_name(dep, prev)]
            terms = [D(base, i)]
            for j in space.independents:
                dij = Dxi[(i, j)]
                if dij is not ZERO:
                    terms.append(mul(-1, dij, Var(coord_name(dep, prev + j))))
            table[coord_name(dep, J)] = add(*terms)
    return table


def apply_prolonged(table: dict, f: Expr) -> Expr:
    """pr X (f) = sum over coordinates of coefficient * df/dcoordinate."""
    terms = []
    for name in sorted(f.free_vars):
        c = table.get(name)
        if c is None or c is ZERO:
            continue
        terms.append(mul(c, differentiate(f, name)))
    return add(*terms)


def characteristic(g: GeneratorField, dep: str, space: JetSpace | None = None) -> Expr:
    """Q_a = zeta_a - sum_i xi_i u_{a,i} (the invariant-surface condition)."""
    space = space or g.space
    terms = [g.coeff(dep)]
    for i in space.independents:
        terms.append(mul(-1, g.coeff(i), Var(coord_name(dep, i))))
    return add(*terms)


def commutator(g1: GeneratorField, g2: GeneratorField) -> GeneratorField:
    """[g1, g2] coefficient-wise: g1(coeffs of g2) - g2(coeffs of g1)."""
    if g1.space != g2.space:
        raise ValueError("fields live on different spaces")
    keys = set(g1.space.independents) | set(g1.space.dependents)
    coeffs = {k: sub(g1.apply(g2.coeff(k)), g2.apply(g1.coeff(k))) for k in keys}
    return GeneratorField(g1.space, coeffs, f"[{g1.name},{g2.name}]", g1.contact or g2.contact)


__all__ = ["GeneratorField", "prolong", "apply_prolonged", "characteristic", "commutator"]
