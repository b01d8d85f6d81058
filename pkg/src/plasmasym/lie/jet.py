"""Jet coordinates and total derivatives.

A derivative coordinate is named ``<dep>_<letters>`` with the letters of the
multi-index sorted alphabetically, so ``u_xt`` and ``u_tx`` are both ``u_tx``.
Independent variables must be single letters.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from ..expr import ZERO, Expr, Var, add, differentiate, mul


def coord_name(dep: str, index: str = "") -> str:
    index = "".join(sorted(index))
    return f"{dep}_{index}" if index else dep


@dataclass(frozen=True)
class JetSpace:
    independents: tuple = ("x", "y", "t")
    dependents: tuple = ("u", "v")
    order: int = 3

    def __post_init__(self):
        for i in self.independents:
            if len(i) != 1:
                raise ValueError(f"independent variable names must be single letters, got {i!r}")
        for d in self.dependents:
            if "_" in d:
                raise ValueError(f"dependent variable names may not contain '_': {d!r}")

    def multi_indices(self, order: int | None = None):
        """All sorted multi-indices of length 0..order, shortest first."""
        order = self.order if order is None else order
        letters = sorted(self.independents)
        out = [""]
        for k in range(1, order + 1):
            out += ["".join(c) for c in combinations_with_replacement(letters, k)]
        return out

    def coords(self, order: int | None = None):
        """Dependent-variable jet coordinates up to `order` (deps and derivatives)."""
        return [coord_name(d, J) for d in self.dependents for J in self.multi_indices(order)]

    def derivative_coords(self, order: int | None = None):
        return [c for c in self.coords(order) if "_" in c]

    def parse(self, name: str):
        """(dep, multi-index) for a jet coordinate, or None for anything else."""
        dep, _, index = name.partition("_")
        if dep not in self.dependents:
            return None
        if index and any(ch not in self.independents for ch in index):
            return None
        if index != "".join(sorted(index)):
            return None
        return dep, index

    def var(self, dep: str, index: str = "") -> Expr:
        return Var(coord_name(dep, index))

    def raise_index(self, name: str, i: str) -> str:
        dep, index = self.parse(name)
        return coord_name(dep, index + i)

    def total_derivative(self, f: Expr, i: str) -> Expr:
        """D_i f = f_{x_i} + sum over jet coordinates c of c_{,i} * df/dc."""
        return _total_derivative(self, f, i)

    def D(self, f: Expr, index: str) -> Expr:
        for ch in index:
            f = self.total_derivative(f, ch)
        return f

    def order_of(self, name: str) -> int:
        p = self.parse(name)
        return -1 if p is None else len(p[1])


@lru_cache(maxsize=None)
def _total_derivative(space: JetSpace, f: Expr, i: str) -> Expr:
    terms = [differentiate(f, i)]
    for name in sorted(f.free_vars):
        if space.parse(name) is None:
            continue
        df = differentiate(f, name)
        if df is ZERO:
            continue
        terms.append(mul(Var(space.raise_index(name, i)), df))
    return add(*terms)


def laplacian_jet(space: JetSpace, f: Expr, variables=("x", "y")) -> Expr:
    return add(*(space.D(f, v + v) for v in variables))


def bracket(space: JetSpace, f: Expr, g: Expr, x="x", y="y") -> Expr:
    """{f, g} = f_x g_y - g_x f_y with total derivatives."""
    Df = space.total_derivative
    return add(mul(Df(f, x), Df(g, y)), mul(-1, Df(g, x), Df(f, y)))


@dataclass
class JetBox:
    """Sampling ranges for a jet point.

    `independent` maps independent names to (lo, hi); `dependent` maps
    dependent names to (lo, hi); every derivative coordinate uses
    `derivative`. `exclusions` act on the sampled dict like Box exclusions.
    """

    independent: dict
    dependent: dict
    derivative: tuple = (-2.0, 2.0)
    exclusions: tuple = ()

    def draw(self, space: JetSpace, rng: np.random.Generator, n: int, order: int) -> dict:
        pts = {}
        for name in sorted(space.independents):
            lo, hi = self.independent[name]
            pts[name] = rng.uniform(lo, hi, n)
        for dep in sorted(space.dependents):
            lo, hi = self.dependent.get(dep, self.derivative)
            pts[dep] = rng.uniform(lo, hi, n)
        lo, hi = self.derivative
        for name in sorted(space.derivative_coords(order)):
            pts[name] = rng.uniform(lo, hi, n)
        bad = np.zeros(n, bool)
        for ex in self.exclusions:
            bad |= np.asarray(ex(pts), bool)
        return {k: v[~bad] for k, v in pts.items()}


def small_abs(name: str, eps: float = 0.05):
    """Exclusion predicate |name| < eps."""
    return lambda p: np.abs(p[name]) < eps


def small_radius(eps: float = 0.05, x: str = "x", y: str = "y"):
    return lambda p: p[x] ** 2 + p[y] ** 2 < eps * eps


__all__ = [
    "JetSpace",
    "JetBox",
    "coord_name",
    "laplacian_jet",
    "bracket",
    "small_abs",
    "small_radius",
]
