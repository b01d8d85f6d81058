"""Differential equation systems on a jet space, with on-manifold projection."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..expr import ZERO, Expr, Tape, add, as_expr, differentiate, mul, simplify, sub
from ..expr.sampling import DEFAULT_SEED
from .jet import JetBox, JetSpace


@dataclass(frozen=True)
class Equation:
    """lhs = rhs. Residuals are scaled as |lhs - rhs| / (1 + max(|lhs|, |rhs|))."""

    lhs: Expr
    rhs: Expr = ZERO
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "lhs", simplify(as_expr(self.lhs)))
        object.__setattr__(self, "rhs", simplify(as_expr(self.rhs)))

    @property
    def delta(self) -> Expr:
        return sub(self.lhs, self.rhs)

    @property
    def free_vars(self):
        return self.lhs.free_vars | self.rhs.free_vars


def scaled(lhs, rhs):
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    return np.abs(lhs - rhs) / (1.0 + np.maximum(np.abs(lhs), np.abs(rhs)))


@dataclass(frozen=True)
class SolveRule:
    """Express `coord` from an equation that is affine in it.

    `equation` is an index, or a tuple of (index, weight) pairs meaning the
    weighted sum of those equations.
    """

    coord: str
    equation: object
    min_pivot: float = 0.05

    def terms(self):
        if isinstance(self.equation, int):
            return ((self.equation, 1),)
        return tuple(self.equation)

    def shifted(self, offset: int) -> "SolveRule":
        return SolveRule(self.coord, tuple((i + offset, w) for i, w in self.terms()), self.min_pivot)


@dataclass
class EquationSystem:
    name: str
    space: JetSpace
    equations: list
    rules: list
    box: JetBox
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.rules) != len({r.coord for r in self.rules}):
            raise ValueError("each solve rule must target a different coordinate")
        self._compiled = []
        for rule in self.rules:
            delta = add(*(mul(w, self.equations[i].delta) for i, w in rule.terms()))
            pivot = differentiate(delta, rule.coord)
            if pivot is ZERO:
                raise ValueError(f"{rule.coord} does not appear in equation {rule.equation}")
            if rule.coord in pivot.free_vars:
                raise ValueError(f"equation {rule.equation} is not affine in {rule.coord}")
            self._compiled.append((rule, Tape([delta, pivot])))
        self._residual_tape = Tape([e for eq in self.equations for e in (eq.lhs, eq.rhs)])

    @property
    def order(self) -> int:
        return max(
            (self.space.order_of(n) for eq in self.equations for n in eq.free_vars),
            default=0,
        )

    def env(self, pts: dict) -> dict:
        out = dict(self.params)
        out.update(pts)
        return out

    def project(self, pts: dict):
        """Overwrite distinguished derivatives so that every equation holds.

        Returns (projected points, mask of points whose pivot was too small).
        """
        pts = dict(pts)
        n = len(next(iter(pts.values())))
        bad = np.zeros(n, bool)
        for rule, tape in self._compiled:
            env = self.env(pts)
            env[rule.coord] = np.zeros(n)
            delta0, pivot = (np.broadcast_to(np.asarray(v), (n,)) for v in tape.run(env))
            small = np.abs(pivot) < rule.min_pivot
            bad |= small
            safe = np.where(small, 1.0, pivot)
            pts[rule.coord] = np.real_if_close(-delta0 / safe)
        return pts, bad

    def residuals(self, pts: dict) -> np.ndarray:
        """Scaled residual per equation, shape (n_equations, n)."""
        vals = self._residual_tape.run(self.env(pts))
        n = len(next(iter(pts.values())))
        rows = []
        for k in range(len(self.equations)):
            lhs = np.broadcast_to(vals[2 * k], (n,))
            rhs = np.broadcast_to(vals[2 * k + 1], (n,))
            rows.append(scaled(lhs, rhs))
        return np.array(rows)

    def sample_on_manifold(self, n: int, seed: int = DEFAULT_SEED, max_rounds: int = 100):
        """n projected jet points; returns (points, number of resampled points)."""
        rng = np.random.default_rng(seed)
        order = max(self.order, 1)
        chunks = []
        have = 0
        resampled = 0
        for _ in range(max_rounds):
            raw = self.box.draw(self.space, rng, max(2 * (n - have), 16), order)
            proj, bad = self.project(raw)
            resampled += int(bad.sum())
            keep = {k: np.asarray(v)[~bad] for k, v in proj.items()}
            chunks.append(keep)
            have += int((~bad).sum())
            if have >= n:
                break
        else:
            raise ValueError(f"could not find {n} regular points for {self.name}")
        pts = {k: np.concatenate([c[k] for c in chunks])[:n] for k in chunks[0]}
        return pts, resampled

    def with_equations(self, extra: list, extra_rules: list, name: str | None = None, first=True) -> "EquationSystem":
        """Append equations; their rules run before (first=True) the existing ones."""
        off = len(self.equations)
        new_rules = [r.shifted(off) for r in extra_rules]
        rules = new_rules + list(self.rules) if first else list(self.rules) + new_rules
        return EquationSystem(
            name or self.name, self.space, list(self.equations) + list(extra), rules, self.box, dict(self.params)
        )


__all__ = ["Equation", "SolveRule", "EquationSystem", "scaled"]
