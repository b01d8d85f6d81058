"""Closed-form solutions and their residual checks."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .expr import Box, Expr, Tape, as_expr, differentiate, simplify, substitute, to_prefix
from .expr.sampling import DEFAULT_SEED
from .lie.report import ResidualReport, worst


@dataclass
class ClosedFormSolution:
    """Named expressions for each dependent variable.

    `fields` maps dependent names to expressions in the independent variables
    and parameter names; `params` binds the parameters. `box` is the validity
    domain used for sampling (its exclusions encode the singular sets).
    """

    name: str
    fields: dict
    params: dict = field(default_factory=dict)
    box: Box | None = None
    provenance: list = field(default_factory=list)
    global_domain: bool | None = None
    generating_function: object = None

    def __post_init__(self):
        self.fields = {k: simplify(as_expr(v)) for k, v in self.fields.items()}
        self._jets: dict = {}

    def bound(self) -> dict:
        """Fields with parameters substituted as constants."""
        return {k: substitute(v, self.params) for k, v in self.fields.items()}

    def env(self, pts: dict) -> dict:
        out = dict(self.params)
        out.update(pts)
        return out

    def jet_expr(self, dep: str, index: str = "") -> Expr:
        key = (dep, "".join(sorted(index)))
        hit = self._jets.get(key)
        if hit is not None:
            return hit
        if not key[1]:
            e = self.fields[dep]
        else:
            e = differentiate(self.jet_expr(dep, key[1][:-1]), key[1][-1])
        self._jets[key] = e
        return e

    def jet(self, names, pts: dict) -> dict:
        """Numeric jet coordinates (and independents) at sample points."""
        space_names = sorted(set(names))
        exprs = []
        for name in space_names:
            dep, _, index = name.partition("_")
            exprs.append(self.jet_expr(dep, index) if dep in self.fields else as_expr(0))
        vals = Tape(exprs).run(self.env(pts))
        n = len(next(iter(pts.values())))
        out = dict(pts)
        for name, v in zip(space_names, vals):
            v = np.broadcast_to(np.asarray(v), (n,))
            if np.iscomplexobj(v):
                if np.max(np.abs(v.imag), initial=0.0) > 1e-9 * (1 + np.max(np.abs(v.real), initial=0.0)):
                    raise ValueError(f"{self.name}: {name} is not real on the sample")
                v = v.real
            out[name] = np.array(v)
        return out

    def evaluate(self, pts: dict) -> dict:
        vals = Tape([self.fields[k] for k in sorted(self.fields)]).run(self.env(pts))
        shape = np.shape(next(iter(pts.values())))
        return {k: np.array(np.broadcast_to(v, shape)) for k, v in zip(sorted(self.fields), vals)}

    def sample(self, n: int, seed: int = DEFAULT_SEED) -> dict:
        if self.box is None:
            raise ValueError(f"{self.name} has no sampling box")
        return self.box.sample(n, seed)

    def residual_report(self, system, n: int = 100, seed: int = DEFAULT_SEED, tol: float = 1e-9, check: str | None = None):
        """Scaled residual of `system` on this solution at n seeded box samples."""
        pts = self.sample(n, seed)
        names = set()
        for eq in system.equations:
            names |= {v for v in eq.free_vars if system.space.parse(v) is not None}
        jet = self.jet(names, pts)
        res = system.residuals(jet)
        per_point = res.max(axis=0)
        return ResidualReport(
            check or f"{system.name}:{self.name}",
            seed,
            tol,
            per_point,
            worst(per_point, pts),
        )

    def with_params(self, **kw) -> "ClosedFormSolution":
        params = dict(self.params)
        params.update(kw)
        return ClosedFormSolution(
            self.name, dict(self.fields), params, self.box, list(self.provenance), self.global_domain, self.generating_function
        )

    def to_dict(self):
        return {
            "name": self.name,
            "fields": {k: to_prefix(v) for k, v in sorted(self.fields.items())},
            "params": {k: (v if not isinstance(v, complex) else [v.real, v.imag]) for k, v in sorted(self.params.items())},
            "provenance": list(self.provenance),
            "global_domain": self.global_domain,
        }


__all__ = ["ClosedFormSolution"]
