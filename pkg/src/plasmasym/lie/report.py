"""Residual reports."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _clean(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer, int)):
        return int(v)
    if isinstance(v, (np.complexfloating, complex)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in sorted(v.items())}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_clean(x) for x in v.tolist()]
    return v


@dataclass
class ResidualReport:
    """Per-sample scaled residuals of one check; `passed` iff max <= tol.

    `expect_fail` marks negative controls: such a report is *good* when the
    check fails, which `ok` accounts for.
    """

    check: str
    seed: int
    tol: float
    residuals: np.ndarray
    worst_points: list = field(default_factory=list)
    resampled: int = 0
    notes: list = field(default_factory=list)
    expect_fail: bool = False
    fail_threshold: float | None = None

    @property
    def samples(self) -> int:
        return int(np.size(self.residuals))

    @property
    def max(self) -> float:
        return float(np.max(self.residuals, initial=0.0))

    @property
    def mean(self) -> float:
        return float(np.mean(self.residuals)) if self.samples else 0.0

    @property
    def passed(self) -> bool:
        return bool(self.samples > 0 and self.max <= self.tol)

    @property
    def ok(self) -> bool:
        """True when the outcome is the expected one."""
        if not self.expect_fail:
            return self.passed
        threshold = self.tol if self.fail_threshold is None else self.fail_threshold
        return bool(self.samples > 0 and self.max > threshold)

    def to_dict(self, with_residuals=False):
        d = {
            "check": self.check,
            "seed": int(self.seed),
            "samples": self.samples,
            "max": self.max,
            "mean": self.mean,
            "tol": float(self.tol),
            "pass": self.passed,
            "expect_fail": self.expect_fail,
            "ok": self.ok,
            "resampled": int(self.resampled),
            "worst_points": _clean(self.worst_points),
            "notes": list(self.notes),
        }
        if self.fail_threshold is not None:
            d["fail_threshold"] = float(self.fail_threshold)
        if with_residuals:
            d["residuals"] = _clean(self.residuals)
        return d

    def __str__(self):
        flag = "PASS" if self.passed else "FAIL"
        if self.expect_fail:
            flag += " (expected fail)" if self.ok else " (UNEXPECTED pass)"
        return f"{self.check}: {flag} max={self.max:.3e} mean={self.mean:.3e} tol={self.tol:g} n={self.samples}"


def worst(residuals, points: dict, k: int = 3) -> list:
    """The k worst sample points as plain dicts."""
    residuals = np.asarray(residuals)
    if residuals.size == 0:
        return []
    idx = np.argsort(-residuals, kind="stable")[:k]
    out = []
    for i in idx:
        pt = {name: np.asarray(v)[i].item() if np.ndim(v) else np.asarray(v).item() for name, v in sorted(points.items())}
        out.append({"residual": float(residuals[i]), "point": pt})
    return out


def combine(check: str, reports, seed: int, tol: float | None = None) -> ResidualReport:
    """Concatenate several reports into one (max over all)."""
    reports = list(reports)
    res = np.concatenate([np.asarray(r.residuals, float).ravel() for r in reports]) if reports else np.zeros(0)
    tol = min(r.tol for r in reports) if tol is None else tol
    pts = sorted((p for r in reports for p in r.worst_points), key=lambda p: -p["residual"])[:3]
    return ResidualReport(check, seed, tol, res, pts, sum(r.resampled for r in reports))


__all__ = ["ResidualReport", "worst", "combine"]
