"""Seeded sampling boxes and randomized semantic equality."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .evaluate import DomainError, Tape, evaluate_many
from .nodes import as_expr

DEFAULT_SEED = 20060202
DEFAULT_TOL = 1e-9


@dataclass
class Box:
    """Axis-aligned sampling region with excluded sets.

    `ranges` maps a real variable to (lo, hi). A complex variable maps to
    ((re_lo, re_hi), (im_lo, im_hi)). Each exclusion is a callable taking the
    dict of sampled arrays and returning a boolean mask of rejected points.
    """

    ranges: dict
    exclusions: list[Callable] = field(default_factory=list)
    label: str = ""

    def excluded(self, pts: dict) -> np.ndarray:
        n = len(next(iter(pts.values())))
        bad = np.zeros(n, bool)
        for ex in self.exclusions:
            bad |= np.asarray(ex(pts), bool)
        return bad

    def _draw(self, rng: np.random.Generator, n: int) -> dict:
        pts = {}
        for name in sorted(self.ranges):
            spec = self.ranges[name]
            if isinstance(spec[0], (tuple, list)):
                (a, b), (c, d) = spec
                pts[name] = rng.uniform(a, b, n) + 1j * rng.uniform(c, d, n)
            else:
                lo, hi = spec
                pts[name] = rng.uniform(lo, hi, n)
        return pts

    def sample(self, n: int, rng: np.random.Generator | int | None = None, max_rounds: int = 200) -> dict:
        """`n` points inside the box, outside every exclusion (rejection sampling)."""
        if not isinstance(rng, np.random.Generator):
            rng = np.random.default_rng(DEFAULT_SEED if rng is None else rng)
        if n == 0:
            return {k: np.zeros(0) for k in sorted(self.ranges)}
        chunks: dict[str, list] = {k: [] for k in sorted(self.ranges)}
        have = 0
        for _ in range(max_rounds):
            pts = self._draw(rng, max(2 * (n - have), 16))
            keep = ~self.excluded(pts)
            for k in chunks:
                chunks[k].append(pts[k][keep])
            have += int(keep.sum())
            if have >= n:
                return {k: np.concatenate(v)[:n] for k, v in chunks.items()}
        raise ValueError(f"box {self.label or self.ranges} is (almost) entirely excluded")

    def with_exclusion(self, ex: Callable) -> "Box":
        return Box(dict(self.ranges), list(self.exclusions) + [ex], self.label)


def scaled_difference(a, b) -> np.ndarray:
    """|a - b| / (1 + max(|a|, |b|)), elementwise."""
    a = np.asarray(a)
    b = np.asarray(b)
    return np.abs(a - b) / (1.0 + np.maximum(np.abs(a), np.abs(b)))


def numeric_equal(a, b, domain: Box, n: int = 50, tol: float = DEFAULT_TOL, seed: int = DEFAULT_SEED) -> bool:
    """True iff |a-b| <= tol*(1+max(|a|,|b|)) at `n` seeded random points of `domain`.

    A domain error at any sample propagates with the offending point attached.
    """
    pts = domain.sample(n, seed)
    va, vb = evaluate_many(Tape([as_expr(a), as_expr(b)]), pts)
    return bool(np.all(scaled_difference(va, vb) <= tol))


def max_scaled_difference(a, b, domain: Box, n: int = 50, seed: int = DEFAULT_SEED) -> float:
    pts = domain.sample(n, seed)
    va, vb = evaluate_many(Tape([as_expr(a), as_expr(b)]), pts)
    return float(np.max(scaled_difference(va, vb), initial=0.0))


__all__ = ["Box", "numeric_equal", "max_scaled_difference", "scaled_difference", "DomainError"]
