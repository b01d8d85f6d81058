"""Error function for complex arguments.

Maclaurin series inside |z| <= 3 (and in the strip |Re z| < 1, where the
continued fraction converges too slowly); Lentz-evaluated continued fraction
for erfc beyond.
"""
from __future__ import annotations

import numpy as np

_TWO_OVER_SQRT_PI = 2.0 / np.sqrt(np.pi)
SERIES_RADIUS = 3.0


def _erf_series(z: np.ndarray) -> np.ndarray:
    # erf z = 2/sqrt(pi) * sum_n (-1)^n z^(2n+1) / (n! (2n+1))
    z2 = -z * z
    term = z.copy()
    total = z.copy()
    done = np.zeros(z.shape, bool)
    for n in range(1, 800):
        term = term * z2 / n
        contrib = term / (2 * n + 1)
        total = total + np.where(done, 0, contrib)
        small = np.abs(contrib) <= 1e-17 * np.abs(total)
        done |= small & (n > np.abs(z2))
        if done.all():
            break
    return _TWO_OVER_SQRT_PI * total


def _erfc_cf(z: np.ndarray) -> np.ndarray:
    # erfc z = exp(-z^2)/sqrt(pi) * 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))),  Re z > 0
    tiny = 1e-300
    f = z.copy()
    f[f == 0] = tiny
    c = f.copy()
    d = np.zeros_like(z)
    for n in range(1, 500):
        a = n / 2.0
        d = z + a * d
        d[d == 0] = tiny
        c = z + a / c
        c[c == 0] = tiny
        d = 1.0 / d
        delta = c * d
        f = f * delta
        if np.all(np.abs(delta - 1.0) < 1e-16):
            break
    return np.exp(-z * z) / np.sqrt(np.pi) / f


def erf_complex(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z).copy()
    out = np.empty_like(z)
    use_series = (np.abs(z) <= SERIES_RADIUS) | (np.abs(z.real) < 1.0)
    if use_series.any():
        out[use_series] = _erf_series(z[use_series])
    cf = ~use_series
    if cf.any():
        w = z[cf]
        flip = w.real < 0
        w = np.where(flip, -w, w)
        val = 1.0 - _erfc_cf(w)
        out[cf] = np.where(flip, -val, val)
    return out[0] if scalar else out
