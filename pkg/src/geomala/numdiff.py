"""Central finite differences, used as fallbacks and as verification oracles."""

from __future__ import annotations

import numpy as np


def coordinate_steps(x, step=1e-5, relative=True):
    """Per-coordinate step, h_i = step * (1 + |x_i|) when relative."""
    x = np.asarray(x, dtype=float)
    if relative:
        return step * (1.0 + np.abs(x))
    return np.full(x.shape, float(step))


def gradient(f, x, step=1e-5, relative=True):
    """Central-difference gradient of a scalar function."""
    x = np.asarray(x, dtype=float)
    h = coordinate_steps(x, step, relative)
    g = np.empty_like(x)
    for i in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h[i]
        xm[i] -= h[i]
        g[i] = (f(xp) - f(xm)) / (2.0 * h[i])
    return g


def jacobian(f, x, step=1e-5, relative=True):
    """Central-difference derivative of array-valued f; axis -1 indexes x_j."""
    x = np.asarray(x, dtype=float)
    h = coordinate_steps(x, step, relative)
    cols = []
    for j in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[j] += h[j]
        xm[j] -= h[j]
        cols.append((np.asarray(f(xp), dtype=float) - np.asarray(f(xm), dtype=float)) / (2.0 * h[j]))
    return np.stack(cols, axis=-1)


def hessian(f, x, step=1e-4, relative=True):
    """Second-difference Hessian of a scalar function (symmetric by construction)."""
    x = np.asarray(x, dtype=float)
    n = x.size
    h = coordinate_steps(x, step, relative)
    out = np.empty((n, n))
    f0 = f(x)
    for i in range(n):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h[i]
        xm[i] -= h[i]
        out[i, i] = (f(xp) - 2.0 * f0 + f(xm)) / h[i] ** 2
    for i in range(n):
        for j in range(i + 1, n):
            xpp = x.copy()
            xpm = x.copy()
            xmp = x.copy()
            xmm = x.copy()
            xpp[i] += h[i]; xpp[j] += h[j]
            xpm[i] += h[i]; xpm[j] -= h[j]
            xmp[i] -= h[i]; xmp[j] += h[j]
            xmm[i] -= h[i]; xmm[j] -= h[j]
            out[i, j] = out[j, i] = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h[i] * h[j])
    return out
