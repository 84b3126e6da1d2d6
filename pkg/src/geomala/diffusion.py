"""Continuous-time machinery: SDE simulation, generators, and stationarity checks.

A diffusion is dX = b(X) dt + s(X) dB with drift b and volatility s; its
generator acts on a test function f as

    A f = sum_i b_i df/dx_i + (1/2) sum_ij V_ij d2f/dx_i dx_j,  V = s s'.

The stationary Fokker-Planck identity sum_i d_i(b_i pi) = (1/2) sum_ij
d2_ij(V_ij pi) is checked pointwise by finite differences; a zero residual
certifies that pi is invariant for the diffusion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import IntegrationError
from .metrics import (MetricField, as_gfn, build_eval, divergence_local,
                      field_brownian_drift)


@dataclass(frozen=True)
class DiffusionSpec:
    """Drift and volatility callables defining dX = b dt + s dB."""

    dim: int
    drift: Callable[[np.ndarray], np.ndarray]
    volatility: Callable[[np.ndarray], np.ndarray]
    name: str = "diffusion"

    def diffusion_matrix(self, x):
        """V(x) = s(x) s(x)'."""
        s = np.asarray(self.volatility(x), dtype=float)
        return s @ s.T


def langevin(target):
    """dX = (1/2) grad log pi dt + dB; invariant density pi."""
    eye = np.eye(target.dim)
    return DiffusionSpec(
        target.dim,
        lambda x: 0.5 * target.grad_log_density(x),
        lambda x: eye,
        name=f"langevin[{target.name}]",
    )


def manifold_langevin(target, metric):
    """Langevin diffusion preconditioned by a metric field, curvature drift included.

    dX = [(1/2) G^-1 grad log pi + c(x)] dt + chol(G^-1) dB, where c is the
    curvature drift built from derivatives of G^-1. Invariant density is pi.
    """
    if not isinstance(metric, MetricField):
        raise TypeError("manifold_langevin needs a MetricField (targets drive it)")

    def drift(x):
        ev = metric.evaluate(target, x)
        return 0.5 * (ev.G_inv @ target.grad_log_density(x)) + metric.curvature_drift(target, x)

    def vol(x):
        return metric.evaluate(target, x).chol_G_inv

    return DiffusionSpec(target.dim, drift, vol,
                         name=f"manifold_langevin[{target.name}, {metric.kind}]")


def manifold_brownian(metric, target=None, dim=None, fd_step=1e-5):
    """Brownian motion on the manifold: dX = b(x) dt + chol(G^-1) dB.

    metric may be a MetricField (with its target) or a bare callable x -> G;
    in the latter case the drift is computed by finite differences and dim is
    required.
    """
    if isinstance(metric, MetricField):
        if dim is None:
            if target is None:
                raise ValueError("need target or dim to size the diffusion")
            dim = target.dim
        drift = lambda x: metric.brownian_drift(target, x)
        vol = lambda x: metric.evaluate(target, x).chol_G_inv
        name = f"manifold_brownian[{metric.kind}]"
    else:
        gfn = as_gfn(metric)
        if dim is None:
            raise ValueError("dim is required for a bare metric callable")
        drift = lambda x: field_brownian_drift(gfn, x, step=fd_step)
        vol = lambda x: build_eval(gfn(np.asarray(x, dtype=float)), x=x).chol_G_inv
        name = "manifold_brownian[callable]"
    return DiffusionSpec(int(dim), drift, vol, name=name)


def em_step(spec, x, dt, rng):
    """One Euler-Maruyama step: x + b(x) dt + s(x) sqrt(dt) z."""
    dt = float(dt)
    if dt <= 0:
        raise ValueError("dt must be positive")
    x = np.asarray(x, dtype=float)
    if not hasattr(rng, "standard_normal"):
        rng = np.random.default_rng(rng)
    z = rng.standard_normal(x.size)
    out = x + np.asarray(spec.drift(x), dtype=float) * dt \
        + np.sqrt(dt) * (np.asarray(spec.volatility(x), dtype=float) @ z)
    if not np.all(np.isfinite(out)):
        raise IntegrationError("Euler-Maruyama step produced a non-finite state",
                               x=x, dt=dt)
    return out


def simulate_path(spec, x0, dt, steps, rng):
    """Iterate em_step; returns an array of shape (steps + 1, dim)."""
    x = np.asarray(x0, dtype=float)
    if not hasattr(rng, "standard_normal"):
        rng = np.random.default_rng(rng)
    path = np.empty((int(steps) + 1, x.size))
    path[0] = x
    for i in range(1, int(steps) + 1):
        try:
            x = em_step(spec, x, dt, rng)
        except IntegrationError as err:
            raise IntegrationError(
                f"path diverged at step {i}", x=err.x, dt=dt, step_index=i) from err
        path[i] = x
    return path


def generator_apply(spec, f, x, step=1e-3):
    """Apply the generator to f at x, with central differences for f's derivatives."""
    x = np.asarray(x, dtype=float)
    n = x.size
    h = float(step)
    b = np.asarray(spec.drift(x), dtype=float)
    V = spec.diffusion_matrix(x)
    f0 = f(x)

    fp = np.empty(n)
    fm = np.empty(n)
    for i in range(n):
        xp = x.copy(); xp[i] += h
        xm = x.copy(); xm[i] -= h
        fp[i] = f(xp)
        fm[i] = f(xm)

    total = float(b @ ((fp - fm) / (2.0 * h)))
    for i in range(n):
        total += 0.5 * V[i, i] * (fp[i] - 2.0 * f0 + fm[i]) / h ** 2
    for i in range(n):
        for j in range(i + 1, n):
            xpp = x.copy(); xpp[i] += h; xpp[j] += h
            xpm = x.copy(); xpm[i] += h; xpm[j] -= h
            xmp = x.copy(); xmp[i] -= h; xmp[j] += h
            xmm = x.copy(); xmm[i] -= h; xmm[j] -= h
            d2 = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h * h)
            total += V[i, j] * d2  # i<j and j>i give equal contributions
    return total


def laplace_beltrami(f, metric, x, step=1e-3, target=None):
    """div_M(grad_M f) by nested central differences.

    The inner field is the natural gradient G^-1 grad f (grad f itself by
    central differences); the outer derivative is the manifold divergence.
    """
    gfn = as_gfn(metric, target)
    h = float(step)

    def natural_grad_field(y):
        y = np.asarray(y, dtype=float)
        g = np.empty(y.size)
        for i in range(y.size):
            yp = y.copy(); yp[i] += h
            ym = y.copy(); ym[i] -= h
            g[i] = (f(yp) - f(ym)) / (2.0 * h)
        ev = build_eval(gfn(y), x=y)
        return ev.G_inv @ g

    return divergence_local(natural_grad_field, gfn, x, step=h)


def fokker_planck_residual(target, spec, x, step=1e-3):
    """|sum_i d_i(b_i pi) - (1/2) sum_ij d2_ij(V_ij pi)| / pi(x).

    The density is evaluated relative to pi(x), so unnormalised log-densities
    are fine and the residual is already the relative one.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    h = float(step)
    log_pi_centre = target.log_density(x)

    cache = {}

    def at(offset):
        key = tuple(offset)
        if key not in cache:
            y = x + h * np.asarray(offset, dtype=float)
            pi = np.exp(target.log_density(y) - log_pi_centre)
            cache[key] = (np.asarray(spec.drift(y), dtype=float) * pi,
                          spec.diffusion_matrix(y) * pi)
        return cache[key]

    zero = np.zeros(n, dtype=int)
    _, V0 = at(zero)
    lhs = 0.0
    rhs = 0.0
    for i in range(n):
        ep = zero.copy(); ep[i] = 1
        em = zero.copy(); em[i] = -1
        bp, Vp = at(ep)
        bm, Vm = at(em)
        lhs += (bp[i] - bm[i]) / (2.0 * h)
        rhs += 0.5 * (Vp[i, i] - 2.0 * V0[i, i] + Vm[i, i]) / h ** 2
    for i in range(n):
        for j in range(i + 1, n):
            opp = zero.copy(); opp[i] = 1; opp[j] = 1
            opm = zero.copy(); opm[i] = 1; opm[j] = -1
            omp = zero.copy(); omp[i] = -1; omp[j] = 1
            omm = zero.copy(); omm[i] = -1; omm[j] = -1
            _, Vpp = at(opp)
            _, Vpm = at(opm)
            _, Vmp = at(omp)
            _, Vmm = at(omm)
            d2 = (Vpp[i, j] - Vpm[i, j] - Vmp[i, j] + Vmm[i, j]) / (4.0 * h * h)
            rhs += d2  # symmetric pair (j, i) contributes the same
    return float(abs(lhs - rhs))
