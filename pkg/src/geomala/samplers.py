"""Metropolis-Hastings engine, generic over Gaussian proposal kernels.

Every kernel proposes from N(mean(x), step^2 * C(x)) for some base matrix
C(x) held as a lower-triangular factor, so a single log-density routine
serves all of them. Each MH step consumes exactly dim standard normals plus
one uniform from the chain's random stream regardless of kernel or outcome,
which is what makes reduced kernels (e.g. manifold MALA on the identity
metric) reproduce plain MALA draw for draw.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.linalg import solve_triangular

from .exceptions import NumericError
from .metrics import (MetricEval, MetricField,
                      brownian_drift_from_derivatives,
                      curvature_drift_from_derivatives)

LOG_2PI = math.log(2.0 * math.pi)


def chain_rng(seed, chain_index=0):
    """Independent counter-based stream for (seed, chain_index)."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(chain_index),))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class ChainState:
    """A chain position with whatever the kernel needs cached alongside it."""

    x: np.ndarray
    log_pi: float
    grad: Optional[np.ndarray] = None
    metric: Optional[MetricEval] = None
    drift: Optional[np.ndarray] = None


class ProposalParams(NamedTuple):
    """Gaussian proposal N(mean, step^2 L L') via its base factor L."""

    mean: np.ndarray
    factor: np.ndarray
    half_log_det: float


def _params(mean, factor):
    return ProposalParams(mean, factor, float(np.sum(np.log(np.diag(factor)))))


def _gauss_logpdf(params, step, y):
    # non-finite inputs (drift blow-ups) propagate to a nan log-density,
    # which mh_step turns into an automatic rejection
    with np.errstate(invalid="ignore"):
        d = np.asarray(y, dtype=float) - params.mean
        w = solve_triangular(params.factor, d, lower=True, check_finite=False) / step
    n = d.size
    return (-0.5 * float(w @ w)
            - (n * math.log(step) + params.half_log_det)
            - 0.5 * n * LOG_2PI)


class ProposalKernel:
    """Base class; subclasses define what to cache and the proposal moments."""

    kind = "abstract"

    def __init__(self, step):
        step = float(step)
        if step <= 0:
            raise ValueError("step must be positive")
        self.step = step

    def prepare(self, target, x):
        """Evaluate everything this kernel needs at x and bundle it."""
        raise NotImplementedError

    def params(self, state):
        raise NotImplementedError

    def describe(self):
        return {"kind": self.kind, "step": self.step}

    def __repr__(self):
        return f"{type(self).__name__}(step={self.step})"


class _FixedCovKernel(ProposalKernel):
    """Shared plumbing for kernels with a constant proposal covariance shape."""

    def __init__(self, step, cov=None):
        super().__init__(step)
        self._cov = None if cov is None else np.asarray(cov, dtype=float)
        self._factor = None if self._cov is None else np.linalg.cholesky(self._cov)

    def _base_factor(self, dim):
        if self._factor is None:
            return np.eye(dim)
        if self._factor.shape[0] != dim:
            raise ValueError("proposal covariance dimension does not match the point")
        return self._factor

    def _cov_matrix(self, dim):
        return np.eye(dim) if self._cov is None else self._cov


class RWM(_FixedCovKernel):
    """Random-walk proposal N(x, step^2 Sigma); symmetric, gradient-free."""

    kind = "rwm"

    def prepare(self, target, x):
        x = np.asarray(x, dtype=float)
        return ChainState(x, target.log_density(x))

    def params(self, state):
        return _params(state.x, self._base_factor(state.x.size))


class MALA(_FixedCovKernel):
    """Euler step of the Langevin diffusion: N(x + (step^2/2) grad, step^2 I)."""

    kind = "mala"

    def __init__(self, step):
        super().__init__(step, cov=None)

    def prepare(self, target, x):
        x = np.asarray(x, dtype=float)
        return ChainState(x, target.log_density(x), grad=target.grad_log_density(x))

    def params(self, state):
        mean = state.x + (0.5 * self.step * self.step) * state.grad
        return _params(mean, self._base_factor(state.x.size))


class PreconditionedMALA(_FixedCovKernel):
    """MALA with a fixed preconditioner: N(x + (step^2/2) Sigma grad, step^2 Sigma)."""

    kind = "pmala"

    def __init__(self, step, cov):
        super().__init__(step, cov=cov)

    def prepare(self, target, x):
        x = np.asarray(x, dtype=float)
        return ChainState(x, target.log_density(x), grad=target.grad_log_density(x))

    def params(self, state):
        cov = self._cov_matrix(state.x.size)
        mean = state.x + (0.5 * self.step * self.step) * (cov @ state.grad)
        return _params(mean, self._base_factor(state.x.size))


class _MetricKernel(ProposalKernel):
    def __init__(self, step, metric):
        super().__init__(step)
        if not isinstance(metric, MetricField):
            raise TypeError("metric must be a MetricField")
        self.metric = metric

    def describe(self):
        return {"kind": self.kind, "step": self.step, "metric": self.metric.describe()}


class SimplifiedManifoldMALA(_MetricKernel):
    """Position-dependent preconditioning without metric-derivative drift."""

    kind = "smmala"

    def prepare(self, target, x):
        x = np.asarray(x, dtype=float)
        return ChainState(x, target.log_density(x),
                          grad=target.grad_log_density(x),
                          metric=self.metric.evaluate(target, x))

    def params(self, state):
        ng = state.metric.G_inv @ state.grad
        mean = state.x + (0.5 * self.step * self.step) * ng
        return _params(mean, state.metric.chol_G_inv)


class ManifoldMALA(_MetricKernel):
    """Full manifold-Langevin proposal, including the curvature drift."""

    kind = "mmala"

    def prepare(self, target, x):
        x = np.asarray(x, dtype=float)
        ev = self.metric.evaluate(target, x, need_derivatives=True)
        return ChainState(x, target.log_density(x),
                          grad=target.grad_log_density(x),
                          metric=ev,
                          drift=curvature_drift_from_derivatives(ev.dG_inv))

    def params(self, state):
        ng = state.metric.G_inv @ state.grad
        mean = (state.x + (0.5 * self.step * self.step) * ng
                + (self.step * self.step) * state.drift)
        return _params(mean, state.metric.chol_G_inv)


class ManifoldRWM(_MetricKernel):
    """Euler step of Brownian motion on the manifold; gradient-free."""

    kind = "mrwm"

    def prepare(self, target, x):
        x = np.asarray(x, dtype=float)
        ev = self.metric.evaluate(target, x, need_derivatives=True)
        return ChainState(x, target.log_density(x),
                          metric=ev,
                          drift=brownian_drift_from_derivatives(
                              ev.G_inv, ev.dG_inv, ev.dlog_det))

    def params(self, state):
        mean = state.x + (self.step * self.step) * state.drift
        return _params(mean, state.metric.chol_G_inv)


KERNEL_KINDS = {
    "rwm": RWM,
    "mala": MALA,
    "pmala": PreconditionedMALA,
    "smmala": SimplifiedManifoldMALA,
    "mmala": ManifoldMALA,
    "mrwm": ManifoldRWM,
}


def propose(kernel, state, rng):
    """Draw from the kernel at the given state; returns (x_prop, log_q_forward)."""
    pp = kernel.params(state)
    z = rng.standard_normal(state.x.size)
    x_prop = pp.mean + kernel.step * (pp.factor @ z)
    return x_prop, _gauss_logpdf(pp, kernel.step, x_prop)


def log_q(kernel, from_state, to_x):
    """Log proposal density q(to_x | from_state.x)."""
    return _gauss_logpdf(kernel.params(from_state), kernel.step, to_x)


def log_accept_ratio(target, kernel, state_from, state_to):
    """log alpha = min(0, log pi(x') + log q(x'->x) - log pi(x) - log q(x->x'))."""
    ratio = (state_to.log_pi + log_q(kernel, state_to, state_from.x)
             - state_from.log_pi - log_q(kernel, state_from, state_to.x))
    if math.isnan(ratio):
        return -math.inf
    return min(0.0, ratio)


class MHStep(NamedTuple):
    state: ChainState
    accepted: bool
    log_alpha: float
    log_q_forward: float
    log_q_reverse: float


def mh_step(target, kernel, state, rng):
    """One Metropolis-Hastings transition.

    Non-finite proposals (drift blow-ups) and numeric failures while
    evaluating the proposed point are counted as automatic rejections rather
    than errors, so the chain stays valid.
    """
    x_prop, log_q_fwd = propose(kernel, state, rng)
    log_u = math.log(rng.uniform())
    if not np.all(np.isfinite(x_prop)):
        return MHStep(state, False, -math.inf, log_q_fwd, math.nan)
    try:
        prop_state = kernel.prepare(target, x_prop)
    except NumericError:
        return MHStep(state, False, -math.inf, log_q_fwd, math.nan)
    if not math.isfinite(prop_state.log_pi):
        return MHStep(state, False, -math.inf, log_q_fwd, math.nan)
    log_q_rev = log_q(kernel, prop_state, state.x)
    ratio = prop_state.log_pi + log_q_rev - state.log_pi - log_q_fwd
    log_alpha = -math.inf if math.isnan(ratio) else min(0.0, ratio)
    if log_u < log_alpha:
        return MHStep(prop_state, True, log_alpha, log_q_fwd, log_q_rev)
    return MHStep(state, False, log_alpha, log_q_fwd, log_q_rev)


@dataclass
class Trace:
    """The recorded chain plus enough metadata to reproduce and describe it."""

    states: np.ndarray
    log_pis: np.ndarray
    accepted: np.ndarray
    log_q_forward: np.ndarray
    log_q_reverse: np.ndarray
    iterations: np.ndarray
    seed: int
    chain_index: int
    kernel: dict
    steps: int
    burn_in: int
    thin: int
    seconds_per_1000: float

    @property
    def dim(self):
        return self.states.shape[1]

    def __len__(self):
        return self.states.shape[0]

    @property
    def acceptance_rate(self):
        return float(np.mean(self.accepted)) if len(self) else math.nan

    def to_csv(self, path):
        """Write iter,accepted,log_pi,x1..xn with round-trip float formatting."""
        cols = ",".join(f"x{i + 1}" for i in range(self.dim))
        with open(path, "w") as fh:
            fh.write(f"iter,accepted,log_pi,{cols}\n")
            for i in range(len(self)):
                xs = ",".join(repr(float(v)) for v in self.states[i])
                fh.write(f"{int(self.iterations[i])},{int(self.accepted[i])},"
                         f"{float(self.log_pis[i])!r},{xs}\n")


def run_chain(target, kernel, x0, steps, burn_in=0, thin=1, seed=0, chain_index=0):
    """Run a single chain; bit-reproducible for fixed (seed, chain_index)."""
    steps = int(steps)
    burn_in = int(burn_in)
    thin = int(thin)
    if burn_in < 0 or steps <= burn_in:
        raise ValueError("need steps > burn_in >= 0")
    if thin < 1:
        raise ValueError("thin must be >= 1")
    x0 = np.asarray(x0, dtype=float)
    state = kernel.prepare(target, x0)
    if not math.isfinite(state.log_pi):
        raise ValueError("x0 must have positive target density")
    rng = chain_rng(seed, chain_index)

    kept_states, kept_logpi, kept_acc = [], [], []
    kept_qf, kept_qr, kept_iter = [], [], []
    t0 = time.perf_counter()
    for i in range(1, steps + 1):
        res = mh_step(target, kernel, state, rng)
        state = res.state
        if i > burn_in and (i - burn_in) % thin == 0:
            kept_states.append(state.x)
            kept_logpi.append(state.log_pi)
            kept_acc.append(res.accepted)
            kept_qf.append(res.log_q_forward)
            kept_qr.append(res.log_q_reverse)
            kept_iter.append(i)
    elapsed = time.perf_counter() - t0

    return Trace(
        states=np.array(kept_states),
        log_pis=np.array(kept_logpi),
        accepted=np.array(kept_acc, dtype=bool),
        log_q_forward=np.array(kept_qf),
        log_q_reverse=np.array(kept_qr),
        iterations=np.array(kept_iter, dtype=int),
        seed=int(seed),
        chain_index=int(chain_index),
        kernel=kernel.describe(),
        steps=steps,
        burn_in=burn_in,
        thin=thin,
        seconds_per_1000=1000.0 * elapsed / steps,
    )
