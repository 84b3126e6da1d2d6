"""Chain-quality estimators: autocorrelation time, ESS, and empirical TV distance."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

TAU_FLOOR = 0.1
DEFAULT_ACF_EPSILON = 0.05


def _acf(series):
    """Full autocorrelation function with the biased (divide-by-m) normalisation."""
    x = np.asarray(series, dtype=float).ravel()
    m = x.size
    x = x - x.mean()
    c0 = float(x @ x)
    if c0 == 0.0:
        out = np.zeros(m)
        out[0] = 1.0
        return out
    nfft = 1 << (2 * m - 1).bit_length()
    spec = np.fft.rfft(x, nfft)
    acov = np.fft.irfft(spec * np.conj(spec), nfft)[:m]
    return acov / c0


def autocorrelation(series, lag):
    """Sample autocorrelation at a single lag; 0 by convention for constant series."""
    x = np.asarray(series, dtype=float).ravel()
    lag = int(lag)
    if not 0 <= lag < x.size:
        raise ValueError("need 0 <= lag < len(series)")
    if lag == 0:
        return 1.0
    x = x - x.mean()
    c0 = float(x @ x)
    if c0 == 0.0:
        return 0.0
    return float(x[:-lag] @ x[lag:]) / c0


class ActTime(NamedTuple):
    """Autocorrelation time, the truncation lag, and whether truncation failed."""

    tau: float
    lags: int
    truncated: bool


def act_time(series, epsilon=DEFAULT_ACF_EPSILON):
    """tau = 1 + 2 sum_{i<p} rho_i, truncated at the first lag with |rho| < epsilon.

    The search stops at len/2; if no lag qualifies the sum up to there is
    returned with the truncated flag set (a heavily correlated chain).
    """
    x = np.asarray(series, dtype=float).ravel()
    if x.size < 10:
        raise ValueError("need at least 10 samples")
    rho = _acf(x)
    if float(np.var(x)) == 0.0:
        warnings.warn("constant series: autocorrelation time undefined, "
                      "returning the floor", stacklevel=2)
        return ActTime(TAU_FLOOR, 0, True)
    limit = x.size // 2
    cut = None
    for lag in range(1, limit + 1):
        if abs(rho[lag]) < epsilon:
            cut = lag
            break
    truncated = cut is None
    if truncated:
        warnings.warn("no autocorrelation below epsilon within half the series; "
                      "tau is a lower bound", stacklevel=2)
        cut = limit
    tau = 1.0 + 2.0 * float(np.sum(rho[1:cut]))
    return ActTime(max(tau, TAU_FLOOR), cut, truncated)


def ess(series, epsilon=DEFAULT_ACF_EPSILON):
    """Effective sample size m / tau."""
    x = np.asarray(series, dtype=float).ravel()
    return x.size / act_time(x, epsilon).tau


def empirical_tv(samples, target, bins=50, support=(-4.0, 4.0)):
    """Total-variation distance between binned samples and the binned target.

    Works for 1-D targets (samples shape (m,) or (m, 1)) and 2-D targets
    (samples shape (m, 2), bins x bins grid). Target mass per bin uses the
    midpoint rule, renormalised over the grid. Samples outside the support
    are lumped into the boundary bins, with a warning.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim == 1:
        samples = samples[:, None]
    m, d = samples.shape
    if m == 0:
        raise ValueError("no samples")
    if d != target.dim or d not in (1, 2):
        raise ValueError("empirical_tv supports 1-D and 2-D targets matching the samples")

    if d == 1:
        ranges = [tuple(support)] if np.ndim(support[0]) == 0 else [tuple(support[0])]
    else:
        ranges = [tuple(r) for r in support]
        if len(ranges) != 2:
            raise ValueError("2-D support must give a (lo, hi) per coordinate")

    edges = [np.linspace(lo, hi, int(bins) + 1) for lo, hi in ranges]
    outside = np.zeros(m, dtype=bool)
    clipped = samples.copy()
    for k, (lo, hi) in enumerate(ranges):
        outside |= (samples[:, k] < lo) | (samples[:, k] > hi)
        width = (hi - lo) / bins
        clipped[:, k] = np.clip(samples[:, k], lo + 1e-9 * width, hi - 1e-9 * width)
    if outside.any():
        warnings.warn(f"{int(outside.sum())} samples outside the support were "
                      "lumped into boundary bins", stacklevel=2)

    if d == 1:
        counts, _ = np.histogram(clipped[:, 0], bins=edges[0])
        mids = 0.5 * (edges[0][:-1] + edges[0][1:])
        logs = np.array([target.log_density(np.array([t])) for t in mids])
    else:
        counts, _, _ = np.histogram2d(clipped[:, 0], clipped[:, 1],
                                      bins=[edges[0], edges[1]])
        m0 = 0.5 * (edges[0][:-1] + edges[0][1:])
        m1 = 0.5 * (edges[1][:-1] + edges[1][1:])
        logs = np.array([[target.log_density(np.array([a, b])) for b in m1]
                         for a in m0])
    dens = np.exp(logs - logs.max())
    p = dens / dens.sum()
    p_hat = counts / m
    return 0.5 * float(np.abs(p_hat - p).sum())


@dataclass
class DiagnosticsSummary:
    """Acceptance, mixing, and accuracy estimates for one trace.

    tau and ess are keyed by test function: one entry per coordinate
    ("x1", ...) plus the squared norm ("sqnorm"). wall_time_per_ess uses the
    worst-case (smallest) ESS.
    """

    acceptance_rate: float
    tau: dict
    ess: dict
    n_lags_used: int
    mean: np.ndarray
    variance: np.ndarray
    tv_estimate: Optional[float]
    wall_time_s: float
    wall_time_per_ess: float
    seed: int
    lags: dict = field(default_factory=dict)
    truncated: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "acceptance_rate": self.acceptance_rate,
            "tau": dict(self.tau),
            "ess": dict(self.ess),
            "n_lags_used": self.n_lags_used,
            "mean": [float(v) for v in self.mean],
            "variance": [float(v) for v in self.variance],
            "tv": self.tv_estimate,
            "seed": self.seed,
            "wall_time_s": self.wall_time_s,
            "wall_time_per_ess": self.wall_time_per_ess,
        }


def summarize(trace, epsilon=DEFAULT_ACF_EPSILON, tv_target=None, tv_bins=50,
              tv_support=(-4.0, 4.0), tv_coordinate=0):
    """Assemble a DiagnosticsSummary for a trace.

    tv_target, when given, must be a 1-D target; the TV estimate is computed
    for the chosen coordinate of the trace against it.
    """
    if len(trace) == 0:
        raise ValueError("empty trace: nothing recorded after burn-in")
    states = trace.states
    m = states.shape[0]
    functions = {f"x{i + 1}": states[:, i] for i in range(states.shape[1])}
    functions["sqnorm"] = np.sum(states * states, axis=1)

    tau, ess_, lags, truncated = {}, {}, {}, {}
    for name, series in functions.items():
        res = act_time(series, epsilon)
        tau[name] = res.tau
        ess_[name] = m / res.tau
        lags[name] = res.lags
        truncated[name] = res.truncated

    tv = None
    if tv_target is not None:
        tv = empirical_tv(states[:, tv_coordinate], tv_target,
                          bins=tv_bins, support=tv_support)

    wall = trace.seconds_per_1000 * trace.steps / 1000.0
    worst = min(ess_.values())
    return DiagnosticsSummary(
        acceptance_rate=trace.acceptance_rate,
        tau=tau,
        ess=ess_,
        n_lags_used=max(lags.values()),
        mean=states.mean(axis=0),
        variance=states.var(axis=0),
        tv_estimate=tv,
        wall_time_s=wall,
        wall_time_per_ess=wall / worst if worst > 0 else math.inf,
        seed=trace.seed,
        lags=lags,
        truncated=truncated,
    )
