"""Built-in target distributions behind a common differentiable log-density contract.

Log-densities are unnormalised throughout: every consumer in this package works
with differences of log-densities, so additive constants are dropped.
"""

from __future__ import annotations

import csv
import warnings

import numpy as np
from scipy.special import expit

from . import numdiff
from .exceptions import CapabilityError, NumericWarning


class TargetModel:
    """An unnormalised log-density with gradient and optional curvature structure.

    Attributes:
        dim: Dimension of the sample space.
        name: Human-readable descriptor used in traces and reports.

    Evaluations are pure functions of ``x``; instances hold no mutable state
    and are safe to share between concurrently running chains.
    """

    def __init__(self, dim, log_density, grad_log_density,
                 hessian_log_density=None, fisher_terms=None,
                 fisher_terms_jacobian=None, name="target"):
        dim = int(dim)
        if dim <= 0:
            raise ValueError("dim must be a positive integer")
        self.dim = dim
        self.name = name
        self._log_density = log_density
        self._grad = grad_log_density
        self._hess = hessian_log_density
        self._fisher = fisher_terms
        self._fisher_jac = fisher_terms_jacobian

    @classmethod
    def from_log_density(cls, dim, log_density, name="custom"):
        """Wrap a bare log-density, filling gradient and Hessian by finite differences."""
        return cls(
            dim,
            log_density,
            lambda x: numdiff.gradient(log_density, x),
            hessian_log_density=lambda x: numdiff.hessian(log_density, x),
            name=name,
        )

    def _coerce(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(
                f"{self.name}: expected a point of shape ({self.dim},), got {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError(f"{self.name}: point contains non-finite entries")
        return x

    def log_density(self, x):
        """log pi(x) up to an additive constant; -inf where the density vanishes."""
        return float(self._log_density(self._coerce(x)))

    def grad_log_density(self, x):
        return np.asarray(self._grad(self._coerce(x)), dtype=float)

    @property
    def has_hessian(self):
        return self._hess is not None

    def hessian_log_density(self, x):
        """Hessian of log pi at x (the matrix itself; metrics negate it)."""
        if self._hess is None:
            raise CapabilityError(f"{self.name} does not provide a Hessian")
        return np.asarray(self._hess(self._coerce(x)), dtype=float)

    @property
    def has_fisher(self):
        return self._fisher is not None

    def fisher_terms(self, x):
        """(expected negative log-likelihood Hessian, negative log-prior Hessian)."""
        if self._fisher is None:
            raise CapabilityError(
                f"{self.name} has no likelihood/prior split; Fisher metric unavailable")
        lik, prior = self._fisher(self._coerce(x))
        return np.asarray(lik, dtype=float), np.asarray(prior, dtype=float)

    @property
    def has_fisher_jacobian(self):
        return self._fisher_jac is not None

    def fisher_terms_jacobian(self, x):
        """Rank-3 tensor J[j] = d(likelihood term)/dx_j; the prior term is constant."""
        if self._fisher_jac is None:
            raise CapabilityError(f"{self.name} has no analytic Fisher derivative")
        return np.asarray(self._fisher_jac(self._coerce(x)), dtype=float)

    def __repr__(self):
        return f"TargetModel({self.name}, dim={self.dim})"


def std_gaussian(dim):
    """Standard normal N(0, I): log pi(x) = -|x|^2 / 2."""
    dim = int(dim)
    eye = np.eye(dim)
    zero = np.zeros((dim, dim))
    return TargetModel(
        dim,
        lambda x: -0.5 * float(x @ x),
        lambda x: -x,
        hessian_log_density=lambda x: -eye,
        fisher_terms=lambda x: (eye, zero),
        fisher_terms_jacobian=lambda x: np.zeros((dim, dim, dim)),
        name=f"std_gaussian({dim})",
    )


def gaussian(mean, cov):
    """Gaussian N(mean, cov) with a fixed SPD covariance."""
    mean = np.asarray(mean, dtype=float)
    cov = np.asarray(cov, dtype=float)
    dim = mean.size
    if cov.shape != (dim, dim):
        raise ValueError("cov must be square and match mean")
    np.linalg.cholesky(cov)  # reject non-SPD covariances up front
    prec = np.linalg.inv(cov)
    prec = 0.5 * (prec + prec.T)
    zero = np.zeros((dim, dim))

    def logp(x):
        y = x - mean
        return -0.5 * float(y @ (prec @ y))

    return TargetModel(
        dim,
        logp,
        lambda x: -prec @ (x - mean),
        hessian_log_density=lambda x: -prec,
        fisher_terms=lambda x: (prec, zero),
        fisher_terms_jacobian=lambda x: np.zeros((dim, dim, dim)),
        name=f"gaussian({dim})",
    )


def cauchy_product(dim):
    """Product of standard Cauchy densities: log pi(x) = -sum log(1 + x_i^2)."""
    dim = int(dim)
    return TargetModel(
        dim,
        lambda x: -float(np.sum(np.log1p(x * x))),
        lambda x: -2.0 * x / (1.0 + x * x),
        hessian_log_density=lambda x: np.diag((2.0 * x * x - 2.0) / (1.0 + x * x) ** 2),
        name=f"cauchy_product({dim})",
    )


def quartic_product(dim):
    """Light-tailed product target: log pi(x) = -sum x_i^4."""
    dim = int(dim)
    return TargetModel(
        dim,
        lambda x: -float(np.sum(x ** 4)),
        lambda x: -4.0 * x ** 3,
        hessian_log_density=lambda x: np.diag(-12.0 * x * x),
        name=f"quartic_product({dim})",
    )


def exp_power(dim, beta):
    """Exponential-power product: log pi(x) = -sum |x_i|^beta, beta > 0.

    The derivative does not exist at x_i = 0 when beta <= 1 (and the second
    derivative when beta < 2); both are taken as 0 there, with a warning.
    """
    dim = int(dim)
    beta = float(beta)
    if beta <= 0:
        raise ValueError("beta must be positive")

    def grad(x):
        ax = np.abs(x)
        kink = ax == 0.0
        if beta <= 1.0 and np.any(kink):
            warnings.warn(
                "exp_power gradient undefined at |x_i| = 0; using 0 by convention",
                NumericWarning, stacklevel=3)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = -beta * np.sign(x) * ax ** (beta - 1.0)
        g[kink] = 0.0
        return g

    def hess(x):
        ax = np.abs(x)
        kink = ax == 0.0
        if beta < 2.0 and np.any(kink):
            warnings.warn(
                "exp_power curvature undefined at |x_i| = 0; using 0 by convention",
                NumericWarning, stacklevel=3)
        with np.errstate(divide="ignore", invalid="ignore"):
            d = -beta * (beta - 1.0) * ax ** (beta - 2.0)
        d[kink] = 0.0 if beta != 2.0 else -2.0
        return np.diag(d)

    return TargetModel(
        dim,
        lambda x: -float(np.sum(np.abs(x) ** beta)),
        grad,
        hessian_log_density=hess,
        name=f"exp_power({dim}, beta={beta:g})",
    )


def bayes_logistic(design, labels, prior_var):
    """Bayesian logistic regression posterior with N(0, prior_var I) prior.

    The likelihood part of the Fisher pair is X' diag(p(1-p)) X, which for a
    logistic model equals the observed information, so it is exact rather
    than a Monte Carlo expectation.
    """
    design = np.atleast_2d(np.asarray(design, dtype=float))
    labels = np.asarray(labels, dtype=float).ravel()
    if design.shape[0] != labels.size:
        raise ValueError("design and labels disagree on the number of rows")
    if not np.all((labels == 0.0) | (labels == 1.0)):
        raise ValueError("labels must be 0 or 1")
    prior_var = float(prior_var)
    if prior_var <= 0:
        raise ValueError("prior_var must be positive")
    m, dim = design.shape
    eye = np.eye(dim)

    def logp(x):
        t = design @ x
        return float(labels @ t - np.logaddexp(0.0, t).sum() - x @ x / (2.0 * prior_var))

    def grad(x):
        p = expit(design @ x)
        return design.T @ (labels - p) - x / prior_var

    def lik_info(x):
        p = expit(design @ x)
        w = p * (1.0 - p)
        return design.T @ (design * w[:, None]), p, w

    def hess(x):
        lik, _, _ = lik_info(x)
        return -lik - eye / prior_var

    def fisher(x):
        lik, _, _ = lik_info(x)
        return lik, eye / prior_var

    def fisher_jac(x):
        _, p, w = lik_info(x)
        u = w * (1.0 - 2.0 * p)
        return np.einsum("m,mj,mi,mk->jik", u, design, design, design)

    return TargetModel(
        dim,
        logp,
        grad,
        hessian_log_density=hess,
        fisher_terms=fisher,
        fisher_terms_jacobian=fisher_jac,
        name=f"bayes_logistic({m}x{dim})",
    )


def bayes_logistic_from_csv(path, prior_var):
    """Load a logistic-regression dataset (header x1..xn,y) and build the posterior."""
    with open(path, newline="") as fh:
        header = next(csv.reader(fh))
    header = [h.strip() for h in header]
    if len(header) < 2 or header[-1] != "y":
        raise ValueError(f"{path}: expected header x1,...,xn,y")
    n = len(header) - 1
    expected = [f"x{i + 1}" for i in range(n)] + ["y"]
    if header != expected:
        raise ValueError(f"{path}: expected header {','.join(expected)}, got {','.join(header)}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != n + 1:
        raise ValueError(f"{path}: rows do not match the header column count")
    return bayes_logistic(data[:, :n], data[:, n], prior_var)


BUILTINS = {
    "std_gaussian": std_gaussian,
    "gaussian": gaussian,
    "cauchy_product": cauchy_product,
    "quartic_product": quartic_product,
    "exp_power": exp_power,
    "bayes_logistic": bayes_logistic,
}
