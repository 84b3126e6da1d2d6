"""Position-dependent metric tensors and their derived geometric quantities.

A metric field assigns an SPD matrix G(x) to each point. From it the samplers
and diffusion code need the inverse, a factor of the inverse, log|G|, and two
drift vectors built from derivatives of the field:

  curvature drift   c_i = (1/2) sum_j d/dx_j {G^-1}_{ij}
  brownian drift    b_i = (1/2) |G|^{-1/2} sum_j d/dx_j (|G|^{1/2} {G^-1}_{ij})

Both reduce to zero for constant fields.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import cho_solve

from .exceptions import CapabilityError, NumericError, NumericWarning
from .targets import TargetModel

DEFAULT_EIG_FLOOR = 1e-8
DEFAULT_SOFTABS_SHARPNESS = 1e6
DEFAULT_FD_STEP = 1e-5


@dataclass(frozen=True)
class MetricEval:
    """G(x) together with everything the samplers derive from it.

    chol_G_inv is a lower-triangular L with L L' = G^-1. dG_inv, when present,
    has dG_inv[j][i][k] = d{G^-1}_{ik}/dx_j; dlog_det[j] = d log|G| / dx_j.
    """

    G: np.ndarray
    G_inv: np.ndarray
    log_det_G: float
    chol_G_inv: np.ndarray
    dG_inv: Optional[np.ndarray] = None
    dlog_det: Optional[np.ndarray] = None

    @property
    def dim(self):
        return self.G.shape[0]


def _chol_with_jitter(G, x=None):
    """Cholesky of a nominally-SPD matrix, retrying with escalating jitter."""
    jitter = 1e-10 * float(np.mean(np.diag(G))) if G.shape[0] else 0.0
    attempt = np.asarray(G, dtype=float)
    for trial in range(4):
        try:
            return np.linalg.cholesky(attempt), attempt
        except np.linalg.LinAlgError:
            if trial == 3:
                break
            attempt = G + (jitter * 10 ** trial) * np.eye(G.shape[0])
    raise NumericError("metric matrix is not positive definite", x=x)


def build_eval(G, x=None, dG_inv=None, dlog_det=None):
    """Assemble a MetricEval from a raw SPD matrix."""
    G = np.asarray(G, dtype=float)
    L, G_used = _chol_with_jitter(G, x=x)
    log_det = 2.0 * float(np.sum(np.log(np.diag(L))))
    G_inv = cho_solve((L, True), np.eye(G.shape[0]))
    G_inv = 0.5 * (G_inv + G_inv.T)
    chol_inv, _ = _chol_with_jitter(G_inv, x=x)
    return MetricEval(G_used, G_inv, log_det, chol_inv, dG_inv=dG_inv, dlog_det=dlog_det)


def softabs_eigenvalues(lam, sharpness):
    """Smooth absolute value t(l) = l * coth(sharpness * l), with series near 0."""
    lam = np.asarray(lam, dtype=float)
    z = sharpness * lam
    small = np.abs(z) < 1e-4
    safe = np.where(small, 1.0, z)
    return np.where(small,
                    1.0 / sharpness + sharpness * lam * lam / 3.0,
                    lam / np.tanh(safe))


def nearest_spd(A, floor=DEFAULT_EIG_FLOOR, max_iter=50):
    """Frobenius-nearest SPD matrix via alternating projection.

    Alternates symmetrisation with eigenvalue clipping to >= floor; for a
    symmetric input the first clip already is the projection.
    """
    B = np.asarray(A, dtype=float)
    for _ in range(max_iter):
        B_sym = 0.5 * (B + B.T)
        lam, vecs = np.linalg.eigh(B_sym)
        B_next = (vecs * np.maximum(lam, floor)) @ vecs.T
        if np.linalg.norm(B_next - B, ord="fro") <= 1e-14 * (1.0 + np.linalg.norm(B, ord="fro")):
            return B_next
        B = B_next
    return B


class MetricField:
    """Base class: a map x -> SPD matrix G(x), optionally with derivatives.

    derivative_mode is "analytic", "fd", or None to use analytic whenever the
    kind supports it. fd_step scales as fd_step * (1 + |x_j|) per coordinate.
    """

    kind = "abstract"
    has_analytic_derivatives = False

    def __init__(self, derivative_mode=None, fd_step=DEFAULT_FD_STEP):
        if derivative_mode not in (None, "analytic", "fd"):
            raise ValueError("derivative_mode must be 'analytic', 'fd' or None")
        self.derivative_mode = derivative_mode
        self.fd_step = float(fd_step)

    # -- kind-specific ------------------------------------------------------

    def matrix(self, target, x):
        """Raw (already regularised) metric matrix at x."""
        raise NotImplementedError

    def _analytic_derivatives(self, target, x, ev):
        raise CapabilityError(f"{self.kind} metric has no analytic derivatives")

    def _supports_analytic(self, target):
        return self.has_analytic_derivatives

    # -- generic machinery --------------------------------------------------

    def _resolve_mode(self, target):
        if self.derivative_mode == "analytic":
            if not self._supports_analytic(target):
                raise CapabilityError(
                    f"analytic derivatives unavailable for {self.kind} on this target")
            return "analytic"
        if self.derivative_mode == "fd":
            return "fd"
        return "analytic" if self._supports_analytic(target) else "fd"

    def evaluate(self, target, x, need_derivatives=False):
        x = np.asarray(x, dtype=float)
        ev = build_eval(self.matrix(target, x), x=x)
        if not need_derivatives:
            return ev
        if self._resolve_mode(target) == "analytic":
            dG_inv, dlog = self._analytic_derivatives(target, x, ev)
        else:
            dG_inv, dlog = fd_field_derivatives(
                lambda y: self.matrix(target, y), x, self.fd_step)
            self._fd_smoothness_check(target, x)
        return MetricEval(ev.G, ev.G_inv, ev.log_det_G, ev.chol_G_inv,
                          dG_inv=dG_inv, dlog_det=dlog)

    def _fd_smoothness_check(self, target, x):
        """Hook for kinds whose eigenvalue map has kinks; default: nothing."""

    def curvature_drift(self, target, x):
        """(1/2) sum_j d_j {G^-1}_{ij}; zero for constant fields."""
        ev = self.evaluate(target, x, need_derivatives=True)
        return curvature_drift_from_derivatives(ev.dG_inv)

    def brownian_drift(self, target, x):
        ev = self.evaluate(target, x, need_derivatives=True)
        return brownian_drift_from_derivatives(ev.G_inv, ev.dG_inv, ev.dlog_det)

    def gfn(self, target=None):
        """The field as a bare callable x -> G, for the geometry utilities."""
        return lambda x: self.matrix(target, np.asarray(x, dtype=float))

    def describe(self):
        return {"kind": self.kind}

    def __repr__(self):
        inner = ", ".join(f"{k}={v}" for k, v in self.describe().items() if k != "kind")
        return f"{type(self).__name__}({inner})"


class IdentityMetric(MetricField):
    """Euclidean geometry: G(x) = I. Both drifts vanish identically."""

    kind = "identity"
    has_analytic_derivatives = True

    def matrix(self, target, x):
        return np.eye(x.size)

    def _analytic_derivatives(self, target, x, ev):
        n = x.size
        return np.zeros((n, n, n)), np.zeros(n)


class ConstantMetric(MetricField):
    """Fixed SPD matrix, the position-independent preconditioner."""

    kind = "constant"
    has_analytic_derivatives = True

    def __init__(self, matrix, **kwargs):
        super().__init__(**kwargs)
        self._G = np.asarray(matrix, dtype=float)
        np.linalg.cholesky(self._G)  # reject non-SPD input up front

    def matrix(self, target, x):
        if x.size != self._G.shape[0]:
            raise ValueError("constant metric dimension does not match the point")
        return self._G

    def _analytic_derivatives(self, target, x, ev):
        n = x.size
        return np.zeros((n, n, n)), np.zeros(n)

    def describe(self):
        return {"kind": self.kind, "dim": self._G.shape[0]}


class FisherMetric(MetricField):
    """Expected negative log-likelihood Hessian plus negative log-prior Hessian."""

    kind = "fisher"

    def matrix(self, target, x):
        lik, prior = target.fisher_terms(x)
        return lik + prior

    def _supports_analytic(self, target):
        return isinstance(target, TargetModel) and target.has_fisher_jacobian

    def _analytic_derivatives(self, target, x, ev):
        dG = target.fisher_terms_jacobian(x)  # [j, i, k]
        dG_inv = np.stack([-ev.G_inv @ dG[j] @ ev.G_inv for j in range(x.size)])
        dlog = np.array([float(np.trace(ev.G_inv @ dG[j])) for j in range(x.size)])
        return dG_inv, dlog


class _HessianEigMetric(MetricField):
    """Shared plumbing for metrics built from the eigensystem of -Hessian."""

    def _eigensystem(self, target, x):
        H = -target.hessian_log_density(x)
        H = 0.5 * (H + H.T)
        try:
            lam, vecs = np.linalg.eigh(H)
        except np.linalg.LinAlgError as err:
            raise NumericError(f"eigendecomposition failed: {err}", x=x) from err
        return lam, vecs

    def _transform(self, lam):
        raise NotImplementedError

    def matrix(self, target, x):
        lam, vecs = self._eigensystem(target, x)
        return (vecs * self._transform(lam)) @ vecs.T


class SoftAbsMetric(_HessianEigMetric):
    """Smooth |eigenvalue| map of the negative Hessian.

    Eigenvalues near zero are uplifted to about 1/sharpness, keeping the
    field differentiable where a hard absolute value would kink.
    """

    kind = "softabs"

    def __init__(self, sharpness=DEFAULT_SOFTABS_SHARPNESS, **kwargs):
        super().__init__(**kwargs)
        if sharpness <= 0:
            raise ValueError("sharpness must be positive")
        self.sharpness = float(sharpness)

    def _transform(self, lam):
        return softabs_eigenvalues(lam, self.sharpness)

    def describe(self):
        return {"kind": self.kind, "sharpness": self.sharpness}


class AbsEigMetric(_HessianEigMetric):
    """Hard absolute value of the negative-Hessian eigenvalues, floored."""

    kind = "abs_eig"

    def __init__(self, floor=DEFAULT_EIG_FLOOR, **kwargs):
        super().__init__(**kwargs)
        if floor < 0:
            raise ValueError("floor must be non-negative")
        self.floor = float(floor)

    def _transform(self, lam):
        return np.maximum(np.abs(lam), self.floor)

    def _fd_smoothness_check(self, target, x):
        _warn_if_eigenvalues_cross(self, target, x, self.floor)

    def describe(self):
        return {"kind": self.kind, "floor": self.floor}


class NearestPDMetric(_HessianEigMetric):
    """Frobenius-nearest SPD matrix to the negative Hessian."""

    kind = "nearest_pd"

    def __init__(self, floor=DEFAULT_EIG_FLOOR, max_iter=50, **kwargs):
        super().__init__(**kwargs)
        if floor < 0:
            raise ValueError("floor must be non-negative")
        self.floor = float(floor)
        self.max_iter = int(max_iter)

    def matrix(self, target, x):
        H = -target.hessian_log_density(x)
        return nearest_spd(H, floor=self.floor, max_iter=self.max_iter)

    def _fd_smoothness_check(self, target, x):
        _warn_if_eigenvalues_cross(self, target, x, self.floor)

    def describe(self):
        return {"kind": self.kind, "floor": self.floor, "max_iter": self.max_iter}


def _warn_if_eigenvalues_cross(field, target, x, floor):
    """Warn when a finite-difference sweep straddles an eigenvalue kink."""
    x = np.asarray(x, dtype=float)
    for j in range(x.size):
        h = field.fd_step * (1.0 + abs(x[j]))
        xp = x.copy(); xp[j] += h
        xm = x.copy(); xm[j] -= h
        lp, _ = field._eigensystem(target, xp)
        lm, _ = field._eigensystem(target, xm)
        if np.any(np.sign(np.where(np.abs(lp) <= floor, 0.0, lp))
                  != np.sign(np.where(np.abs(lm) <= floor, 0.0, lm))):
            warnings.warn(
                f"finite-difference step straddles an eigenvalue sign change "
                f"near x={x} (coordinate {j}); drift derivatives may be inaccurate",
                NumericWarning, stacklevel=4)
            return


METRIC_KINDS = {
    "identity": IdentityMetric,
    "constant": ConstantMetric,
    "fisher": FisherMetric,
    "softabs": SoftAbsMetric,
    "abs_eig": AbsEigMetric,
    "nearest_pd": NearestPDMetric,
}


# -- operations on evaluated metrics and bare fields -------------------------

def eval_metric(field, target, x, need_derivatives=False):
    """Evaluate a metric field at a point; see MetricField.evaluate."""
    return field.evaluate(target, x, need_derivatives=need_derivatives)


def natural_gradient(ev, grad):
    """Manifold gradient in local coordinates: G^-1 grad."""
    return ev.G_inv @ np.asarray(grad, dtype=float)


def curvature_drift_from_derivatives(dG_inv):
    return 0.5 * np.einsum("jij->i", dG_inv)


def brownian_drift_from_derivatives(G_inv, dG_inv, dlog_det):
    return curvature_drift_from_derivatives(dG_inv) + 0.25 * G_inv @ dlog_det


def fd_field_derivatives(gfn, x, step=DEFAULT_FD_STEP):
    """Central differences of (G^-1, log|G|) for a bare field x -> G."""
    x = np.asarray(x, dtype=float)
    n = x.size
    dG_inv = np.empty((n, n, n))
    dlog = np.empty(n)
    for j in range(n):
        h = step * (1.0 + abs(x[j]))
        xp = x.copy(); xp[j] += h
        xm = x.copy(); xm[j] -= h
        evp = build_eval(gfn(xp), x=xp)
        evm = build_eval(gfn(xm), x=xm)
        dG_inv[j] = (evp.G_inv - evm.G_inv) / (2.0 * h)
        dlog[j] = (evp.log_det_G - evm.log_det_G) / (2.0 * h)
    return dG_inv, dlog


def field_brownian_drift(gfn, x, step=DEFAULT_FD_STEP):
    """Brownian-motion drift of a bare field, entirely by finite differences."""
    ev = build_eval(gfn(np.asarray(x, dtype=float)), x=x)
    dG_inv, dlog = fd_field_derivatives(gfn, x, step)
    return brownian_drift_from_derivatives(ev.G_inv, dG_inv, dlog)


def as_gfn(metric, target=None):
    """Accept a MetricField or a bare callable x -> G; return the callable."""
    if isinstance(metric, MetricField):
        return metric.gfn(target)
    if callable(metric):
        return metric
    raise TypeError("metric must be a MetricField or a callable x -> G")


def divergence_local(v, metric, x, step=1e-3, target=None):
    """Manifold divergence |G|^{-1/2} sum_i d_i(|G|^{1/2} v_i) at x.

    v is a callable x -> vector; metric is a MetricField or bare G-callable.
    Central differences with absolute step; volume factors are evaluated
    relative to the centre point to avoid overflow in |G|^{1/2}.
    """
    gfn = as_gfn(metric, target)
    x = np.asarray(x, dtype=float)
    _, ld0 = _slogdet_spd(gfn(x), x)
    total = 0.0
    for i in range(x.size):
        xp = x.copy(); xp[i] += step
        xm = x.copy(); xm[i] -= step
        _, ldp = _slogdet_spd(gfn(xp), xp)
        _, ldm = _slogdet_spd(gfn(xm), xm)
        sp = np.exp(0.5 * (ldp - ld0)) * float(np.asarray(v(xp))[i])
        sm = np.exp(0.5 * (ldm - ld0)) * float(np.asarray(v(xm))[i])
        total += (sp - sm) / (2.0 * step)
    return total


def _slogdet_spd(G, x):
    sign, ld = np.linalg.slogdet(np.asarray(G, dtype=float))
    if sign <= 0:
        raise NumericError("metric determinant is not positive", x=x)
    return sign, ld
