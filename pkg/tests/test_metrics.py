import numpy as np
import pytest

from geomala import (AbsEigMetric, CapabilityError, ConstantMetric,
                     FisherMetric, IdentityMetric, NearestPDMetric,
                     NumericError, SoftAbsMetric, TargetModel, bayes_logistic,
                     cauchy_product, divergence_local, eval_metric, gaussian,
                     natural_gradient, nearest_spd, quartic_product,
                     std_gaussian)
from geomala.metrics import (fd_field_derivatives, field_brownian_drift,
                             softabs_eigenvalues)

from _support import random_spd


def fixed_hessian_target(H):
    """Target whose log-density Hessian is the given constant matrix."""
    H = np.asarray(H, dtype=float)
    return TargetModel(H.shape[0], lambda x: 0.0, lambda x: np.zeros(H.shape[0]),
                       hessian_log_density=lambda x: H, name="fixed_hessian")


def logistic_target(rng, m=20, n=3):
    design = rng.standard_normal((m, n))
    labels = (rng.uniform(size=m) < 0.5).astype(float)
    return bayes_logistic(design, labels, prior_var=16.0)


def test_every_kind_yields_spd_matrices():
    rng = np.random.default_rng(20)
    logi = logistic_target(rng)
    cases = [
        (IdentityMetric(), std_gaussian(3), 3),
        (ConstantMetric(random_spd(rng, 3)), std_gaussian(3), 3),
        (FisherMetric(), logi, 3),
        (SoftAbsMetric(sharpness=1e6), cauchy_product(3), 3),
        (AbsEigMetric(), cauchy_product(3), 3),
        (NearestPDMetric(), cauchy_product(3), 3),
    ]
    for field, target, dim in cases:
        for _ in range(100):
            x = rng.standard_normal(dim) * 2.0
            ev = eval_metric(field, target, x)
            assert np.min(np.linalg.eigvalsh(ev.G)) > 0.0, field.kind


def test_metric_eval_consistency():
    rng = np.random.default_rng(21)
    field = SoftAbsMetric(sharpness=1e4)
    target = cauchy_product(3)
    for _ in range(20):
        x = rng.standard_normal(3) * 2.0
        ev = eval_metric(field, target, x)
        resid = np.linalg.norm(ev.G @ ev.G_inv - np.eye(3), 2)
        assert resid <= 1e-8 * np.linalg.norm(ev.G, 2)
        sign, logdet = np.linalg.slogdet(ev.G)
        assert sign > 0 and abs(logdet - ev.log_det_G) <= 1e-8 * (1 + abs(logdet))
        L = ev.chol_G_inv
        assert np.allclose(L @ L.T, ev.G_inv, atol=1e-12)
        assert np.allclose(np.triu(L, 1), 0.0)


def test_softabs_uplifts_zero_eigenvalues_to_inverse_sharpness():
    field = SoftAbsMetric(sharpness=100.0)
    target = fixed_hessian_target(np.zeros((1, 1)))
    ev = eval_metric(field, target, np.zeros(1))
    assert np.isclose(ev.G[0, 0], 1.0 / 100.0)


def test_softabs_approaches_hard_absolute_value():
    lam = np.array([-3.0, -0.5, 0.5, 2.0, 40.0])
    alpha = 100.0
    assert np.all(np.abs(lam) * alpha >= 50.0)
    t = softabs_eigenvalues(lam, alpha)
    assert np.all(np.abs(t - np.abs(lam)) <= np.abs(lam) * 1e-15 + 1e-12)


def test_abs_eig_on_indefinite_diagonal():
    target = fixed_hessian_target(np.diag([2.0, -3.0]))  # -H = diag(-2, 3)
    ev = eval_metric(AbsEigMetric(floor=0.0), target, np.zeros(2))
    assert np.allclose(ev.G, np.diag([2.0, 3.0]))


def test_fisher_metric_is_constant_for_gaussian():
    rng = np.random.default_rng(22)
    cov = random_spd(rng, 2)
    target = gaussian(np.zeros(2), cov)
    field = FisherMetric()
    evs = [eval_metric(field, target, rng.standard_normal(2)) for _ in range(5)]
    for ev in evs:
        assert np.allclose(ev.G, np.linalg.inv(cov), atol=1e-10)


def test_abs_eig_inverse_matches_cauchy_closed_form():
    target = cauchy_product(1)
    field = AbsEigMetric(floor=0.0)
    for x in (0.3, 0.9, 1.5, 4.0):
        ev = eval_metric(field, target, np.array([x]))
        want = (1 + x * x) ** 2 / abs(2 - 2 * x * x)
        assert np.isclose(ev.G_inv[0, 0], want, rtol=1e-12)


def test_natural_gradient_closed_forms():
    grad = np.array([0.4, -1.0])
    ev = eval_metric(IdentityMetric(), std_gaussian(2), np.zeros(2))
    assert np.array_equal(natural_gradient(ev, grad), grad)

    cauchy = cauchy_product(1)
    field = AbsEigMetric(floor=0.0)
    for x in (0.5, 2.0, -3.0):
        ev = eval_metric(field, cauchy, np.array([x]))
        ng = natural_gradient(ev, cauchy.grad_log_density(np.array([x])))
        assert np.isclose(ng[0], -x * (1 + x * x) / abs(1 - x * x), rtol=1e-12)

    quartic = quartic_product(1)
    for x in (0.7, 3.0):
        ev = eval_metric(field, quartic, np.array([x]))
        ng = natural_gradient(ev, quartic.grad_log_density(np.array([x])))
        assert np.isclose(ng[0], -x / 3.0, rtol=1e-12)


def test_drifts_vanish_for_constant_fields():
    rng = np.random.default_rng(23)
    target = std_gaussian(2)
    x = rng.standard_normal(2)
    for field in (IdentityMetric(), ConstantMetric(random_spd(rng, 2))):
        assert np.array_equal(field.curvature_drift(target, x), np.zeros(2))
        assert np.array_equal(field.brownian_drift(target, x), np.zeros(2))
    # finite differences of a constant field are exactly zero too
    fd = IdentityMetric(derivative_mode="fd")
    assert np.array_equal(fd.curvature_drift(target, x), np.zeros(2))
    assert np.array_equal(fd.brownian_drift(target, x), np.zeros(2))


def test_quartic_drift_closed_forms():
    target = quartic_product(1)
    field = AbsEigMetric()
    for x in (0.6, 1.5, 3.0):
        lam = field.curvature_drift(target, np.array([x]))
        om = field.brownian_drift(target, np.array([x]))
        assert np.isclose(lam[0], -1.0 / (12 * x ** 3), rtol=1e-6)
        assert np.isclose(om[0], -1.0 / (24 * x ** 3), rtol=1e-6)


def test_fisher_analytic_derivatives_match_finite_differences():
    rng = np.random.default_rng(24)
    target = logistic_target(rng)
    analytic = FisherMetric(derivative_mode="analytic")
    fd = FisherMetric(derivative_mode="fd")
    for _ in range(10):
        x = rng.standard_normal(3)
        ev_a = eval_metric(analytic, target, x, need_derivatives=True)
        ev_f = eval_metric(fd, target, x, need_derivatives=True)
        scale = 1.0 + np.max(np.abs(ev_a.dG_inv))
        assert np.max(np.abs(ev_a.dG_inv - ev_f.dG_inv)) <= 1e-5 * scale
        assert np.max(np.abs(ev_a.dlog_det - ev_f.dlog_det)) <= 1e-5 * (
            1.0 + np.max(np.abs(ev_a.dlog_det)))
        la = analytic.curvature_drift(target, x)
        lf = fd.curvature_drift(target, x)
        assert np.max(np.abs(la - lf)) <= 1e-5 * (1.0 + np.max(np.abs(la)))


def test_nearest_pd_is_the_frobenius_projection():
    rng = np.random.default_rng(25)
    for _ in range(20):
        A = rng.standard_normal((4, 4))
        A = 0.5 * (A + A.T)
        floor = 1e-8
        B = nearest_spd(A, floor=floor)
        assert np.allclose(B, B.T)
        assert np.min(np.linalg.eigvalsh(B)) >= floor - 1e-12  # roundoff allowance
        lam = np.linalg.eigvalsh(A)
        vecs = np.linalg.eigh(A)[1]
        abs_version = (vecs * np.maximum(np.abs(lam), floor)) @ vecs.T
        d_near = np.linalg.norm(B - A, ord="fro")
        d_abs = np.linalg.norm(abs_version - A, ord="fro")
        assert d_near <= d_abs + 1e-12


def test_divergence_examples():
    eye = lambda y: np.eye(2)
    assert np.isclose(divergence_local(lambda y: y.copy(), eye, np.array([0.3, -1.0])),
                      2.0, atol=1e-6)
    assert np.isclose(divergence_local(lambda y: np.array([0.7, -0.2]), eye,
                                       np.array([0.3, -1.0])), 0.0, atol=1e-9)
    warped = lambda y: np.diag([np.exp(2 * y[0]), 1.0])
    got = divergence_local(lambda y: np.array([1.0, 0.0]), warped, np.zeros(2))
    assert np.isclose(got, 1.0, atol=1e-5)


def test_divergence_accepts_metric_fields():
    field = IdentityMetric()
    got = divergence_local(lambda y: y.copy(), field, np.array([1.0, 2.0]))
    assert np.isclose(got, 2.0, atol=1e-6)


def test_field_brownian_drift_matches_metric_field_path():
    target = quartic_product(1)
    field = AbsEigMetric()
    x = np.array([1.2])
    direct = field.brownian_drift(target, x)
    via_fn = field_brownian_drift(field.gfn(target), x)
    assert np.allclose(direct, via_fn, rtol=1e-9)


def test_missing_structure_raises_capability_errors():
    no_hessian = TargetModel(2, lambda x: 0.0, lambda x: np.zeros(2))
    with pytest.raises(CapabilityError):
        eval_metric(AbsEigMetric(), no_hessian, np.zeros(2))
    with pytest.raises(CapabilityError):
        eval_metric(FisherMetric(), cauchy_product(2), np.zeros(2))
    with pytest.raises(CapabilityError):
        AbsEigMetric(derivative_mode="analytic").curvature_drift(
            quartic_product(1), np.ones(1))


def test_unrepairable_matrix_raises_numeric_error():
    target = fixed_hessian_target(np.zeros((2, 2)))
    with pytest.raises(NumericError):
        eval_metric(AbsEigMetric(floor=0.0), target, np.zeros(2))


def test_fd_field_derivatives_convergence():
    # d/dx of G^-1 for G = diag(1 + x0^2, 2) has one nonzero slice
    gfn = lambda y: np.diag([1.0 + y[0] ** 2, 2.0])
    x = np.array([0.8, 0.0])
    dG_inv, dlog = fd_field_derivatives(gfn, x)
    want = -2 * 0.8 / (1 + 0.64) ** 2
    assert np.isclose(dG_inv[0][0, 0], want, rtol=1e-8)
    assert np.allclose(dG_inv[1], 0.0)
    assert np.isclose(dlog[0], 2 * 0.8 / 1.64, rtol=1e-8)
