import math

import numpy as np
import pytest

from geomala import (CapabilityError, NumericWarning, TargetModel,
                     bayes_logistic, bayes_logistic_from_csv, cauchy_product,
                     exp_power, gaussian, quartic_product, std_gaussian)
from geomala import numdiff

from _support import random_spd


def example_targets(rng):
    """One instance of every builtin, with a sensible sampling scale."""
    design = rng.standard_normal((20, 3))
    labels = (rng.uniform(size=20) < 0.5).astype(float)
    return [
        (std_gaussian(3), 2.0),
        (gaussian(rng.standard_normal(3), random_spd(rng, 3)), 2.0),
        (cauchy_product(2), 3.0),
        (quartic_product(2), 1.5),
        (exp_power(2, 1.5), 2.0),
        (exp_power(1, 3.0), 1.5),
        (bayes_logistic(design, labels, prior_var=25.0), 1.0),
    ]


def draw_point(rng, target, scale):
    x = scale * rng.standard_normal(target.dim)
    # keep clear of the exp-power kink where derivatives are only conventions
    x[np.abs(x) < 0.1] += 0.2
    return x


def test_gradients_match_finite_differences():
    rng = np.random.default_rng(7)
    for target, scale in example_targets(rng):
        for _ in range(100):
            x = draw_point(rng, target, scale)
            fd = numdiff.gradient(target.log_density, x)
            g = target.grad_log_density(x)
            assert np.max(np.abs(fd - g)) <= 1e-5 * (1.0 + np.max(np.abs(g))), target.name


def test_hessians_match_finite_differences_of_gradient():
    rng = np.random.default_rng(8)
    for target, scale in example_targets(rng):
        for _ in range(25):
            x = draw_point(rng, target, scale)
            H = target.hessian_log_density(x)
            assert np.allclose(H, H.T), target.name
            fd = numdiff.jacobian(target.grad_log_density, x)
            fd = 0.5 * (fd + fd.T)
            assert np.max(np.abs(fd - H)) <= 1e-4 * (1.0 + np.max(np.abs(H))), target.name


def test_logistic_fisher_likelihood_part_is_psd():
    rng = np.random.default_rng(9)
    design = rng.standard_normal((30, 4))
    labels = (rng.uniform(size=30) < 0.4).astype(float)
    target = bayes_logistic(design, labels, prior_var=10.0)
    for _ in range(100):
        x = rng.standard_normal(4) * 2.0
        lik, prior = target.fisher_terms(x)
        assert np.min(np.linalg.eigvalsh(lik)) >= -1e-10
        assert np.allclose(prior, np.eye(4) / 10.0)


def test_product_targets_factorise_exactly():
    rng = np.random.default_rng(10)
    for family in (cauchy_product, quartic_product, lambda n: exp_power(n, 1.7)):
        target_n = family(4)
        target_1 = family(1)
        for _ in range(20):
            x = rng.standard_normal(4) * 2.0
            parts = np.array([target_1.log_density(x[i:i + 1]) for i in range(4)])
            assert target_n.log_density(x) == np.sum(parts)


def test_log_density_reference_values():
    assert std_gaussian(2).log_density([0.0, 0.0]) == 0.0
    assert math.isclose(cauchy_product(1).log_density([3.0]), -math.log(10.0),
                        rel_tol=0, abs_tol=1e-15)
    assert quartic_product(1).log_density([1.0]) == -1.0


def test_gradient_reference_values():
    x = np.array([0.7, -1.3])
    assert np.array_equal(std_gaussian(2).grad_log_density(x), -x)
    assert np.allclose(quartic_product(2).grad_log_density(x), -4.0 * x ** 3)
    x1 = np.array([2.0])
    assert np.allclose(cauchy_product(1).grad_log_density(x1), -2.0 * x1 / (1 + x1 ** 2))


def test_hessian_reference_values():
    assert np.array_equal(std_gaussian(2).hessian_log_density([1.0, 2.0]), -np.eye(2))
    x = 0.8
    want = (2 * x * x - 2) / (1 + x * x) ** 2
    assert np.allclose(cauchy_product(1).hessian_log_density([x]), [[want]])
    assert np.allclose(quartic_product(1).hessian_log_density([x]), [[-12 * x * x]])


def test_fisher_reference_values():
    target = bayes_logistic(np.eye(2), np.array([1.0, 0.0]), prior_var=4.0)
    lik, prior = target.fisher_terms(np.zeros(2))
    assert np.allclose(lik, 0.25 * np.eye(2))
    assert np.allclose(prior, 0.25 * np.eye(2))  # 1/prior_var on the diagonal

    cov = np.array([[2.0, 0.5], [0.5, 1.0]])
    g = gaussian(np.zeros(2), cov)
    lik, prior = g.fisher_terms(np.ones(2))
    assert np.allclose(lik, np.linalg.inv(cov))
    assert np.array_equal(prior, np.zeros((2, 2)))


def test_logistic_fisher_jacobian_matches_finite_differences():
    rng = np.random.default_rng(11)
    design = rng.standard_normal((15, 3))
    labels = (rng.uniform(size=15) < 0.5).astype(float)
    target = bayes_logistic(design, labels, prior_var=9.0)
    x = rng.standard_normal(3)
    jac = target.fisher_terms_jacobian(x)
    fd = numdiff.jacobian(lambda y: target.fisher_terms(y)[0], x)  # [i, k, j]
    fd = np.moveaxis(fd, -1, 0)
    assert np.max(np.abs(jac - fd)) <= 1e-6 * (1.0 + np.max(np.abs(jac)))


def test_dimension_mismatch_is_a_usage_error():
    target = std_gaussian(3)
    with pytest.raises(ValueError):
        target.log_density([1.0, 2.0])
    with pytest.raises(ValueError):
        target.grad_log_density(np.zeros(4))
    with pytest.raises(ValueError):
        target.log_density([np.inf, 0.0, 0.0])


def test_fisher_without_likelihood_structure_is_a_capability_error():
    with pytest.raises(CapabilityError):
        cauchy_product(2).fisher_terms(np.zeros(2))


def test_exp_power_kink_convention():
    target = exp_power(2, 0.8)
    with pytest.warns(NumericWarning):
        g = target.grad_log_density(np.array([0.0, 1.0]))
    assert g[0] == 0.0
    assert np.isfinite(g).all()
    smooth = exp_power(2, 3.0)
    assert np.all(smooth.grad_log_density(np.zeros(2)) == 0.0)


def test_from_log_density_fallback():
    base = quartic_product(2)
    wrapped = TargetModel.from_log_density(2, base.log_density, name="wrapped")
    x = np.array([0.5, -1.2])
    assert np.allclose(wrapped.grad_log_density(x), base.grad_log_density(x),
                       rtol=1e-6, atol=1e-6)
    assert np.allclose(wrapped.hessian_log_density(x), base.hessian_log_density(x),
                       rtol=1e-4, atol=1e-4)


def test_logistic_csv_roundtrip(tmp_path):
    rng = np.random.default_rng(12)
    design = rng.standard_normal((10, 2))
    labels = (rng.uniform(size=10) < 0.5).astype(float)
    path = tmp_path / "data.csv"
    rows = ["x1,x2,y"] + [f"{float(a)!r},{float(b)!r},{int(y)}"
                          for (a, b), y in zip(design, labels)]
    path.write_text("\n".join(rows) + "\n")
    target = bayes_logistic_from_csv(path, prior_var=25.0)
    direct = bayes_logistic(design, labels, prior_var=25.0)
    x = rng.standard_normal(2)
    assert math.isclose(target.log_density(x), direct.log_density(x), rel_tol=1e-12)

    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,y\n1,2,0\n")
    with pytest.raises(ValueError):
        bayes_logistic_from_csv(bad, prior_var=1.0)
