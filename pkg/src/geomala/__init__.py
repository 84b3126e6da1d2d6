"""Langevin and manifold-Langevin MCMC with position-dependent metrics."""

from .diagnostics import (DiagnosticsSummary, act_time, autocorrelation,
                          empirical_tv, ess, summarize)
from .diffusion import (DiffusionSpec, em_step, fokker_planck_residual,
                        generator_apply, langevin, laplace_beltrami,
                        manifold_brownian, manifold_langevin, simulate_path)
from .exceptions import (CapabilityError, GeomalaError, IntegrationError,
                         NumericError, NumericWarning)
from .metrics import (AbsEigMetric, ConstantMetric, FisherMetric,
                      IdentityMetric, MetricEval, MetricField, NearestPDMetric,
                      SoftAbsMetric, divergence_local, eval_metric,
                      natural_gradient, nearest_spd)
from .samplers import (MALA, RWM, ChainState, ManifoldMALA, ManifoldRWM,
                       PreconditionedMALA, ProposalKernel,
                       SimplifiedManifoldMALA, Trace, chain_rng,
                       log_accept_ratio, log_q, mh_step, propose, run_chain)
from .targets import (TargetModel, bayes_logistic, bayes_logistic_from_csv,
                      cauchy_product, exp_power, gaussian, quartic_product,
                      std_gaussian)

__version__ = "0.1.0"

__all__ = [
    "AbsEigMetric", "CapabilityError", "ChainState", "ConstantMetric",
    "DiagnosticsSummary", "DiffusionSpec", "FisherMetric", "GeomalaError",
    "IdentityMetric", "IntegrationError", "MALA", "ManifoldMALA",
    "ManifoldRWM", "MetricEval", "MetricField", "NearestPDMetric",
    "NumericError", "NumericWarning", "PreconditionedMALA", "ProposalKernel",
    "RWM", "SimplifiedManifoldMALA", "SoftAbsMetric", "TargetModel", "Trace",
    "act_time", "autocorrelation", "bayes_logistic", "bayes_logistic_from_csv",
    "cauchy_product", "chain_rng", "divergence_local", "em_step",
    "empirical_tv", "ess", "eval_metric", "exp_power",
    "fokker_planck_residual", "gaussian", "generator_apply", "langevin",
    "laplace_beltrami", "log_accept_ratio", "log_q", "manifold_brownian",
    "manifold_langevin", "mh_step", "natural_gradient", "nearest_spd",
    "propose", "quartic_product", "run_chain", "simulate_path", "std_gaussian",
    "summarize",
]
