"""Tempered Bayesian classification toolkit."""

from ._bclass import (
    CoinflipKind,
    DirichletKind,
    GaussianPosterior,
    KernelConfig,
    LinregMode,
    PriorSpec,
    SpiralsConfig,
    categorical_nll,
    coinflip_cdf,
    cold_rescale,
    dirichlet_observation,
    expected_confidence,
    gen_two_spirals,
    gp_augmentation_posterior,
    gp_augmentation_posterior_block,
    gp_posterior,
    linreg_posterior,
    ndg_targets,
    prior_nll,
    run_experiment,
    selfcheck,
    smoothed_categorical_nll,
    softmax,
    tempered_categorical_nll,
    tempered_prior_normalizer,
)

__all__ = [
    "CoinflipKind",
    "DirichletKind",
    "GaussianPosterior",
    "KernelConfig",
    "LinregMode",
    "PriorSpec",
    "SpiralsConfig",
    "categorical_nll",
    "coinflip_cdf",
    "cold_rescale",
    "dirichlet_observation",
    "expected_confidence",
    "gen_two_spirals",
    "gp_augmentation_posterior",
    "gp_augmentation_posterior_block",
    "gp_posterior",
    "linreg_posterior",
    "ndg_targets",
    "prior_nll",
    "run_experiment",
    "selfcheck",
    "smoothed_categorical_nll",
    "softmax",
    "tempered_categorical_nll",
    "tempered_prior_normalizer",
]
