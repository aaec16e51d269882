#pragma once

#include <vector>

#include "bclass/numerics.hpp"

namespace bclass {

struct GaussianPosterior {
    Vector mean;
    Matrix covariance;
};

enum class LinregMode { Standard, Tempered, Cold };

/// Conjugate Bayesian linear regression posterior over weights with
/// Gaussian prior N(0, prior_var I) and noise variance noise_var.
/// Tempered raises only the likelihood to 1/T; Cold rescales the prior
/// variance to prior_var * T as well, which leaves the mean unchanged and
/// multiplies the covariance by T.
GaussianPosterior linreg_posterior(const Matrix& x, const Vector& y, double noise_var,
                                   double prior_var, LinregMode mode,
                                   double temperature = 1.0);

enum class KernelKind { Wendland, TruncatedRbf };

/// Compactly supported kernel with k(x, x') = 0 beyond distance `lengthscale`.
/// Wendland is PD in dimension <= 3; the hard-truncated RBF is available
/// behind the jitter guard.
struct KernelConfig {
    KernelKind kind = KernelKind::Wendland;
    double lengthscale = 1.0;
    double signal_var = 1.0;
    double jitter = 1e-10;
};

Matrix kernel_matrix(const KernelConfig& kernel, const Matrix& a, const Matrix& b);

/// Standard GP regression predictive at `x_star`.
GaussianPosterior gp_posterior(const Matrix& x, const Vector& y, const KernelConfig& kernel,
                               double noise_var, const Matrix& x_star);

/// Posterior over the original-input function values under the
/// augmentation limiting distribution with K far shifts: each per-point
/// Gaussian likelihood carries power 1/K, which is exactly GP regression
/// with noise K * noise_var.
GaussianPosterior gp_augmentation_posterior(const Matrix& x, const Vector& y, int k_aug,
                                            double shift, const KernelConfig& kernel,
                                            double noise_var);

/// Independent block-construction route: stack the K shifted copies,
/// per-point likelihood power 1/K, full Gram matrix, predict at the
/// original inputs. Kept as the cross-check for the inflated-noise path.
GaussianPosterior gp_augmentation_posterior_block(const Matrix& x, const Vector& y,
                                                  int k_aug, double shift,
                                                  const KernelConfig& kernel,
                                                  double noise_var);

enum class CoinflipKind { Standard, Tempered, Smoothed, NoisyDirichlet };

struct ConfidenceCdf {
    Vector grid;
    Vector cdf;
};

/// Posterior CDF over the heads probability theta in [0,1] under a uniform
/// prior and a single heads observation, for the selected likelihood
/// family. `param` is T for Tempered/Smoothed and alpha_eps for
/// NoisyDirichlet; ignored for Standard.
ConfidenceCdf coinflip_cdf(CoinflipKind kind, double param, int resolution);

struct SharpnessRow {
    double temperature;
    double tempered_ratio;  // density(0.6)/density(0.9), tempered family
    double smoothed_ratio;  // same ratio, smoothed family
};

/// Density ratio report demonstrating that the smoothed softmax cannot be
/// made arbitrarily sharp while the tempered family can.
std::vector<SharpnessRow> smoothed_sharpness_bound(const std::vector<double>& temperatures);

}  // namespace bclass
