#include "bclass/conjugate.hpp"

#include <cmath>

namespace bclass {

namespace {

Matrix solve_spd(const Matrix& a, const Matrix& rhs) {
    const Matrix l = cholesky(a);
    Matrix z = l.triangularView<Eigen::Lower>().solve(rhs);
    return l.transpose().triangularView<Eigen::Upper>().solve(z);
}

}  // namespace

GaussianPosterior linreg_posterior(const Matrix& x, const Vector& y, double noise_var,
                                   double prior_var, LinregMode mode, double temperature) {
    if (x.rows() != y.size()) throw std::invalid_argument("linreg_posterior: shape mismatch");
    if (!(noise_var > 0.0) || !(prior_var > 0.0)) {
        throw std::invalid_argument("linreg_posterior: variances must be positive");
    }
    const double t = mode == LinregMode::Standard ? 1.0 : temperature;
    if (!(t > 0.0)) throw std::invalid_argument("linreg_posterior: temperature must be positive");
    const Eigen::Index d = x.cols();
    const Matrix xtx = x.transpose() * x;
    const Vector xty = x.transpose() * y;

    GaussianPosterior post;
    switch (mode) {
        case LinregMode::Standard: {
            const Matrix prec = xtx / noise_var + Matrix::Identity(d, d) / prior_var;
            post.covariance = solve_spd(prec, Matrix::Identity(d, d));
            post.mean = post.covariance * xty / noise_var;
            break;
        }
        case LinregMode::Tempered: {
            // likelihood precision scaled by 1/T, prior untouched
            const Matrix prec = xtx / (noise_var * t) + Matrix::Identity(d, d) / prior_var;
            post.covariance = solve_spd(prec, Matrix::Identity(d, d));
            post.mean = post.covariance * xty / (noise_var * t);
            break;
        }
        case LinregMode::Cold: {
            // prior variance rescaled to prior_var * T, then likelihood to 1/T
            const Matrix prec = xtx / noise_var + Matrix::Identity(d, d) / prior_var;
            const Matrix std_cov = solve_spd(prec, Matrix::Identity(d, d));
            post.mean = std_cov * xty / noise_var;
            post.covariance = t * std_cov;
            break;
        }
    }
    return post;
}

Matrix kernel_matrix(const KernelConfig& kernel, const Matrix& a, const Matrix& b) {
    if (!(kernel.lengthscale > 0.0)) {
        throw std::invalid_argument("kernel lengthscale must be positive");
    }
    Matrix k(a.rows(), b.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < b.rows(); ++j) {
            const double r = (a.row(i) - b.row(j)).norm() / kernel.lengthscale;
            double v = 0.0;
            if (r < 1.0) {
                if (kernel.kind == KernelKind::Wendland) {
                    // Wendland C2, PD for input dimension <= 3
                    const double u = 1.0 - r;
                    v = u * u * u * u * (4.0 * r + 1.0);
                } else {
                    v = std::exp(-0.5 * r * r);
                }
            }
            k(i, j) = kernel.signal_var * v;
        }
    }
    return k;
}

GaussianPosterior gp_posterior(const Matrix& x, const Vector& y, const KernelConfig& kernel,
                               double noise_var, const Matrix& x_star) {
    if (x.rows() != y.size()) throw std::invalid_argument("gp_posterior: shape mismatch");
    if (!(noise_var >= 0.0)) throw std::invalid_argument("gp_posterior: negative noise");
    Matrix gram = kernel_matrix(kernel, x, x);
    gram.diagonal().array() += noise_var + kernel.jitter;
    const Matrix k_star = kernel_matrix(kernel, x_star, x);
    const Matrix alpha = solve_spd(gram, y);
    GaussianPosterior post;
    post.mean = k_star * alpha;
    post.covariance = kernel_matrix(kernel, x_star, x_star) -
                      k_star * solve_spd(gram, k_star.transpose());
    return post;
}

namespace {

void check_shift(double shift, const KernelConfig& kernel) {
    if (!(shift > kernel.lengthscale)) {
        throw std::invalid_argument(
            "augmentation shift must exceed the kernel support radius");
    }
}

}  // namespace

GaussianPosterior gp_augmentation_posterior(const Matrix& x, const Vector& y, int k_aug,
                                            double shift, const KernelConfig& kernel,
                                            double noise_var) {
    if (k_aug < 1) throw std::invalid_argument("k_aug must be >= 1");
    if (k_aug > 1) check_shift(shift, kernel);
    return gp_posterior(x, y, kernel, k_aug * noise_var, x);
}

GaussianPosterior gp_augmentation_posterior_block(const Matrix& x, const Vector& y,
                                                  int k_aug, double shift,
                                                  const KernelConfig& kernel,
                                                  double noise_var) {
    if (k_aug < 1) throw std::invalid_argument("k_aug must be >= 1");
    if (k_aug > 1) check_shift(shift, kernel);
    const Eigen::Index n = x.rows();
    // t_1 = identity, t_j(x) = x + (j-1) * shift * e_1
    Matrix stacked(n * k_aug, x.cols());
    Vector y_stacked(n * k_aug);
    for (int j = 0; j < k_aug; ++j) {
        Matrix xj = x;
        xj.col(0).array() += static_cast<double>(j) * shift;
        stacked.middleRows(j * n, n) = xj;
        y_stacked.segment(j * n, n) = y;
    }
    // per-point likelihood power 1/K == per-point noise K * noise_var
    Matrix gram = kernel_matrix(kernel, stacked, stacked);
    gram.diagonal().array() += k_aug * noise_var + kernel.jitter;
    const Matrix k_star = kernel_matrix(kernel, x, stacked);
    GaussianPosterior post;
    post.mean = k_star * solve_spd(gram, y_stacked);
    post.covariance =
        kernel_matrix(kernel, x, x) - k_star * solve_spd(gram, k_star.transpose());
    return post;
}

namespace {

double coinflip_log_density(CoinflipKind kind, double param, double theta) {
    switch (kind) {
        case CoinflipKind::Standard:
            return std::log(theta);
        case CoinflipKind::Tempered:
            return std::log(theta) / param;
        case CoinflipKind::Smoothed: {
            // sigma(logit(theta)/T) = theta^{1/T} / (theta^{1/T} + (1-theta)^{1/T})
            const double a = std::log(theta) / param;
            const double b = std::log1p(-theta) / param;
            const double m = std::max(a, b);
            return a - (m + std::log(std::exp(a - m) + std::exp(b - m)));
        }
        case CoinflipKind::NoisyDirichlet:
            // Beta(alpha_eps + 1, alpha_eps) density, up to normalization
            return param * std::log(theta) + (param - 1.0) * std::log1p(-theta);
    }
    throw std::logic_error("unknown coinflip kind");
}

}  // namespace

ConfidenceCdf coinflip_cdf(CoinflipKind kind, double param, int resolution) {
    if (resolution < 100) throw std::invalid_argument("resolution must be >= 100");
    if (kind != CoinflipKind::Standard && !(param > 0.0)) {
        throw std::invalid_argument("parameter must be positive");
    }
    ConfidenceCdf out;
    out.grid.resize(resolution + 1);
    Vector density(resolution + 1);
    const double h = 1.0 / resolution;
    for (int i = 0; i <= resolution; ++i) {
        const double theta = i * h;
        out.grid[i] = theta;
        // Beta endpoint evaluations nudged inward; the density can diverge there
        double te = theta;
        if (kind == CoinflipKind::NoisyDirichlet) {
            te = std::min(std::max(theta, 0.5 * h), 1.0 - 0.5 * h);
        }
        density[i] = std::exp(coinflip_log_density(kind, param, te));
    }
    out.cdf.resize(resolution + 1);
    out.cdf[0] = 0.0;
    for (int i = 1; i <= resolution; ++i) {
        out.cdf[i] = out.cdf[i - 1] + 0.5 * h * (density[i - 1] + density[i]);
    }
    const double z = out.cdf[resolution];
    if (!(z > 0.0)) throw std::runtime_error("coinflip_cdf: degenerate density");
    out.cdf /= z;
    return out;
}

std::vector<SharpnessRow> smoothed_sharpness_bound(const std::vector<double>& temperatures) {
    std::vector<SharpnessRow> rows;
    rows.reserve(temperatures.size());
    for (double t : temperatures) {
        if (!(t > 0.0)) throw std::invalid_argument("temperatures must be positive");
        SharpnessRow row;
        row.temperature = t;
        row.tempered_ratio = std::exp(coinflip_log_density(CoinflipKind::Tempered, t, 0.6) -
                                      coinflip_log_density(CoinflipKind::Tempered, t, 0.9));
        row.smoothed_ratio = std::exp(coinflip_log_density(CoinflipKind::Smoothed, t, 0.6) -
                                      coinflip_log_density(CoinflipKind::Smoothed, t, 0.9));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace bclass
