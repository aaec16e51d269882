#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>

#include "bclass/rng.hpp"

namespace bclass {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when a Cholesky pivot is not positive.
struct NotPdError : std::runtime_error {
    explicit NotPdError(int pivot_index)
        : std::runtime_error("not PD at pivot " + std::to_string(pivot_index)),
          pivot(pivot_index) {}
    int pivot;
};

/// log sum exp with the max shifted out, exact for empty-free input.
double log_sum_exp(const Vector& v);

/// Lower-triangular L with L L^T = A. Dense, unpivoted.
Matrix cholesky(const Matrix& a);

/// Multivariate normal log-density via Cholesky of `cov`.
double mvn_logpdf(const Vector& x, const Vector& mean, const Matrix& cov);

/// Central finite differences, one coordinate at a time.
Vector finite_diff_grad(const std::function<double(const Vector&)>& f,
                        const Vector& x, double h);

/// Standard normal vector of dimension d from `rng`.
Vector normal_vector(RngStream& rng, Eigen::Index d);

}  // namespace bclass
