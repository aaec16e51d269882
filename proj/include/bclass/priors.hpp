#pragma once

#include "bclass/numerics.hpp"
#include "bclass/observation.hpp"

namespace bclass {

enum class PriorFamily { GaussianIid, LaplaceIid, StudentTIid, CauchyIid };

/// Iid prior over a flat parameter vector.
struct PriorSpec {
    PriorFamily family = PriorFamily::GaussianIid;
    int dimension = 0;
    double variance = 1.0;  // GaussianIid
    double scale = 1.0;     // LaplaceIid b / StudentTIid sigma / CauchyIid s
    double dof = 1.0;       // StudentTIid nu

    static PriorSpec gaussian(double variance, int dimension);
    static PriorSpec laplace(double scale, int dimension);
    static PriorSpec student_t(double dof, double scale, int dimension);
    static PriorSpec cauchy(double scale, int dimension);
};

/// -sum_i log p(theta_i) with analytic gradient.
NllResult prior_nll(const PriorSpec& spec, const Vector& theta);

/// Closed-form family after raising the density to 1/T, 0 < T <= 1.
/// Cauchy has no closed form inside these four families and errors.
PriorSpec cold_rescale(const PriorSpec& spec, double temperature);

/// Numeric normalizer of the 1-D marginal density p(theta)^{1/T},
/// adaptive quadrature over the whole line to absolute tolerance 1e-8.
double tempered_prior_normalizer(const PriorSpec& spec, double temperature);

/// log of the 1-D marginal density of `spec` at x (helper shared with the
/// coinflip/quadrature oracles in tests).
double prior_log_density_1d(const PriorSpec& spec, double x);

}  // namespace bclass
