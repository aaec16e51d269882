#include "bclass/priors.hpp"

#include <cmath>

namespace bclass {

PriorSpec PriorSpec::gaussian(double variance, int dimension) {
    if (!(variance > 0.0)) throw std::invalid_argument("variance must be positive");
    PriorSpec s;
    s.family = PriorFamily::GaussianIid;
    s.variance = variance;
    s.dimension = dimension;
    return s;
}

PriorSpec PriorSpec::laplace(double scale, int dimension) {
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
    PriorSpec s;
    s.family = PriorFamily::LaplaceIid;
    s.scale = scale;
    s.dimension = dimension;
    return s;
}

PriorSpec PriorSpec::student_t(double dof, double scale, int dimension) {
    if (!(dof > 0.0) || !(scale > 0.0)) {
        throw std::invalid_argument("dof and scale must be positive");
    }
    PriorSpec s;
    s.family = PriorFamily::StudentTIid;
    s.dof = dof;
    s.scale = scale;
    s.dimension = dimension;
    return s;
}

PriorSpec PriorSpec::cauchy(double scale, int dimension) {
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
    PriorSpec s;
    s.family = PriorFamily::CauchyIid;
    s.scale = scale;
    s.dimension = dimension;
    return s;
}

double prior_log_density_1d(const PriorSpec& spec, double x) {
    switch (spec.family) {
        case PriorFamily::GaussianIid:
            return -0.5 * std::log(2.0 * M_PI * spec.variance) -
                   0.5 * x * x / spec.variance;
        case PriorFamily::LaplaceIid:
            return -std::log(2.0 * spec.scale) - std::abs(x) / spec.scale;
        case PriorFamily::StudentTIid: {
            const double v = spec.dof;
            const double s2 = spec.scale * spec.scale;
            return std::lgamma(0.5 * (v + 1.0)) - std::lgamma(0.5 * v) -
                   0.5 * std::log(v * M_PI * s2) -
                   0.5 * (v + 1.0) * std::log1p(x * x / (v * s2));
        }
        case PriorFamily::CauchyIid: {
            const double s = spec.scale;
            return -std::log(M_PI * s) - std::log1p((x / s) * (x / s));
        }
    }
    throw std::logic_error("unknown prior family");
}

NllResult prior_nll(const PriorSpec& spec, const Vector& theta) {
    if (theta.size() != spec.dimension) {
        throw std::invalid_argument("prior_nll: dimension mismatch");
    }
    NllResult r;
    r.grad.resize(theta.size());
    switch (spec.family) {
        case PriorFamily::GaussianIid: {
            const double a = spec.variance;
            r.value = 0.5 * theta.size() * std::log(2.0 * M_PI * a) +
                      0.5 * theta.squaredNorm() / a;
            r.grad = theta / a;
            break;
        }
        case PriorFamily::LaplaceIid: {
            const double b = spec.scale;
            r.value = theta.size() * std::log(2.0 * b) + theta.cwiseAbs().sum() / b;
            r.grad = (theta.array().sign() / b).matrix();
            break;
        }
        case PriorFamily::StudentTIid: {
            const double v = spec.dof;
            const double s2 = spec.scale * spec.scale;
            r.value = 0.0;
            for (Eigen::Index i = 0; i < theta.size(); ++i) {
                r.value -= prior_log_density_1d(spec, theta[i]);
                r.grad[i] = (v + 1.0) * theta[i] / (v * s2 + theta[i] * theta[i]);
            }
            break;
        }
        case PriorFamily::CauchyIid: {
            const double s = spec.scale;
            r.value = 0.0;
            for (Eigen::Index i = 0; i < theta.size(); ++i) {
                r.value -= prior_log_density_1d(spec, theta[i]);
                r.grad[i] = 2.0 * theta[i] / (s * s + theta[i] * theta[i]);
            }
            break;
        }
    }
    return r;
}

PriorSpec cold_rescale(const PriorSpec& spec, double temperature) {
    if (!(temperature > 0.0) || temperature > 1.0) {
        throw std::invalid_argument("cold_rescale: temperature must lie in (0,1]");
    }
    PriorSpec out = spec;
    switch (spec.family) {
        case PriorFamily::GaussianIid:
            out.variance = spec.variance * temperature;
            break;
        case PriorFamily::LaplaceIid:
            out.scale = spec.scale * temperature;
            break;
        case PriorFamily::StudentTIid: {
            const double v = spec.dof;
            const double vt = (v + 1.0) / temperature - 1.0;
            if (!(v + 1.0 - temperature > 0.0)) {
                throw std::invalid_argument("cold_rescale: dof constraint violated");
            }
            const double s2t =
                v * spec.scale * spec.scale * temperature / (v + 1.0 - temperature);
            out.dof = vt;
            out.scale = std::sqrt(s2t);
            break;
        }
        case PriorFamily::CauchyIid:
            throw std::invalid_argument("unsupported closed-form rescale");
    }
    return out;
}

namespace {

struct Quadrature {
    std::function<double(double)> f;
    long evals = 0;
    static constexpr long kMaxEvals = 2'000'000;

    double eval(double x) {
        if (++evals > kMaxEvals) {
            throw std::runtime_error("quadrature did not converge");
        }
        return f(x);
    }

    double simpson(double a, double b, double fa, double fm, double fb) const {
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    }

    double adaptive(double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = eval(lm);
        const double frm = eval(rm);
        const double left = simpson(a, m, fa, flm, fm);
        const double right = simpson(m, b, fm, frm, fb);
        const double delta = left + right - whole;
        if (depth <= 0 && std::abs(delta) > 15.0 * tol) {
            throw std::runtime_error("quadrature did not converge");
        }
        if (std::abs(delta) <= 15.0 * tol || depth <= 0) {
            return left + right + delta / 15.0;
        }
        return adaptive(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
               adaptive(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }

    double integrate(double a, double b, double tol, int depth = 48) {
        const double fa = eval(a);
        const double fb = eval(b);
        const double fm = eval(0.5 * (a + b));
        const double whole = simpson(a, b, fa, fm, fb);
        return adaptive(a, b, fa, fm, fb, whole, tol, depth);
    }
};

}  // namespace

double tempered_prior_normalizer(const PriorSpec& spec, double temperature) {
    if (!(temperature > 0.0) || temperature > 1.0) {
        throw std::invalid_argument("temperature must lie in (0,1]");
    }
    // Map the line to (-pi/2, pi/2) via theta = s * tan(u); the compactifying
    // substitution keeps heavy tails (Cauchy) smooth at the endpoints.
    double s = 1.0;
    switch (spec.family) {
        case PriorFamily::GaussianIid:
            s = std::sqrt(spec.variance);
            break;
        default:
            s = spec.scale;
            break;
    }
    Quadrature q;
    q.f = [&](double u) {
        const double c = std::cos(u);
        if (c <= 1e-300) return 0.0;
        const double theta = s * std::tan(u);
        const double logp = prior_log_density_1d(spec, theta);
        const double val = std::exp(logp / temperature) * s / (c * c);
        return std::isfinite(val) ? val : 0.0;
    };
    const double eps = 1e-12;
    return q.integrate(-0.5 * M_PI + eps, 0.5 * M_PI - eps, 1e-8);
}

}  // namespace bclass
