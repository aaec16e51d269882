#include "bclass/observation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bclass {

namespace {

void check_class(int y, Eigen::Index c) {
    if (y < 0 || y >= c) throw std::out_of_range("class index out of range");
}

void check_temperature(double t) {
    if (!(t > 0.0)) throw std::invalid_argument("temperature must be positive");
}

}  // namespace

Vector softmax(const Vector& logits) {
    const double lse = log_sum_exp(logits);
    Vector p = (logits.array() - lse).exp();
    p /= p.sum();  // renormalize away residual rounding
    return p;
}

NllResult categorical_nll(const Vector& logits, int y) {
    check_class(y, logits.size());
    NllResult r;
    r.value = log_sum_exp(logits) - logits[y];
    r.grad = softmax(logits);
    r.grad[y] -= 1.0;
    return r;
}

NllResult tempered_categorical_nll(const Vector& logits, int y, double temperature) {
    check_temperature(temperature);
    NllResult r = categorical_nll(logits, y);
    r.value /= temperature;
    r.grad /= temperature;
    return r;
}

NllResult smoothed_categorical_nll(const Vector& logits, int y, double temperature) {
    check_temperature(temperature);
    NllResult r = categorical_nll(logits / temperature, y);
    r.grad /= temperature;  // chain rule through logits/T
    return r;
}

NdgTargets ndg_targets(int y, int num_classes, double alpha_eps) {
    check_class(y, num_classes);
    if (!(alpha_eps > 0.0)) throw std::invalid_argument("alpha_eps must be positive");
    NdgTargets t;
    t.mu.resize(num_classes);
    t.sigma_sq.resize(num_classes);
    for (int c = 0; c < num_classes; ++c) {
        const double alpha = alpha_eps + (c == y ? 1.0 : 0.0);
        const double s2 = std::log1p(1.0 / alpha);
        t.sigma_sq[c] = s2;
        t.mu[c] = std::log(alpha) - 0.5 * s2;
    }
    return t;
}

NllResult ndg_nll(const Vector& logits, const NdgTargets& targets) {
    if (logits.size() != targets.mu.size()) {
        throw std::invalid_argument("ndg_nll: dimension mismatch");
    }
    NllResult r;
    r.grad.resize(logits.size());
    for (Eigen::Index c = 0; c < logits.size(); ++c) {
        const double resid = logits[c] - targets.mu[c];
        const double s2 = targets.sigma_sq[c];
        r.value += 0.5 * resid * resid / s2 + 0.5 * std::log(2.0 * M_PI * s2);
        r.grad[c] = resid / s2;
    }
    return r;
}

Vector dirichlet_observation(DirichletKind kind, double param, int y, int num_classes) {
    check_class(y, num_classes);
    Vector alpha(num_classes);
    switch (kind) {
        case DirichletKind::Standard:
            alpha.setOnes();
            alpha[y] = 2.0;
            break;
        case DirichletKind::Tempered:
            check_temperature(param);
            alpha.setOnes();
            alpha[y] = 1.0 + 1.0 / param;
            break;
        case DirichletKind::Noisy:
            if (!(param > 0.0)) throw std::invalid_argument("alpha_eps must be positive");
            alpha.setConstant(param);
            alpha[y] = param + 1.0;
            break;
    }
    return alpha;
}

double expected_confidence(const Vector& alpha, int y) {
    check_class(y, alpha.size());
    return alpha[y] / alpha.sum();
}

ConsistencyResult augmentation_consistency_nll(const Vector& f_aug, const Vector& f_orig,
                                               double scale) {
    if (f_aug.size() != f_orig.size()) {
        throw std::invalid_argument("augmentation_consistency_nll: dimension mismatch");
    }
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
    const double s2 = scale * scale;
    const Vector resid = f_aug - f_orig;
    ConsistencyResult r;
    r.value = 0.5 * resid.squaredNorm() / s2 +
              0.5 * static_cast<double>(f_aug.size()) * std::log(2.0 * M_PI * s2);
    r.grad_aug = resid / s2;
    r.grad_orig = -r.grad_aug;
    return r;
}

std::vector<int> inject_label_noise(std::vector<int> labels, double rate, int num_classes,
                                    RngStream& rng) {
    if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("rate must lie in [0,1]");
    if (num_classes < 2) throw std::invalid_argument("need at least two classes");
    const std::size_t n = labels.size();
    const auto k = static_cast<std::size_t>(rate * static_cast<double>(n));
    // partial Fisher-Yates to pick k distinct indices
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k && i < n; ++i) {
        const std::size_t j = i + rng.uniform_int(n - i);
        std::swap(idx[i], idx[j]);
    }
    for (std::size_t i = 0; i < k; ++i) {
        int& lab = labels[idx[i]];
        const int offset = 1 + static_cast<int>(rng.uniform_int(num_classes - 1));
        lab = (lab + offset) % num_classes;
    }
    return labels;
}

NllResult observation_nll(const ObservationModel& model, const Vector& logits, int y) {
    return std::visit(
        [&](const auto& m) -> NllResult {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, SoftmaxObs>) {
                return categorical_nll(logits, y);
            } else if constexpr (std::is_same_v<T, TemperedObs>) {
                return tempered_categorical_nll(logits, y, m.temperature);
            } else if constexpr (std::is_same_v<T, SmoothedObs>) {
                return smoothed_categorical_nll(logits, y, m.temperature);
            } else {
                const NdgTargets t =
                    ndg_targets(y, static_cast<int>(logits.size()), m.alpha_eps);
                return ndg_nll(logits, t);
            }
        },
        model);
}

}  // namespace bclass
