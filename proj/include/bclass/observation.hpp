#pragma once

#include <variant>
#include <vector>

#include "bclass/numerics.hpp"

namespace bclass {

/// Per-datapoint NLL with its gradient in logit space.
struct NllResult {
    double value = 0.0;
    Vector grad;  // d(value)/d(logits)
};

/// Per-class Gaussian regression targets in logit space for the
/// noisy-Dirichlet-Gaussian model: sigma_c^2 = log(1/alpha_c + 1),
/// mu_c = log(alpha_c) - sigma_c^2 / 2.
struct NdgTargets {
    Vector mu;
    Vector sigma_sq;
};

enum class TemperKind { ColdPosterior, TemperedLikelihood };

struct TemperatureMode {
    TemperKind kind = TemperKind::ColdPosterior;
    double temperature = 1.0;
};

Vector softmax(const Vector& logits);

NllResult categorical_nll(const Vector& logits, int y);

/// (1/T) * categorical_nll; the unnormalized tempered softmax likelihood.
NllResult tempered_categorical_nll(const Vector& logits, int y, double temperature);

/// categorical_nll of logits/T; the normalized smoothed softmax likelihood.
NllResult smoothed_categorical_nll(const Vector& logits, int y, double temperature);

/// Targets for class y out of C with concentration alpha_eps on the
/// unobserved classes and alpha_eps + 1 on the observed one.
NdgTargets ndg_targets(int y, int num_classes, double alpha_eps);

NllResult ndg_nll(const Vector& logits, const NdgTargets& targets);

enum class DirichletKind { Standard, Tempered, Noisy };

/// Concentration vector implied by one observation of class y:
/// Standard -> 1 everywhere, 2 at y; Tempered(T) -> 1 everywhere,
/// 1 + 1/T at y; Noisy(alpha_eps) -> alpha_eps everywhere, alpha_eps + 1 at y.
Vector dirichlet_observation(DirichletKind kind, double param, int y, int num_classes);

/// Posterior mean probability of class y: alpha_y / sum(alpha).
double expected_confidence(const Vector& alpha, int y);

struct ConsistencyResult {
    double value = 0.0;
    Vector grad_aug;
    Vector grad_orig;
};

/// Isotropic Gaussian consistency term between augmented and original
/// logits. The density connecting the two is an extension point; only
/// this Gaussian form is provided.
ConsistencyResult augmentation_consistency_nll(const Vector& f_aug, const Vector& f_orig,
                                               double scale);

/// Resample exactly floor(rate * N) uniformly chosen labels to a
/// uniformly chosen different class. Deterministic under seed.
std::vector<int> inject_label_noise(std::vector<int> labels, double rate, int num_classes,
                                    RngStream& rng);

// --- observation-model selector used by energies and samplers ---

struct SoftmaxObs {};
struct TemperedObs {
    double temperature;
};
struct SmoothedObs {
    double temperature;
};
struct NdgObs {
    double alpha_eps;
};

using ObservationModel = std::variant<SoftmaxObs, TemperedObs, SmoothedObs, NdgObs>;

/// Dispatch the per-point NLL for the selected model.
NllResult observation_nll(const ObservationModel& model, const Vector& logits, int y);

}  // namespace bclass
