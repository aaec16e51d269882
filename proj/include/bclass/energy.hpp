#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bclass/observation.hpp"
#include "bclass/priors.hpp"

namespace bclass {

/// Classification dataset: one input per row of X.
struct Dataset {
    Matrix inputs;           // N x d
    std::vector<int> labels;  // length N
    int num_classes = 2;

    Eigen::Index size() const { return inputs.rows(); }
};

/// Finite set of deterministic input transforms, sampled uniformly.
struct AugmentationPolicy {
    std::vector<std::function<Vector(const Vector&)>> transforms;

    std::size_t size() const { return transforms.size(); }
    Vector apply(std::size_t j, const Vector& x) const { return transforms[j](x); }

    /// Identity plus the four two-spirals sign reflections is built in
    /// experiments; this helper gives a K=1 identity policy.
    static AugmentationPolicy identity();
};

/// Model mapping (theta, x) -> logits with exact reverse-mode gradients.
class Model {
public:
    virtual ~Model() = default;
    virtual Eigen::Index num_params() const = 0;
    virtual int num_outputs() const = 0;
    virtual Vector logits(const Vector& theta, const Vector& x) const = 0;
    /// Parameter gradient of sum over batch rows of <upstream_row, logits(x_row)>.
    virtual Vector backward(const Vector& theta, const Matrix& batch,
                            const Matrix& upstream) const = 0;
};

/// Posterior energy composition: dataset, observation model, prior,
/// temperature mode, and optional augmentation policy.
struct EnergyTarget {
    const Dataset* data = nullptr;
    ObservationModel observation = SoftmaxObs{};
    PriorSpec prior;
    TemperatureMode mode;
    const AugmentationPolicy* policy = nullptr;
    double consistency_scale = 1.0;
};

struct EnergyResult {
    double value = 0.0;
    Vector grad;
};

/// U(theta) = total NLL + prior NLL. With a policy the likelihood term is
/// the per-point mean over the K transforms (1/K-power likelihood).
/// TemperedLikelihood mode scales the likelihood term by 1/T; cold mode
/// leaves U untouched (the sampler targets exp(-U/T)).
EnergyResult posterior_energy(const EnergyTarget& target, const Model& model,
                              const Vector& theta);

}  // namespace bclass
