#pragma once

#include <vector>

#include "bclass/energy.hpp"

namespace bclass {

enum class SamplerKind { SGLD, SGHMC, HMC };

struct SamplerConfig {
    SamplerKind kind = SamplerKind::SGLD;
    double step_size = 1e-3;
    double friction = 0.0;       // gamma; 0 selects the overdamped SGLD update
    double temperature = 1.0;    // cold-posterior T, target exp(-U/T)
    int minibatch_size = 0;      // 0 = full batch
    int cycles = 1;
    int steps_per_cycle = 1000;
    bool cyclical = false;       // cosine step-size schedule over each cycle
    int burn_in = 0;             // discarded leading retained draws (HMC: iterations)
    int thinning = 1;
    int leapfrog_steps = 50;     // HMC
    int hmc_iterations = 100;    // HMC
    std::uint64_t seed = 0;
};

struct SamplerState {
    Vector theta;
    Vector momentum;
    long step_index = 0;
    RngStream rng;
};

struct PosteriorSamples {
    std::vector<Vector> samples;
    double acceptance_rate = 0.0;  // HMC only
    std::vector<double> energy_trace;
    std::vector<double> step_size_trace;
    bool diverged = false;
    long diverged_at = -1;
    bool low_acceptance_warning = false;
};

struct DivergedChainError : std::runtime_error {
    explicit DivergedChainError(long step)
        : std::runtime_error("chain diverged at step " + std::to_string(step)),
          step_index(step) {}
    long step_index;
};

/// Minibatch stochastic gradient of the posterior energy: (N/m) times the
/// per-point NLL gradient at a freshly drawn transform per point, plus the
/// full prior gradient.
Vector stochastic_gradient(const EnergyTarget& target, const Model& model,
                           const Vector& theta, const std::vector<int>& minibatch,
                           RngStream& rng);

/// Augmentation-likelihood estimator: observation term on the original
/// inputs plus (K/k)-weighted consistency terms over k sampled transforms.
Vector augmented_likelihood_gradient(const EnergyTarget& target, const Model& model,
                                     const Vector& theta, const std::vector<int>& minibatch,
                                     int k, RngStream& rng);

/// One SGLD/SGHMC update with mass = I and step size `eps`.
void sgld_sghmc_step(SamplerState& state, const Vector& grad, const SamplerConfig& config,
                     double eps);

/// Cosine schedule: eps_t = (eps0/2) (cos(pi (t mod S)/S) + 1).
double cyclical_step_size(long step_index, const SamplerConfig& config);

/// Full-batch leapfrog HMC with Metropolis correction on exp(-U/T).
PosteriorSamples hmc_run(const EnergyTarget& target, const Model& model, Vector init,
                         const SamplerConfig& config);

/// Orchestrates burn-in, cycles, and thinning; dispatches on config.kind.
PosteriorSamples run_chain(const EnergyTarget& target, const Model& model, Vector init,
                           const SamplerConfig& config);

}  // namespace bclass
