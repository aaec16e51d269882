#include "bclass/samplers.hpp"

#include <cmath>
#include <numeric>

namespace bclass {

namespace {

double likelihood_scale(const EnergyTarget& target) {
    if (!(target.mode.temperature > 0.0)) {
        throw std::invalid_argument("temperature must be positive");
    }
    return target.mode.kind == TemperKind::TemperedLikelihood
               ? 1.0 / target.mode.temperature
               : 1.0;
}

struct GradAndEnergy {
    double energy = 0.0;
    Vector grad;
};

GradAndEnergy stochastic_gradient_impl(const EnergyTarget& target, const Model& model,
                                       const Vector& theta,
                                       const std::vector<int>& minibatch, RngStream& rng) {
    if (minibatch.empty()) throw std::invalid_argument("empty minibatch");
    const Dataset& data = *target.data;
    const std::size_t k = target.policy ? target.policy->size() : 1;
    const double scale = static_cast<double>(data.size()) /
                         static_cast<double>(minibatch.size());
    const double lik = likelihood_scale(target);

    Matrix batch(minibatch.size(), data.inputs.cols());
    Matrix upstream(minibatch.size(), model.num_outputs());
    double nll = 0.0;
    for (std::size_t r = 0; r < minibatch.size(); ++r) {
        const int i = minibatch[r];
        Vector x = data.inputs.row(i);
        if (target.policy && k > 1) {
            x = target.policy->apply(rng.uniform_int(k), x);
        } else if (target.policy) {
            x = target.policy->apply(0, x);
        }
        const Vector z = model.logits(theta, x);
        const NllResult res = observation_nll(target.observation, z, data.labels[i]);
        nll += res.value;
        batch.row(r) = x;
        upstream.row(r) = res.grad;
    }

    const NllResult prior = prior_nll(target.prior, theta);
    GradAndEnergy out;
    out.energy = lik * scale * nll + prior.value;
    out.grad = lik * scale * model.backward(theta, batch, upstream) + prior.grad;
    return out;
}

}  // namespace

Vector stochastic_gradient(const EnergyTarget& target, const Model& model,
                           const Vector& theta, const std::vector<int>& minibatch,
                           RngStream& rng) {
    return stochastic_gradient_impl(target, model, theta, minibatch, rng).grad;
}

Vector augmented_likelihood_gradient(const EnergyTarget& target, const Model& model,
                                     const Vector& theta, const std::vector<int>& minibatch,
                                     int k, RngStream& rng) {
    if (minibatch.empty()) throw std::invalid_argument("empty minibatch");
    if (target.policy == nullptr) {
        throw std::invalid_argument("augmented_likelihood_gradient: no policy");
    }
    const auto big_k = static_cast<int>(target.policy->size());
    if (k < 1 || k > big_k) throw std::invalid_argument("k must lie in [1, K]");
    const Dataset& data = *target.data;
    const double scale = static_cast<double>(data.size()) /
                         static_cast<double>(minibatch.size());
    const double lik = likelihood_scale(target);

    // uniform k-subset of the K transforms (partial Fisher-Yates)
    std::vector<int> transform_ids(big_k);
    std::iota(transform_ids.begin(), transform_ids.end(), 0);
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng.uniform_int(big_k - i));
        std::swap(transform_ids[i], transform_ids[j]);
    }

    const auto m = static_cast<Eigen::Index>(minibatch.size());
    const Eigen::Index rows = m * (1 + k);
    Matrix batch(rows, data.inputs.cols());
    Matrix upstream = Matrix::Zero(rows, model.num_outputs());
    const double subset_weight = static_cast<double>(big_k) / static_cast<double>(k);

    for (Eigen::Index r = 0; r < m; ++r) {
        const int i = minibatch[static_cast<std::size_t>(r)];
        const Vector x = data.inputs.row(i);
        const Vector z = model.logits(theta, x);
        const NllResult obs = observation_nll(target.observation, z, data.labels[i]);
        batch.row(r) = x;
        upstream.row(r) = obs.grad;
        for (int t = 0; t < k; ++t) {
            const Eigen::Index row = m + r * k + t;
            const Vector xa = target.policy->apply(transform_ids[t], x);
            const Vector za = model.logits(theta, xa);
            const ConsistencyResult c =
                augmentation_consistency_nll(za, z, target.consistency_scale);
            batch.row(row) = xa;
            upstream.row(row) = subset_weight * c.grad_aug;
            upstream.row(r) += subset_weight * c.grad_orig;
        }
    }

    const NllResult prior = prior_nll(target.prior, theta);
    return lik * scale * model.backward(theta, batch, upstream) + prior.grad;
}

void sgld_sghmc_step(SamplerState& state, const Vector& grad, const SamplerConfig& config,
                     double eps) {
    if (!grad.allFinite()) throw DivergedChainError(state.step_index);
    const double t = config.temperature;
    if (config.kind == SamplerKind::SGHMC && config.friction > 0.0) {
        const double gamma = config.friction;
        state.momentum -= eps * grad + gamma * eps * state.momentum;
        if (t > 0.0) {
            state.momentum +=
                std::sqrt(2.0 * gamma * t * eps) * normal_vector(state.rng, grad.size());
        }
        state.theta += eps * state.momentum;
    } else {
        // overdamped Langevin update
        state.theta -= eps * grad;
        if (t > 0.0) {
            state.theta += std::sqrt(2.0 * eps * t) * normal_vector(state.rng, grad.size());
        }
    }
    ++state.step_index;
}

double cyclical_step_size(long step_index, const SamplerConfig& config) {
    if (config.steps_per_cycle < 1) {
        throw std::invalid_argument("steps_per_cycle must be >= 1");
    }
    if (!config.cyclical) return config.step_size;
    const long s = config.steps_per_cycle;
    const double phase = static_cast<double>(step_index % s) / static_cast<double>(s);
    return 0.5 * config.step_size * (std::cos(M_PI * phase) + 1.0);
}

PosteriorSamples hmc_run(const EnergyTarget& target, const Model& model, Vector init,
                         const SamplerConfig& config) {
    if (config.leapfrog_steps < 1) {
        throw std::invalid_argument("leapfrog_steps must be >= 1");
    }
    const double t = config.temperature;
    if (!(t > 0.0)) throw std::invalid_argument("temperature must be positive");

    RngStream rng(config.seed);
    PosteriorSamples out;
    Vector theta = std::move(init);
    EnergyResult cur = posterior_energy(target, model, theta);
    long accepted = 0;
    for (int it = 0; it < config.hmc_iterations; ++it) {
        const Vector p0 = normal_vector(rng, theta.size());
        Vector p = p0;
        Vector q = theta;
        EnergyResult e = cur;
        // leapfrog on H = U/T + |p|^2/2
        p -= 0.5 * config.step_size * e.grad / t;
        for (int s = 0; s < config.leapfrog_steps; ++s) {
            q += config.step_size * p;
            e = posterior_energy(target, model, q);
            if (s + 1 < config.leapfrog_steps) p -= config.step_size * e.grad / t;
        }
        p -= 0.5 * config.step_size * e.grad / t;
        const double h0 = cur.value / t + 0.5 * p0.squaredNorm();
        const double h1 = e.value / t + 0.5 * p.squaredNorm();
        const double log_accept = h0 - h1;
        if (std::isfinite(h1) && std::log(std::max(rng.uniform(), 1e-300)) < log_accept) {
            theta = q;
            cur = e;
            ++accepted;
        }
        out.energy_trace.push_back(cur.value);
        out.step_size_trace.push_back(config.step_size);
        if (it >= config.burn_in && (it - config.burn_in) % config.thinning == 0) {
            out.samples.push_back(theta);
        }
    }
    out.acceptance_rate =
        static_cast<double>(accepted) / std::max(1, config.hmc_iterations);
    out.low_acceptance_warning = out.acceptance_rate < 0.01;
    return out;
}

PosteriorSamples run_chain(const EnergyTarget& target, const Model& model, Vector init,
                           const SamplerConfig& config) {
    if (config.kind == SamplerKind::HMC) return hmc_run(target, model, std::move(init), config);

    const Dataset& data = *target.data;
    const auto n = static_cast<int>(data.size());
    const int m = config.minibatch_size > 0 ? std::min(config.minibatch_size, n) : n;

    RngStream base(config.seed);
    SamplerState state{std::move(init), Vector::Zero(0), 0, base.substream(0)};
    state.momentum = Vector::Zero(state.theta.size());
    RngStream data_rng = base.substream(1);

    PosteriorSamples out;
    const long total = static_cast<long>(config.cycles) * config.steps_per_cycle;
    std::vector<int> indices(n);
    std::iota(indices.begin(), indices.end(), 0);
    std::vector<int> minibatch(m);
    try {
        for (long step = 0; step < total; ++step) {
            if (m == n) {
                minibatch.assign(indices.begin(), indices.end());
            } else {
                for (int i = 0; i < m; ++i) {
                    const int j = i + static_cast<int>(data_rng.uniform_int(n - i));
                    std::swap(indices[i], indices[j]);
                    minibatch[i] = indices[i];
                }
            }
            const GradAndEnergy ge =
                stochastic_gradient_impl(target, model, state.theta, minibatch, data_rng);
            const double eps = cyclical_step_size(step, config);
            sgld_sghmc_step(state, ge.grad, config, eps);
            out.energy_trace.push_back(ge.energy);
            out.step_size_trace.push_back(eps);
            if (step >= config.burn_in && (step - config.burn_in) % config.thinning == 0) {
                out.samples.push_back(state.theta);
            }
        }
    } catch (const DivergedChainError& e) {
        out.diverged = true;
        out.diverged_at = e.step_index;
    }
    return out;
}

}  // namespace bclass
