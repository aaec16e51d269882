#include "bclass/energy.hpp"

namespace bclass {

AugmentationPolicy AugmentationPolicy::identity() {
    AugmentationPolicy p;
    p.transforms.push_back([](const Vector& x) { return x; });
    return p;
}

EnergyResult posterior_energy(const EnergyTarget& target, const Model& model,
                              const Vector& theta) {
    if (target.data == nullptr || target.data->size() == 0) {
        throw std::invalid_argument("posterior_energy: empty dataset");
    }
    if (!(target.mode.temperature > 0.0)) {
        throw std::invalid_argument("posterior_energy: temperature must be positive");
    }
    const Dataset& data = *target.data;
    const auto n = data.size();
    const std::size_t k = target.policy ? target.policy->size() : 1;
    const auto rows = n * static_cast<Eigen::Index>(k);

    Matrix batch(rows, data.inputs.cols());
    Matrix upstream(rows, model.num_outputs());
    double nll = 0.0;
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j, ++row) {
            const Vector x = target.policy ? target.policy->apply(j, data.inputs.row(i))
                                           : Vector(data.inputs.row(i));
            const Vector z = model.logits(theta, x);
            const NllResult r = observation_nll(target.observation, z, data.labels[i]);
            nll += r.value / static_cast<double>(k);
            batch.row(row) = x;
            upstream.row(row) = r.grad / static_cast<double>(k);
        }
    }

    double lik_scale = 1.0;
    if (target.mode.kind == TemperKind::TemperedLikelihood) {
        lik_scale = 1.0 / target.mode.temperature;
    }

    const NllResult p = prior_nll(target.prior, theta);
    EnergyResult out;
    out.value = lik_scale * nll + p.value;
    out.grad = lik_scale * model.backward(theta, batch, upstream) + p.grad;
    return out;
}

}  // namespace bclass
