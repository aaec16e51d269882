#include "doctest.h"

#include "bclass/conjugate.hpp"
#include "bclass/mlp.hpp"
#include "bclass/samplers.hpp"

using namespace bclass;

namespace {

// constant-logits model: the posterior energy reduces to the prior,
// giving an analytically known sampling target
class ConstModel final : public Model {
public:
    explicit ConstModel(Eigen::Index d) : d_(d) {}
    Eigen::Index num_params() const override { return d_; }
    int num_outputs() const override { return 2; }
    Vector logits(const Vector&, const Vector&) const override {
        return Vector::Zero(2);
    }
    Vector backward(const Vector&, const Matrix&, const Matrix&) const override {
        return Vector::Zero(d_);
    }

private:
    Eigen::Index d_;
};

Dataset dummy_data() {
    Dataset d;
    d.inputs = Matrix::Zero(1, 1);
    d.labels = {0};
    d.num_classes = 2;
    return d;
}

}  // namespace

TEST_CASE("sghmc momentum decays geometrically at zero gradient and T=0") {
    SamplerConfig cfg;
    cfg.kind = SamplerKind::SGHMC;
    cfg.friction = 0.3;
    cfg.temperature = 0.0;
    const double eps = 0.1;

    SamplerState state{Vector::Zero(1), Vector::Zero(1), 0, RngStream(1)};
    state.momentum[0] = 2.0;
    for (int i = 1; i <= 5; ++i) {
        sgld_sghmc_step(state, Vector::Zero(1), cfg, eps);
        CHECK(state.momentum[0] ==
              doctest::Approx(2.0 * std::pow(1.0 - cfg.friction * eps, i)).epsilon(1e-12));
    }
    CHECK(state.step_index == 5);
}

TEST_CASE("sgld stationary variance on a quadratic matches the temperature") {
    for (double t : {1.0, 0.1}) {
        SamplerConfig cfg;
        cfg.kind = SamplerKind::SGLD;
        cfg.temperature = t;
        const double eps = 0.01;
        SamplerState state{Vector::Zero(1), Vector::Zero(1), 0, RngStream(17)};
        double sq = 0.0;
        const long steps = 100000;
        for (long i = 0; i < steps; ++i) {
            Vector grad(1);
            grad[0] = state.theta[0];  // U = theta^2 / 2
            sgld_sghmc_step(state, grad, cfg, eps);
            sq += state.theta[0] * state.theta[0];
        }
        CHECK(sq / static_cast<double>(steps) == doctest::Approx(t).epsilon(0.1));
    }
}

TEST_CASE("sgld step throws a diverged-chain error on non-finite gradients") {
    SamplerConfig cfg;
    SamplerState state{Vector::Zero(1), Vector::Zero(1), 41, RngStream(1)};
    Vector bad(1);
    bad[0] = std::numeric_limits<double>::quiet_NaN();
    try {
        sgld_sghmc_step(state, bad, cfg, 0.1);
        FAIL("expected DivergedChainError");
    } catch (const DivergedChainError& e) {
        CHECK(e.step_index == 41);
    }
}

TEST_CASE("cyclical step size follows the cosine schedule") {
    SamplerConfig cfg;
    cfg.step_size = 0.4;
    cfg.steps_per_cycle = 100;
    cfg.cyclical = true;
    CHECK(cyclical_step_size(0, cfg) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(cyclical_step_size(50, cfg) == doctest::Approx(0.2).epsilon(1e-12));
    for (long t : {3L, 27L, 99L}) {
        CHECK(cyclical_step_size(t, cfg) ==
              doctest::Approx(cyclical_step_size(t + 100, cfg)).epsilon(1e-12));
    }
    cfg.cyclical = false;
    CHECK(cyclical_step_size(77, cfg) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("full-batch stochastic gradient equals the exact energy gradient") {
    Dataset data;
    data.inputs.resize(4, 2);
    data.inputs << 0.5, -0.3, -1.0, 0.7, 0.2, 0.2, -0.4, -0.9;
    data.labels = {0, 1, 0, 1};
    data.num_classes = 2;

    MlpSpec spec;
    spec.widths = {2, 4, 2};
    MlpModel model(spec);
    RngStream rng(51);
    const Vector theta = init_params(spec, rng);

    EnergyTarget target;
    target.data = &data;
    target.prior = PriorSpec::gaussian(0.09, static_cast<int>(spec.num_params()));

    RngStream grng(52);
    const Vector sg = stochastic_gradient(target, model, theta, {0, 1, 2, 3}, grng);
    const Vector exact = posterior_energy(target, model, theta).grad;
    CHECK((sg - exact).cwiseAbs().maxCoeff() < 1e-12);

    // a K=1 identity policy is bitwise identical under equal seeds
    const AugmentationPolicy identity = AugmentationPolicy::identity();
    EnergyTarget aug = target;
    aug.policy = &identity;
    RngStream r1(53), r2(53);
    const Vector g_plain = stochastic_gradient(target, model, theta, {1, 3}, r1);
    const Vector g_ident = stochastic_gradient(aug, model, theta, {1, 3}, r2);
    CHECK((g_plain - g_ident).cwiseAbs().maxCoeff() == 0.0);

    RngStream r3(53);
    CHECK_THROWS_AS(stochastic_gradient(target, model, theta, {}, r3),
                    std::invalid_argument);
}

TEST_CASE("augmented likelihood gradient estimator") {
    Dataset data;
    data.inputs.resize(3, 2);
    data.inputs << 0.5, -0.3, -1.0, 0.7, 0.2, 0.2;
    data.labels = {0, 1, 1};
    data.num_classes = 2;

    MlpSpec spec;
    spec.widths = {2, 3, 2};
    MlpModel model(spec);
    RngStream rng(54);
    const Vector theta = init_params(spec, rng);

    AugmentationPolicy policy;
    policy.transforms.push_back([](const Vector& x) { return x; });
    policy.transforms.push_back([](const Vector& x) { return Vector(-x); });
    policy.transforms.push_back([](const Vector& x) {
        Vector o(2);
        o << x[0], -x[1];
        return o;
    });

    EnergyTarget target;
    target.data = &data;
    target.prior = PriorSpec::gaussian(0.09, static_cast<int>(spec.num_params()));
    target.policy = &policy;
    target.consistency_scale = 0.8;

    // k = K: no transform subsampling variance left
    RngStream a(1), b(99);
    const Vector full_a =
        augmented_likelihood_gradient(target, model, theta, {0, 1, 2}, 3, a);
    const Vector full_b =
        augmented_likelihood_gradient(target, model, theta, {0, 1, 2}, 3, b);
    CHECK((full_a - full_b).cwiseAbs().maxCoeff() < 1e-12);

    // k < K subsampling is unbiased for the k = K sum
    Vector mean = Vector::Zero(theta.size());
    RngStream mc(55);
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) {
        mean += augmented_likelihood_gradient(target, model, theta, {0, 1, 2}, 1, mc);
    }
    mean /= static_cast<double>(draws);
    CHECK((mean - full_a).norm() / full_a.norm() < 0.02);

    // very wide consistency density reduces to the unaugmented estimator
    EnergyTarget wide = target;
    wide.consistency_scale = 1e8;
    RngStream c(2);
    const Vector reduced =
        augmented_likelihood_gradient(wide, model, theta, {0, 1, 2}, 3, c);
    EnergyTarget plain = target;
    plain.policy = nullptr;
    RngStream d(2);
    const Vector unaug = stochastic_gradient(plain, model, theta, {0, 1, 2}, d);
    CHECK((reduced - unaug).cwiseAbs().maxCoeff() < 1e-10);

    RngStream e(3);
    CHECK_THROWS_AS(augmented_likelihood_gradient(target, model, theta, {0}, 4, e),
                    std::invalid_argument);
}

TEST_CASE("hmc samples a standard normal target") {
    const Dataset data = dummy_data();
    ConstModel model(2);
    EnergyTarget target;
    target.data = &data;
    target.prior = PriorSpec::gaussian(1.0, 2);

    SamplerConfig cfg;
    cfg.kind = SamplerKind::HMC;
    cfg.step_size = 0.3;
    cfg.leapfrog_steps = 10;
    cfg.hmc_iterations = 4000;
    cfg.burn_in = 100;
    cfg.seed = 61;
    const PosteriorSamples out = hmc_run(target, model, Vector::Zero(2), cfg);
    CHECK(out.acceptance_rate > 0.6);

    Vector mean = Vector::Zero(2);
    for (const Vector& s : out.samples) mean += s;
    mean /= static_cast<double>(out.samples.size());
    CHECK(mean.cwiseAbs().maxCoeff() < 0.05);

    // tiny steps nearly conserve the Hamiltonian: acceptance is exact
    SamplerConfig tiny = cfg;
    tiny.step_size = 1e-3;
    tiny.hmc_iterations = 200;
    tiny.burn_in = 0;
    CHECK(hmc_run(target, model, Vector::Zero(2), tiny).acceptance_rate == 1.0);

    SamplerConfig badcfg = cfg;
    badcfg.leapfrog_steps = 0;
    CHECK_THROWS_AS(hmc_run(target, model, Vector::Zero(2), badcfg),
                    std::invalid_argument);
}

TEST_CASE("run_chain thinning count and seed determinism") {
    const Dataset data = dummy_data();
    ConstModel model(2);
    EnergyTarget target;
    target.data = &data;
    target.prior = PriorSpec::gaussian(1.0, 2);

    SamplerConfig cfg;
    cfg.kind = SamplerKind::SGLD;
    cfg.step_size = 0.01;
    cfg.cycles = 1;
    cfg.steps_per_cycle = 100;
    cfg.burn_in = 20;
    cfg.thinning = 10;
    cfg.seed = 62;
    const PosteriorSamples out = run_chain(target, model, Vector::Zero(2), cfg);
    CHECK(out.samples.size() == 8);
    CHECK(out.energy_trace.size() == 100);
    CHECK_FALSE(out.diverged);

    const PosteriorSamples rerun = run_chain(target, model, Vector::Zero(2), cfg);
    REQUIRE(rerun.samples.size() == out.samples.size());
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        CHECK((rerun.samples[i] - out.samples[i]).cwiseAbs().maxCoeff() == 0.0);
    }
}

namespace {

// manual SGLD loop over an explicit linear-regression energy
struct LinregEnergy {
    Matrix x;
    Vector y;
    double noise_var;
    double prior_var;
    double lik_scale = 1.0;

    Vector grad(const Vector& theta) const {
        return lik_scale * x.transpose() * (x * theta - y) / noise_var +
               theta / prior_var;
    }
};

struct Moments {
    Vector mean;
    Matrix cov;
};

Moments sgld_moments(const LinregEnergy& energy, double temperature, std::uint64_t seed,
                     long steps) {
    SamplerConfig cfg;
    cfg.kind = SamplerKind::SGLD;
    cfg.temperature = temperature;
    const double eps = 0.002;
    SamplerState state{Vector::Zero(2), Vector::Zero(2), 0, RngStream(seed)};
    Vector sum = Vector::Zero(2);
    Matrix outer = Matrix::Zero(2, 2);
    for (long i = 0; i < steps; ++i) {
        sgld_sghmc_step(state, energy.grad(state.theta), cfg, eps);
        sum += state.theta;
        outer += state.theta * state.theta.transpose();
    }
    Moments m;
    m.mean = sum / static_cast<double>(steps);
    m.cov = outer / static_cast<double>(steps) - m.mean * m.mean.transpose();
    return m;
}

}  // namespace

TEST_CASE("sgld reproduces the conjugate linear-regression posterior") {
    RngStream rng(63);
    Matrix x(12, 2);
    Vector y(12);
    for (int i = 0; i < 12; ++i) {
        x(i, 0) = rng.normal();
        x(i, 1) = rng.normal();
        y[i] = 0.7 * x(i, 0) - 0.4 * x(i, 1) + 0.3 * rng.normal();
    }
    const double noise_var = 0.25, prior_var = 1.0;
    const GaussianPosterior exact =
        linreg_posterior(x, y, noise_var, prior_var, LinregMode::Standard);

    LinregEnergy energy{x, y, noise_var, prior_var};
    const Moments m = sgld_moments(energy, 1.0, 64, 400000);
    // loose Monte Carlo tolerances: correlated chain, 4e5 steps
    CHECK((m.mean - exact.mean).cwiseAbs().maxCoeff() < 0.02);
    CHECK((m.cov - exact.covariance).cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("cold sgld matches tempered-likelihood sgld with rescaled prior") {
    RngStream rng(65);
    Matrix x(8, 2);
    Vector y(8);
    for (int i = 0; i < 8; ++i) {
        x(i, 0) = rng.normal();
        x(i, 1) = rng.normal();
        y[i] = 0.5 * x(i, 0) + 0.2 * x(i, 1) + 0.4 * rng.normal();
    }
    const double t = 0.5, noise_var = 0.25, prior_var = 1.0;

    LinregEnergy cold{x, y, noise_var, prior_var};
    const Moments mc = sgld_moments(cold, t, 66, 400000);

    LinregEnergy tempered{x, y, noise_var, prior_var * t, 1.0 / t};
    const Moments mt = sgld_moments(tempered, 1.0, 67, 400000);

    CHECK((mc.mean - mt.mean).cwiseAbs().maxCoeff() < 0.02);
    CHECK((mc.cov - mt.cov).cwiseAbs().maxCoeff() < 0.02);
}
