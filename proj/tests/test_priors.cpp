#include "doctest.h"

#include "bclass/energy.hpp"
#include "bclass/mlp.hpp"
#include "bclass/priors.hpp"

using namespace bclass;

namespace {

Vector fixed_theta() {
    Vector th(3);
    th << 0.4, -1.1, 2.3;
    return th;
}

}  // namespace

TEST_CASE("prior nll closed-form values") {
    const Vector zero3 = Vector::Zero(3);
    CHECK(prior_nll(PriorSpec::gaussian(1.0, 3), zero3).value ==
          doctest::Approx(1.5 * std::log(2.0 * M_PI)).epsilon(1e-12));
    CHECK(prior_nll(PriorSpec::cauchy(1.0, 3), zero3).value ==
          doctest::Approx(3.0 * std::log(M_PI)).epsilon(1e-12));

    const Vector th = fixed_theta();
    CHECK(prior_nll(PriorSpec::gaussian(0.7, 3), th).value ==
          doctest::Approx(6.978946040848776).epsilon(1e-12));
    CHECK(prior_nll(PriorSpec::laplace(1.3, 3), th).value ==
          doctest::Approx(5.789611258159232).epsilon(1e-12));
    CHECK(prior_nll(PriorSpec::student_t(5.0, 0.8, 3), th).value ==
          doctest::Approx(6.2721848162417855).epsilon(1e-12));
    CHECK(prior_nll(PriorSpec::cauchy(0.6, 3), th).value ==
          doctest::Approx(6.495471225958076).epsilon(1e-12));
}

TEST_CASE("prior gradients match finite differences for all families") {
    RngStream rng(31);
    const std::vector<PriorSpec> specs = {
        PriorSpec::gaussian(0.7, 4), PriorSpec::laplace(1.3, 4),
        PriorSpec::student_t(5.0, 0.8, 4), PriorSpec::cauchy(0.6, 4)};
    for (const PriorSpec& spec : specs) {
        for (int trial = 0; trial < 30; ++trial) {
            Vector th = normal_vector(rng, 4);
            // keep away from the Laplace kink at zero
            for (Eigen::Index i = 0; i < 4; ++i) {
                if (std::abs(th[i]) < 1e-3) th[i] = 0.1;
            }
            const NllResult r = prior_nll(spec, th);
            const Vector fd = finite_diff_grad(
                [&](const Vector& v) { return prior_nll(spec, v).value; }, th, 1e-6);
            CHECK((r.grad - fd).norm() / std::max(1.0, fd.norm()) < 1e-5);
        }
    }
}

TEST_CASE("cold rescale closed forms") {
    const PriorSpec g = cold_rescale(PriorSpec::gaussian(1.0, 2), 0.25);
    CHECK(g.variance == doctest::Approx(0.25).epsilon(1e-12));

    const PriorSpec l = cold_rescale(PriorSpec::laplace(2.0, 2), 0.5);
    CHECK(l.scale == doctest::Approx(1.0).epsilon(1e-12));

    const PriorSpec t = cold_rescale(PriorSpec::student_t(3.0, 1.0, 2), 0.5);
    CHECK(t.dof == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(t.scale * t.scale == doctest::Approx(3.0 / 7.0).epsilon(1e-12));

    // T = 1 is the identity for every supported family
    for (const PriorSpec& spec :
         {PriorSpec::gaussian(0.7, 2), PriorSpec::laplace(1.3, 2),
          PriorSpec::student_t(5.0, 0.8, 2)}) {
        const PriorSpec same = cold_rescale(spec, 1.0);
        CHECK(same.variance == doctest::Approx(spec.variance).epsilon(1e-12));
        CHECK(same.scale == doctest::Approx(spec.scale).epsilon(1e-12));
        CHECK(same.dof == doctest::Approx(spec.dof).epsilon(1e-12));
    }

    CHECK_THROWS_WITH_AS(cold_rescale(PriorSpec::cauchy(1.0, 2), 0.5),
                         "unsupported closed-form rescale", std::invalid_argument);
    CHECK_THROWS_AS(cold_rescale(PriorSpec::gaussian(1.0, 2), 1.5),
                    std::invalid_argument);
}

TEST_CASE("gaussian cold rescale matches scaled gradient exactly") {
    RngStream rng(32);
    const PriorSpec spec = PriorSpec::gaussian(0.09, 5);
    for (double t : {0.1, 0.5, 1.0}) {
        const PriorSpec cold = cold_rescale(spec, t);
        const Vector th = normal_vector(rng, 5);
        const Vector scaled = prior_nll(spec, th).grad / t;
        const Vector rescaled = prior_nll(cold, th).grad;
        CHECK((scaled - rescaled).cwiseAbs().maxCoeff() <
              1e-14 * (1.0 + rescaled.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("tempered prior normalizers") {
    // normalized density at T = 1 for every family
    for (const PriorSpec& spec :
         {PriorSpec::gaussian(0.7, 1), PriorSpec::laplace(1.3, 1),
          PriorSpec::student_t(5.0, 0.8, 1), PriorSpec::cauchy(0.6, 1)}) {
        CHECK(tempered_prior_normalizer(spec, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
    }

    // squared standard normal integrates to 1/(2 sqrt(pi))
    CHECK(tempered_prior_normalizer(PriorSpec::gaussian(1.0, 1), 0.5) ==
          doctest::Approx(1.0 / (2.0 * std::sqrt(M_PI))).epsilon(1e-8));
    // squared standard Cauchy integrates to 1/(2 pi)
    CHECK(tempered_prior_normalizer(PriorSpec::cauchy(1.0, 1), 0.5) ==
          doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-8));

    // cross-checked numeric values
    CHECK(tempered_prior_normalizer(PriorSpec::gaussian(0.7, 1), 0.3) ==
          doctest::Approx(0.09729034294293648).epsilon(1e-8));
    CHECK(tempered_prior_normalizer(PriorSpec::laplace(1.3, 1), 0.3) ==
          doctest::Approx(0.032273800452831604).epsilon(1e-8));
    CHECK(tempered_prior_normalizer(PriorSpec::student_t(5.0, 0.8, 1), 0.3) ==
          doctest::Approx(0.0868585941490172).epsilon(1e-7));

    // finite for every supported family across the temperature range
    for (double t : {0.05, 0.2, 0.6, 1.0}) {
        for (const PriorSpec& spec :
             {PriorSpec::gaussian(0.7, 1), PriorSpec::laplace(1.3, 1),
              PriorSpec::student_t(5.0, 0.8, 1), PriorSpec::cauchy(0.6, 1)}) {
            const double z = tempered_prior_normalizer(spec, t);
            CHECK(std::isfinite(z));
            CHECK(z > 0.0);
        }
    }
}

TEST_CASE("posterior energy composition") {
    Dataset data;
    data.inputs.resize(4, 2);
    data.inputs << 0.5, -0.3, -1.0, 0.7, 0.2, 0.2, -0.4, -0.9;
    data.labels = {0, 1, 0, 1};
    data.num_classes = 2;

    MlpSpec spec;
    spec.widths = {2, 4, 2};
    MlpModel model(spec);
    RngStream rng(33);
    const Vector theta = init_params(spec, rng);

    EnergyTarget target;
    target.data = &data;
    target.prior = PriorSpec::gaussian(0.09, static_cast<int>(spec.num_params()));

    // both temperature modes coincide at T = 1
    target.mode = {TemperKind::ColdPosterior, 1.0};
    const EnergyResult cold = posterior_energy(target, model, theta);
    target.mode = {TemperKind::TemperedLikelihood, 1.0};
    const EnergyResult temp = posterior_energy(target, model, theta);
    CHECK(cold.value == doctest::Approx(temp.value).epsilon(1e-12));

    // tempered-likelihood halving T doubles the likelihood term only
    const double prior_value = prior_nll(target.prior, theta).value;
    target.mode = {TemperKind::TemperedLikelihood, 0.5};
    const EnergyResult half = posterior_energy(target, model, theta);
    CHECK(half.value - prior_value ==
          doctest::Approx(2.0 * (temp.value - prior_value)).epsilon(1e-10));

    // cold mode leaves the energy untouched for any T
    target.mode = {TemperKind::ColdPosterior, 0.25};
    CHECK(posterior_energy(target, model, theta).value ==
          doctest::Approx(cold.value).epsilon(1e-12));

    // gradient agrees with finite differences
    target.mode = {TemperKind::TemperedLikelihood, 0.7};
    const EnergyResult r = posterior_energy(target, model, theta);
    const Vector fd = finite_diff_grad(
        [&](const Vector& v) { return posterior_energy(target, model, v).value; }, theta,
        1e-5);
    CHECK((r.grad - fd).norm() / std::max(1.0, fd.norm()) < 1e-5);
}

TEST_CASE("cold-vs-tempered gradient equivalence with rescaled gaussian prior") {
    Dataset data;
    data.inputs.resize(3, 2);
    data.inputs << 0.5, -0.3, -1.0, 0.7, 0.2, 0.2;
    data.labels = {0, 1, 1};
    data.num_classes = 2;

    MlpSpec spec;
    spec.widths = {2, 3, 2};
    MlpModel model(spec);
    RngStream rng(34);
    const Vector theta = init_params(spec, rng);
    const double t = 0.4;

    EnergyTarget cold;
    cold.data = &data;
    cold.prior = PriorSpec::gaussian(0.09, static_cast<int>(spec.num_params()));
    cold.mode = {TemperKind::ColdPosterior, t};

    EnergyTarget tempered = cold;
    tempered.prior = cold_rescale(cold.prior, t);
    tempered.mode = {TemperKind::TemperedLikelihood, t};

    // grad of U/T equals grad of the tempered-likelihood energy with the
    // rescaled prior; the energies differ only by a constant
    const Vector g_cold = posterior_energy(cold, model, theta).grad / t;
    const Vector g_temp = posterior_energy(tempered, model, theta).grad;
    CHECK((g_cold - g_temp).cwiseAbs().maxCoeff() < 1e-12);
}
