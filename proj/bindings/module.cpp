#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bclass/experiments.hpp"

namespace py = pybind11;
using namespace bclass;

PYBIND11_MODULE(_bclass, m) {
    m.doc() = "Tempered Bayesian classification core";

    // observation models
    m.def("softmax", &softmax, py::arg("logits"));
    m.def(
        "categorical_nll",
        [](const Vector& logits, int y) {
            const NllResult r = categorical_nll(logits, y);
            return py::make_tuple(r.value, r.grad);
        },
        py::arg("logits"), py::arg("y"));
    m.def(
        "tempered_categorical_nll",
        [](const Vector& logits, int y, double t) {
            const NllResult r = tempered_categorical_nll(logits, y, t);
            return py::make_tuple(r.value, r.grad);
        },
        py::arg("logits"), py::arg("y"), py::arg("temperature"));
    m.def(
        "smoothed_categorical_nll",
        [](const Vector& logits, int y, double t) {
            const NllResult r = smoothed_categorical_nll(logits, y, t);
            return py::make_tuple(r.value, r.grad);
        },
        py::arg("logits"), py::arg("y"), py::arg("temperature"));
    m.def(
        "ndg_targets",
        [](int y, int num_classes, double alpha_eps) {
            const NdgTargets t = ndg_targets(y, num_classes, alpha_eps);
            return py::make_tuple(t.mu, t.sigma_sq);
        },
        py::arg("y"), py::arg("num_classes"), py::arg("alpha_eps"));

    py::enum_<DirichletKind>(m, "DirichletKind")
        .value("Standard", DirichletKind::Standard)
        .value("Tempered", DirichletKind::Tempered)
        .value("Noisy", DirichletKind::Noisy);
    m.def("dirichlet_observation", &dirichlet_observation, py::arg("kind"), py::arg("param"),
          py::arg("y"), py::arg("num_classes"));
    m.def("expected_confidence", &expected_confidence, py::arg("alpha"), py::arg("y"));

    // conjugate oracles
    py::enum_<LinregMode>(m, "LinregMode")
        .value("Standard", LinregMode::Standard)
        .value("Tempered", LinregMode::Tempered)
        .value("Cold", LinregMode::Cold);
    py::class_<GaussianPosterior>(m, "GaussianPosterior")
        .def_readonly("mean", &GaussianPosterior::mean)
        .def_readonly("covariance", &GaussianPosterior::covariance);
    m.def("linreg_posterior", &linreg_posterior, py::arg("x"), py::arg("y"),
          py::arg("noise_var"), py::arg("prior_var"), py::arg("mode"),
          py::arg("temperature") = 1.0);

    py::class_<KernelConfig>(m, "KernelConfig")
        .def(py::init<>())
        .def_readwrite("lengthscale", &KernelConfig::lengthscale)
        .def_readwrite("signal_var", &KernelConfig::signal_var)
        .def_readwrite("jitter", &KernelConfig::jitter);
    m.def("gp_posterior", &gp_posterior, py::arg("x"), py::arg("y"), py::arg("kernel"),
          py::arg("noise_var"), py::arg("x_star"));
    m.def("gp_augmentation_posterior", &gp_augmentation_posterior, py::arg("x"), py::arg("y"),
          py::arg("k_aug"), py::arg("shift"), py::arg("kernel"), py::arg("noise_var"));
    m.def("gp_augmentation_posterior_block", &gp_augmentation_posterior_block, py::arg("x"),
          py::arg("y"), py::arg("k_aug"), py::arg("shift"), py::arg("kernel"),
          py::arg("noise_var"));

    py::enum_<CoinflipKind>(m, "CoinflipKind")
        .value("Standard", CoinflipKind::Standard)
        .value("Tempered", CoinflipKind::Tempered)
        .value("Smoothed", CoinflipKind::Smoothed)
        .value("NoisyDirichlet", CoinflipKind::NoisyDirichlet);
    m.def(
        "coinflip_cdf",
        [](CoinflipKind kind, double param, int resolution) {
            const ConfidenceCdf c = coinflip_cdf(kind, param, resolution);
            return py::make_tuple(c.grid, c.cdf);
        },
        py::arg("kind"), py::arg("param"), py::arg("resolution"));

    // priors
    py::class_<PriorSpec>(m, "PriorSpec")
        .def_static("gaussian", &PriorSpec::gaussian, py::arg("variance"), py::arg("dimension"))
        .def_static("laplace", &PriorSpec::laplace, py::arg("scale"), py::arg("dimension"))
        .def_static("student_t", &PriorSpec::student_t, py::arg("dof"), py::arg("scale"),
                    py::arg("dimension"))
        .def_static("cauchy", &PriorSpec::cauchy, py::arg("scale"), py::arg("dimension"));
    m.def("tempered_prior_normalizer", &tempered_prior_normalizer, py::arg("spec"),
          py::arg("temperature"));
    m.def(
        "cold_rescale",
        [](const PriorSpec& spec, double t) { return cold_rescale(spec, t); },
        py::arg("spec"), py::arg("temperature"));
    m.def(
        "prior_nll",
        [](const PriorSpec& spec, const Vector& theta) {
            const NllResult r = prior_nll(spec, theta);
            return py::make_tuple(r.value, r.grad);
        },
        py::arg("spec"), py::arg("theta"));

    // datasets and experiments
    py::class_<SpiralsConfig>(m, "SpiralsConfig")
        .def(py::init<>())
        .def_readwrite("n_samples", &SpiralsConfig::n_samples)
        .def_readwrite("noise", &SpiralsConfig::noise)
        .def_readwrite("random_state", &SpiralsConfig::random_state)
        .def_readwrite("flip_radius", &SpiralsConfig::flip_radius)
        .def_readwrite("quadrant_mask", &SpiralsConfig::quadrant_mask)
        .def_readwrite("augment", &SpiralsConfig::augment);
    m.def(
        "gen_two_spirals",
        [](const SpiralsConfig& config) {
            const Dataset d = gen_two_spirals(config);
            return py::make_tuple(d.inputs, d.labels);
        },
        py::arg("config"));
    m.def(
        "run_experiment",
        [](const std::string& config_text, const std::string& out_dir, bool quiet) {
            const KeyValueConfig cfg = KeyValueConfig::parse_string(config_text);
            RunOptions options;
            options.quiet = quiet;
            const ExperimentOutcome o = run_experiment(cfg, out_dir, options);
            py::dict result;
            result["train_accuracy"] = o.train.bma_accuracy;
            result["train_nll"] = o.train.bma_nll;
            result["test_accuracy"] = o.test.bma_accuracy;
            result["test_nll"] = o.test.bma_nll;
            result["acceptance_rate"] = o.acceptance_rate;
            result["diverged"] = o.diverged;
            return result;
        },
        py::arg("config_text"), py::arg("out_dir") = "", py::arg("quiet") = true);
    m.def("selfcheck", &selfcheck, py::arg("quiet") = true);
}
