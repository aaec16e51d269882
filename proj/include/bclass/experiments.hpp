#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bclass/conjugate.hpp"
#include "bclass/mlp.hpp"
#include "bclass/samplers.hpp"

namespace bclass {

struct SpiralsConfig {
    int n_samples = 200;
    double noise = 0.6;
    std::uint64_t random_state = 920;
    double flip_radius = 13.0;
    bool quadrant_mask = true;
    bool augment = false;  // append the four sign-reflection copies
};

/// Two-spirals generator restricted (optionally) to the x1<0, x2<0
/// quadrant, with labels flipped beyond `flip_radius`. Reproduces the
/// generative process distributionally from a single seeded stream.
Dataset gen_two_spirals(const SpiralsConfig& config);

/// K=4 policy: identity-free reflection set {x, -x, (x1,-x2), (-x1,x2)}.
/// The untransformed point is the first entry.
AugmentationPolicy spirals_reflections();

/// Monte Carlo BMA: mean over samples of softmax(logits).
Vector bma_predict(const std::vector<Vector>& samples, const Model& model, const Vector& x);

struct MetricsReport {
    double bma_accuracy = 0.0;
    double bma_nll = 0.0;
    Eigen::Index n = 0;
};

MetricsReport evaluate(const std::vector<Vector>& samples, const Model& model,
                       const Dataset& data);

/// Flat key/value config with [section] headers; keys stored as
/// "section.key". Unknown keys are preserved; parse errors carry the line.
class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const std::string& path);
    static KeyValueConfig parse_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    void set(const std::string& key, const std::string& value);

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

struct ExperimentOutcome {
    MetricsReport train;
    MetricsReport test;
    double acceptance_rate = 0.0;
    bool diverged = false;
};

struct RunOptions {
    std::optional<std::uint64_t> seed_override;
    bool faithful = false;  // original HMC budget: step 3e-6, 150k leapfrog steps
    bool quiet = true;
};

/// Run the configured pipeline and write metrics.json plus a
/// decision-surface CSV into `out_dir`. Fully seed-deterministic.
ExperimentOutcome run_experiment(const KeyValueConfig& config, const std::string& out_dir,
                                 const RunOptions& options = {});

/// Grid sweep over one axis (temperature, alpha_eps, or label_noise);
/// writes one CSV row per value: (value, train_nll, test_nll, train_acc, test_acc).
void run_sweep(const KeyValueConfig& config, const std::string& out_dir,
               const RunOptions& options = {});

/// Fig-2-style coinflip CDF table: column theta plus one CDF column per family.
void cdf_report(const std::vector<std::pair<CoinflipKind, double>>& families,
                int resolution, const std::string& path);

/// Dataset CSV (x1, x2, label) with a generation note in the header.
void write_spirals_csv(const Dataset& data, const SpiralsConfig& config,
                       const std::string& path);

/// Closed-form oracle report: linear-regression posteriors for the three
/// modes and a 1-D GP predictive curve.
void conjugate_report(std::uint64_t seed, const std::string& out_dir);

/// Fig-3-style table: GP augmentation posterior for K in {1,4,10}.
void gp_aug_report(const std::string& path);

/// Quick property suite; returns the number of failures.
int selfcheck(bool quiet);

}  // namespace bclass
