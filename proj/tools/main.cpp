#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bclass/experiments.hpp"

namespace {

using namespace bclass;

KeyValueConfig load_config(const std::string& path) {
    if (path.empty()) return KeyValueConfig::parse_string("");
    return KeyValueConfig::parse_file(path);
}

RunOptions make_options(const std::optional<std::uint64_t>& seed, bool faithful, bool quiet) {
    RunOptions o;
    o.seed_override = seed;
    o.faithful = faithful;
    o.quiet = quiet;
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tempered Bayesian classification toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    bool faithful = false;
    bool quiet = false;
    app.add_option("--config", config_path, "key = value config file")->capture_default_str();
    app.add_option("--out", out, "output directory or file")->capture_default_str();
    app.add_option("--seed", seed, "override the experiment seed");
    app.add_flag("--faithful", faithful, "use the long-run HMC budget");
    app.add_flag("--quiet", quiet, "suppress progress output");

    auto* cmd_spirals = app.add_subcommand("spirals", "write a two-spirals dataset CSV")->fallthrough();
    auto* cmd_sample = app.add_subcommand("sample", "run one posterior-sampling experiment")->fallthrough();
    auto* cmd_sweep = app.add_subcommand("sweep", "sweep one axis of the experiment config")->fallthrough();
    auto* cmd_conjugate =
        app.add_subcommand("conjugate", "closed-form linear-regression and GP report")->fallthrough();
    auto* cmd_gp_aug = app.add_subcommand("gp-aug", "GP augmentation posterior table")->fallthrough();
    auto* cmd_cdf = app.add_subcommand("cdf", "coinflip posterior CDF table")->fallthrough();
    auto* cmd_check = app.add_subcommand("check", "run the built-in property checks")->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        const KeyValueConfig cfg = load_config(config_path);
        const RunOptions options = make_options(seed, faithful, quiet);

        if (cmd_spirals->parsed()) {
            SpiralsConfig sc;
            sc.n_samples = static_cast<int>(cfg.get_long("dataset.n_samples", 200));
            sc.noise = cfg.get_double("dataset.noise", 0.6);
            sc.random_state = seed ? *seed
                                   : static_cast<std::uint64_t>(
                                         cfg.get_long("dataset.random_state", 920));
            sc.flip_radius = cfg.get_double("dataset.flip_radius", 13.0);
            sc.quadrant_mask = cfg.get_bool("dataset.quadrant_mask", true);
            sc.augment = cfg.get_bool("dataset.augment", false);
            std::filesystem::create_directories(out);
            write_spirals_csv(gen_two_spirals(sc), sc, out + "/spirals.csv");
        } else if (cmd_sample->parsed()) {
            run_experiment(cfg, out, options);
        } else if (cmd_sweep->parsed()) {
            run_sweep(cfg, out, options);
        } else if (cmd_conjugate->parsed()) {
            conjugate_report(seed.value_or(2024), out);
        } else if (cmd_gp_aug->parsed()) {
            std::filesystem::create_directories(out);
            gp_aug_report(out + "/gp_aug.csv");
        } else if (cmd_cdf->parsed()) {
            const double t = cfg.get_double("cdf.temperature", 0.2);
            const double alpha_eps = cfg.get_double("cdf.alpha_eps", 1e-2);
            const int resolution = static_cast<int>(cfg.get_long("cdf.resolution", 1000));
            std::filesystem::create_directories(out);
            cdf_report({{CoinflipKind::Standard, 0.0},
                        {CoinflipKind::Tempered, t},
                        {CoinflipKind::Smoothed, t},
                        {CoinflipKind::NoisyDirichlet, alpha_eps}},
                       resolution, out + "/cdf.csv");
        } else if (cmd_check->parsed()) {
            return selfcheck(quiet) == 0 ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
