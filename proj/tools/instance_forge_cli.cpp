#include <iostream>

#include <CLI11.hpp>

#include "instance_forge/harness.hpp"

namespace fs = std::filesystem;
using namespace instance_forge;

int main(int argc, char** argv) {
    CLI::App app{"Evolve diverse easy/hard Euclidean TSP instances for 2-OPT and analyse their features."};
    app.require_subcommand(1);

    auto* evolve = app.add_subcommand("evolve", "Run every (run spec x seed) of an experiment config");
    fs::path config_path;
    std::size_t parallelism = 0;
    evolve->add_option("config", config_path, "Experiment config (JSON)")->required();
    evolve->add_option("--parallelism,-j", parallelism, "Override the config's worker limit");

    auto* features = app.add_subcommand("features", "Print the seven features of instance files as CSV");
    std::vector<fs::path> feature_paths;
    features->add_option("instances", feature_paths, "Native JSON or TSPLIB EUC_2D files");

    auto* solve = app.add_subcommand("solve", "Report 2-OPT quality, optimum and approximation ratio");
    fs::path solve_path;
    std::size_t restarts = default_restarts;
    std::string oracle = "auto";
    std::uint64_t seed = 0;
    solve->add_option("instance", solve_path, "Instance file")->required();
    solve->add_option("--restarts", restarts, "2-OPT restarts averaged into A(I)")->capture_default_str();
    solve->add_option("--oracle", oracle, "auto | exact[:N] | cmd:<template> | cached:<path>")->capture_default_str();
    solve->add_option("--seed", seed, "Seed for the random start tours")->capture_default_str();

    auto* report = app.add_subcommand("report-ranges", "Min/max/range/median of measured features per run");
    std::vector<fs::path> report_dirs;
    fs::path raw_path;
    report->add_option("runs", report_dirs, "Run directories")->required();
    report->add_option("--raw", raw_path, "Also write per-instance feature values to this CSV");

    auto* classify = app.add_subcommand("classify", "SVM accuracy over 2- and 3-feature combinations");
    std::vector<fs::path> classify_dirs;
    std::string kernel = "rbf";
    double c_value = 0.0;
    double gamma = 2.0;
    std::string combo = "both";
    bool pooled = false;
    double holdout = 0.0;
    std::uint64_t classify_seed = 0;
    classify->add_option("runs", classify_dirs, "Run directories of both modes")->required();
    classify->add_option("--kernel", kernel, "rbf | linear")->check(CLI::IsMember({"rbf", "linear"}))->capture_default_str();
    classify->add_option("--C", c_value, "Soft-margin cost (default 100 for rbf, 1 for linear)");
    classify->add_option("--gamma", gamma, "RBF width")->capture_default_str();
    classify->add_option("--combo-size", combo, "2 | 3 | both")->check(CLI::IsMember({"2", "3", "both"}))->capture_default_str();
    classify->add_flag("--pooled", pooled, "Train across all instance sizes together");
    classify->add_option("--holdout", holdout, "Score on a held-out fraction instead of the training set");
    classify->add_option("--seed", classify_seed, "Seed for the holdout split");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config_error;
    }

    if (evolve->parsed()) {
        return cmd_evolve(config_path, parallelism > 0 ? std::optional(parallelism) : std::nullopt, std::cout,
                          std::cerr);
    }
    if (features->parsed()) {
        return cmd_features(feature_paths, std::cout, std::cerr);
    }
    if (solve->parsed()) {
        return cmd_solve(solve_path, restarts, oracle, seed, std::cout, std::cerr);
    }
    if (report->parsed()) {
        return cmd_report_ranges(report_dirs, raw_path.empty() ? std::nullopt : std::optional(raw_path), std::cout,
                                 std::cerr);
    }
    SweepOptions options;
    options.kernel = kernel == "rbf" ? KernelSpec::rbf(gamma) : KernelSpec::linear();
    options.C = c_value > 0.0 ? c_value : (kernel == "rbf" ? 100.0 : 1.0);
    options.combo_sizes = combo == "both" ? std::vector<std::size_t>{2, 3}
                                          : std::vector<std::size_t>{static_cast<std::size_t>(std::stoul(combo))};
    options.pooled = pooled;
    options.holdout_fraction = holdout;
    options.seed = classify_seed;
    return cmd_classify(classify_dirs, options, std::cout, std::cerr);
}
