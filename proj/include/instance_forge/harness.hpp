#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "instance_forge/classifier.hpp"
#include "instance_forge/ea.hpp"
#include "instance_forge/run_io.hpp"

namespace instance_forge {

/// Process exit codes of the command-line front end.
enum ExitCode : int { exit_ok = 0, exit_config_error = 1, exit_runtime_error = 2 };

struct RunSpec {
    std::string name;
    nlohmann::json ea;  // EaConfig fields except "seed"
};

struct SweepSpec {
    SweepOptions options;
    std::filesystem::path output;  // relative paths resolve against the output directory
};

/// Experiment document:
/// {
///   "output_dir": "runs", "parallelism": 2, "seeds": [1, 2, 3],
///   "runs": [{"name": "...", "n": 15, "mode": "easy", "feature": "nnds_mean", ...}],
///   "sweep": {"kernel": "rbf", "C": 100, "gamma": 2, "combo_sizes": [2, 3], "output": "sweep.csv"}
/// }
struct ExperimentConfig {
    std::vector<RunSpec> runs;
    std::vector<std::uint64_t> seeds;
    std::filesystem::path output_dir = "runs";
    std::size_t parallelism = 1;
    std::optional<SweepSpec> sweep;

    /// Throws ParseError naming the line (syntax) or field (content).
    static ExperimentConfig parse(std::string_view text);
};

struct PlannedRun {
    std::string dir_name;
    EaConfig config;
};

/// Cartesian product of run specs and seeds. Every config, including its
/// oracle, is validated before anything runs.
std::vector<PlannedRun> plan_runs(const ExperimentConfig& cfg);

struct RunOutcome {
    std::filesystem::path dir;
    std::string error;  // empty on success
};

/// Runs with at most `parallelism` workers; each run writes its own directory.
std::vector<RunOutcome> execute_runs(const std::vector<PlannedRun>& plan, const std::filesystem::path& output_dir,
                                     std::size_t parallelism, std::ostream& log);

struct RangeRow {
    std::string run;
    FeatureId feature = FeatureId::angle_mean;
    std::size_t n = 0;
    Hardness mode = Hardness::hard;
    double min = 0.0;
    double max = 0.0;
    double range = 0.0;
    double median = 0.0;
};

double median_of(std::vector<double> values);

/// One row per run and measured feature, from the final population.
std::vector<RangeRow> range_report(const std::vector<PersistedRun>& runs);
std::string format_range_csv(const std::vector<RangeRow>& rows);
/// Per-instance values of all features, for box plots.
std::string format_raw_values_csv(const std::vector<PersistedRun>& runs);

/// Splits persisted runs into easy and hard populations by their mode.
std::pair<Population, Population> split_by_mode(const std::vector<PersistedRun>& runs);

// Subcommands. Each returns a process exit code and never throws.
int cmd_evolve(const std::filesystem::path& config_path, std::optional<std::size_t> parallelism,
               std::ostream& out, std::ostream& err);
int cmd_features(const std::vector<std::filesystem::path>& paths, std::ostream& out, std::ostream& err);
int cmd_solve(const std::filesystem::path& path, std::size_t restarts, const std::string& oracle_spec,
              std::uint64_t seed, std::ostream& out, std::ostream& err);
int cmd_report_ranges(const std::vector<std::filesystem::path>& dirs, const std::optional<std::filesystem::path>& raw,
                      std::ostream& out, std::ostream& err);
int cmd_classify(const std::vector<std::filesystem::path>& dirs, const SweepOptions& options, std::ostream& out,
                 std::ostream& err);

/// "auto" picks the exact solver when it can serve n, otherwise the command in
/// INSTANCE_FORGE_ORACLE_CMD when set; anything else goes to OptOracle::parse_spec.
OptOracle resolve_oracle(const std::string& spec, std::size_t n);

}  // namespace instance_forge
