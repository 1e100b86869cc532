#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "instance_forge/diversity.hpp"
#include "instance_forge/oracle.hpp"

namespace instance_forge {

enum class Hardness { easy, hard };

std::string_view hardness_name(Hardness h) noexcept;
Hardness parse_hardness(std::string_view name);

/// Absolute slack when testing a ratio against its threshold.
inline constexpr double threshold_tolerance = 1e-9;

/// hard: alpha >= threshold; easy: alpha <= threshold.
bool satisfies_threshold(Hardness mode, double alpha, double threshold) noexcept;

/// Thresholds used for the published experiments at n = 25, 50, 100.
/// Throws ValidationError for other sizes.
double published_alpha_threshold(std::size_t n, Hardness mode);

struct MutationParams {
    double sigma_small = 0.025;
    double sigma_large = 0.05;
    double p_small = 0.9;
    /// Cities moved per offspring; 1 is the standard operator.
    std::size_t cities_per_mutation = 1;
};

struct EaConfig {
    std::size_t n = 25;
    std::size_t mu = 30;
    std::size_t lambda = 5;
    Hardness mode = Hardness::hard;
    double alpha_threshold = 1.15;
    std::size_t generations = 10000;
    WeightSpec measure = WeightSpec::single(FeatureId::angle_mean);
    MutationParams mutation;
    std::size_t restarts = default_restarts;
    std::size_t bootstrap_budget = 50000;
    OptOracle oracle = OptOracle::exact();
    std::uint64_t seed = 0;

    /// mu = 30, lambda = 5, sigma 0.025 / 0.05 with probability 0.9 / 0.1,
    /// 10,000 generations and the published threshold for (n, mode).
    static EaConfig published(std::size_t n, Hardness mode, WeightSpec measure, OptOracle oracle);

    /// Throws ValidationError on inconsistent settings.
    void validate() const;

    nlohmann::json to_json() const;
    static EaConfig from_json(const nlohmann::json& doc);
};

struct MutationOutcome {
    TspInstance child;
    double sigma = 0.0;
    std::vector<std::size_t> cities;
};

/// Moves one uniformly chosen city by independent N(0, sigma^2) offsets on each
/// axis; an axis whose proposal leaves [0,1] keeps the parent's coordinate.
MutationOutcome mutate_detailed(const TspInstance& parent, const MutationParams& params, RandomSource& rng);
TspInstance mutate(const TspInstance& parent, const MutationParams& params, RandomSource& rng);

/// Features and approximation ratio; the 2-OPT restarts draw from `seed`.
EvaluatedInstance evaluate(const TspInstance& inst, const EaConfig& cfg, std::uint64_t seed);

struct BootstrapResult {
    Population population;
    std::size_t evaluations = 0;
};

/// Easy mode samples random instances until one is feasible; hard mode
/// hill-climbs a random instance on alpha with the mutation operator. The
/// feasible instance is copied mu times. Throws BudgetError after
/// cfg.bootstrap_budget evaluations.
BootstrapResult bootstrap(const EaConfig& cfg);

struct GenerationRecord {
    std::size_t generation = 0;
    double feature_min = 0.0;
    double feature_max = 0.0;
    double range = 0.0;
    double alpha_min = 0.0;
    double alpha_max = 0.0;
    std::size_t accepted = 0;
    std::size_t removed = 0;
};

struct RunLog {
    EaConfig config;
    std::vector<GenerationRecord> generations;  // generations[0] is the bootstrap population
    Population population;
    std::size_t evaluations = 0;
};

/// Called after each generation (and once for the bootstrap population) with
/// the record and the population as it stands.
using GenerationObserver = std::function<void(const GenerationRecord&, const Population&)>;

/// The (mu + lambda) diversity EA. Each generation picks lambda distinct
/// parents uniformly, mutates each once, keeps offspring that meet the ratio
/// threshold and prunes back to mu by diversity contribution. The logged
/// feature is the first feature of cfg.measure.
RunLog evolve(const EaConfig& cfg, const GenerationObserver& observer = {});

GenerationRecord summarize(const Population& pop, FeatureId feature, std::size_t generation);

}  // namespace instance_forge
