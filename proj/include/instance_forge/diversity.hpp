#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "instance_forge/features.hpp"
#include "instance_forge/instance.hpp"

namespace instance_forge {

struct EvaluatedInstance {
    TspInstance inst;
    FeatureVector features;
    double alpha = 0.0;
};

using Population = std::vector<EvaluatedInstance>;

/// Diversity contribution of every member for one feature.
///
/// Members are ranked by value. A member whose value is shared with another
/// member contributes 0. A member holding the unique minimum or maximum
/// contributes bound^2. Every other member contributes the product of its gaps
/// to the next smaller and the next larger value.
std::vector<double> single_feature_contributions(std::span<const double> values, double bound);

/// Features and non-negative weights of a (possibly multi-feature) diversity
/// measure. A single feature with any positive weight is the plain measure.
struct WeightSpec {
    std::vector<FeatureId> features;
    std::vector<double> weights;

    static WeightSpec single(FeatureId f) { return {{f}, {1.0}}; }

    /// Throws ValidationError: empty, length mismatch, negative or all-zero weights.
    void validate() const;
    bool is_single() const noexcept { return features.size() == 1; }

    nlohmann::json to_json() const;
    static WeightSpec from_json(const nlohmann::json& doc);
};

/// Per-member sum over features of weight * contribution / max contribution.
/// A feature whose contributions are all zero adds nothing.
std::vector<double> weighted_contributions(std::span<const std::vector<double>> columns, std::span<const double> weights,
                                           std::span<const double> bounds);

/// Contributions under `spec` for instances of size n. A single-feature spec
/// yields the raw contributions; several features yield the weighted sum.
std::vector<double> population_contributions(const Population& pop, const WeightSpec& spec, std::size_t n);

/// Removes members one at a time, recomputing contributions after each
/// removal and choosing uniformly among the minimum-contribution members,
/// until `mu` remain. Returns the surviving indices in ascending order.
std::vector<std::size_t> prune_indices(std::span<const std::vector<double>> columns, std::span<const double> weights,
                                       std::span<const double> bounds, std::size_t mu, RandomSource& rng);

Population prune(Population pop, std::size_t mu, const WeightSpec& spec, RandomSource& rng);

}  // namespace instance_forge
