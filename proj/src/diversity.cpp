#include "instance_forge/diversity.hpp"

#include <algorithm>
#include <numeric>

#include "instance_forge/errors.hpp"

namespace instance_forge {

std::vector<double> single_feature_contributions(std::span<const double> values, double bound) {
    const auto k = values.size();
    std::vector<double> out(k, 0.0);
    if (k == 0) {
        return out;
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    const double extreme = bound * bound;
    for (std::size_t p = 0; p < k; ++p) {
        const double v = values[order[p]];
        const bool shared = (p > 0 && values[order[p - 1]] == v) || (p + 1 < k && values[order[p + 1]] == v);
        if (shared) {
            continue;
        }
        if (p == 0 || p + 1 == k) {
            out[order[p]] = extreme;
        } else {
            out[order[p]] = (v - values[order[p - 1]]) * (values[order[p + 1]] - v);
        }
    }
    return out;
}

void WeightSpec::validate() const {
    if (features.empty()) {
        throw ValidationError("diversity measure needs at least one feature");
    }
    if (weights.size() != features.size()) {
        throw ValidationError("diversity measure has " + std::to_string(features.size()) + " features but " +
                              std::to_string(weights.size()) + " weights");
    }
    bool any_positive = false;
    for (double w : weights) {
        if (!(w >= 0.0)) {
            throw ValidationError("diversity weights must be non-negative");
        }
        any_positive = any_positive || w > 0.0;
    }
    if (!any_positive) {
        throw ValidationError("diversity measure needs a strictly positive weight");
    }
}

nlohmann::json WeightSpec::to_json() const {
    nlohmann::json names = nlohmann::json::array();
    for (auto f : features) {
        names.push_back(std::string(feature_name(f)));
    }
    return {{"features", std::move(names)}, {"weights", weights}};
}

WeightSpec WeightSpec::from_json(const nlohmann::json& doc) {
    WeightSpec spec;
    if (!doc.is_object() || !doc.contains("features") || !doc["features"].is_array()) {
        throw ParseError("measure: missing field 'features'");
    }
    for (const auto& name : doc["features"]) {
        if (!name.is_string()) {
            throw ParseError("measure: field 'features' must hold feature names");
        }
        spec.features.push_back(parse_feature(name.get<std::string>()));
    }
    if (doc.contains("weights")) {
        spec.weights = doc["weights"].get<std::vector<double>>();
    } else {
        spec.weights.assign(spec.features.size(), 1.0);
    }
    spec.validate();
    return spec;
}

std::vector<double> weighted_contributions(std::span<const std::vector<double>> columns, std::span<const double> weights,
                                           std::span<const double> bounds) {
    if (columns.empty() || columns.size() != weights.size() || columns.size() != bounds.size()) {
        throw ValidationError("weighted_contributions: columns, weights and bounds must have equal non-zero length");
    }
    const auto k = columns.front().size();
    std::vector<double> total(k, 0.0);
    for (std::size_t f = 0; f < columns.size(); ++f) {
        if (columns[f].size() != k) {
            throw ValidationError("weighted_contributions: ragged feature columns");
        }
        if (weights[f] == 0.0) {
            continue;
        }
        const auto c = single_feature_contributions(columns[f], bounds[f]);
        const double top = k == 0 ? 0.0 : *std::max_element(c.begin(), c.end());
        if (top <= 0.0) {
            continue;
        }
        for (std::size_t i = 0; i < k; ++i) {
            total[i] += weights[f] * (c[i] / top);
        }
    }
    return total;
}

namespace {

struct Columns {
    std::vector<std::vector<double>> values;
    std::vector<double> bounds;
};

Columns columns_for(const Population& pop, const WeightSpec& spec, std::size_t n) {
    Columns out;
    for (auto f : spec.features) {
        std::vector<double> col;
        col.reserve(pop.size());
        for (const auto& m : pop) {
            col.push_back(m.features[f]);
        }
        out.values.push_back(std::move(col));
        out.bounds.push_back(feature_bound(f, n));
    }
    return out;
}

std::vector<double> contributions_of(std::span<const std::vector<double>> columns, std::span<const double> weights,
                                     std::span<const double> bounds) {
    if (columns.size() == 1) {
        return single_feature_contributions(columns.front(), bounds.front());
    }
    return weighted_contributions(columns, weights, bounds);
}

}  // namespace

std::vector<double> population_contributions(const Population& pop, const WeightSpec& spec, std::size_t n) {
    spec.validate();
    const auto cols = columns_for(pop, spec, n);
    return contributions_of(cols.values, spec.weights, cols.bounds);
}

std::vector<std::size_t> prune_indices(std::span<const std::vector<double>> columns, std::span<const double> weights,
                                       std::span<const double> bounds, std::size_t mu, RandomSource& rng) {
    if (mu < 2) {
        throw ValidationError("prune target must be at least 2");
    }
    if (columns.empty()) {
        throw ValidationError("prune needs at least one feature column");
    }
    std::vector<std::size_t> alive(columns.front().size());
    std::iota(alive.begin(), alive.end(), 0);
    if (alive.size() < mu) {
        throw ValidationError("population of " + std::to_string(alive.size()) + " is smaller than prune target " +
                              std::to_string(mu));
    }
    std::vector<std::vector<double>> current(columns.size());
    std::vector<std::size_t> tied;
    while (alive.size() > mu) {
        for (std::size_t f = 0; f < columns.size(); ++f) {
            current[f].clear();
            for (auto i : alive) {
                current[f].push_back(columns[f][i]);
            }
        }
        const auto c = contributions_of(current, weights, bounds);
        const double lowest = *std::min_element(c.begin(), c.end());
        tied.clear();
        for (std::size_t p = 0; p < c.size(); ++p) {
            if (c[p] == lowest) {
                tied.push_back(p);
            }
        }
        const auto victim = tied[tied.size() == 1 ? 0 : rng.uniform_index(0, tied.size() - 1)];
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(victim));
    }
    return alive;
}

Population prune(Population pop, std::size_t mu, const WeightSpec& spec, RandomSource& rng) {
    spec.validate();
    if (pop.size() <= mu) {
        if (mu < 2) {
            throw ValidationError("prune target must be at least 2");
        }
        return pop;
    }
    const auto n = pop.front().inst.size();
    const auto cols = columns_for(pop, spec, n);
    const auto keep = prune_indices(cols.values, spec.weights, cols.bounds, mu, rng);
    Population out;
    out.reserve(keep.size());
    for (auto i : keep) {
        out.push_back(std::move(pop[i]));
    }
    return out;
}

}  // namespace instance_forge
