#include "instance_forge/ea.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "instance_forge/errors.hpp"

namespace instance_forge {

using nlohmann::json;

namespace {

// Stream tags for derive_seed.
constexpr std::uint64_t bootstrap_stream = 0xB007;
constexpr std::uint64_t generation_stream = 0x6E4E;
constexpr std::uint64_t offspring_stream = 0x0FF5;

struct PublishedThresholds {
    std::size_t n;
    double easy;
    double hard;
};

constexpr PublishedThresholds published_thresholds[] = {
    {25, 1.0, 1.15},
    {50, 1.0, 1.18},
    {100, 1.03, 1.2},
};

}  // namespace

std::string_view hardness_name(Hardness h) noexcept {
    return h == Hardness::easy ? "easy" : "hard";
}

Hardness parse_hardness(std::string_view name) {
    if (name == "easy") {
        return Hardness::easy;
    }
    if (name == "hard") {
        return Hardness::hard;
    }
    throw ValidationError("mode must be 'easy' or 'hard', got '" + std::string(name) + "'");
}

bool satisfies_threshold(Hardness mode, double alpha, double threshold) noexcept {
    return mode == Hardness::hard ? alpha >= threshold - threshold_tolerance : alpha <= threshold + threshold_tolerance;
}

double published_alpha_threshold(std::size_t n, Hardness mode) {
    for (const auto& t : published_thresholds) {
        if (t.n == n) {
            return mode == Hardness::easy ? t.easy : t.hard;
        }
    }
    throw ValidationError("no published threshold for n = " + std::to_string(n) + " (known: 25, 50, 100)");
}

EaConfig EaConfig::published(std::size_t n, Hardness mode, WeightSpec measure, OptOracle oracle) {
    EaConfig cfg;
    cfg.n = n;
    cfg.mode = mode;
    cfg.alpha_threshold = published_alpha_threshold(n, mode);
    cfg.measure = std::move(measure);
    cfg.oracle = std::move(oracle);
    return cfg;
}

void EaConfig::validate() const {
    auto fail = [](const std::string& what) { throw ValidationError("EA config: " + what); };
    if (n < TspInstance::min_cities) {
        fail("n must be at least 3");
    }
    if (mu < 2) {
        fail("mu must be at least 2");
    }
    if (lambda < 1 || lambda > mu) {
        fail("lambda must satisfy 1 <= lambda <= mu");
    }
    if (!(alpha_threshold >= 1.0)) {
        fail("alpha_threshold must be at least 1");
    }
    if (!(mutation.sigma_small > 0.0) || !(mutation.sigma_large > 0.0)) {
        fail("mutation sigmas must be positive");
    }
    if (!(mutation.p_small > 0.0 && mutation.p_small <= 1.0)) {
        fail("p_small must lie in (0, 1]");
    }
    if (mutation.cities_per_mutation < 1 || mutation.cities_per_mutation > n) {
        fail("cities_per_mutation must lie in [1, n]");
    }
    if (restarts < 1) {
        fail("restarts must be at least 1");
    }
    if (bootstrap_budget < 1) {
        fail("bootstrap_budget must be at least 1");
    }
    measure.validate();
    if (!oracle.can_serve(n)) {
        fail("oracle " + oracle.describe() + " cannot serve n = " + std::to_string(n));
    }
}

json EaConfig::to_json() const {
    return {
        {"n", n},
        {"mu", mu},
        {"lambda", lambda},
        {"mode", std::string(hardness_name(mode))},
        {"alpha_threshold", alpha_threshold},
        {"generations", generations},
        {"measure", measure.to_json()},
        {"mutation",
         {{"sigma_small", mutation.sigma_small},
          {"sigma_large", mutation.sigma_large},
          {"p_small", mutation.p_small},
          {"cities_per_mutation", mutation.cities_per_mutation}}},
        {"restarts", restarts},
        {"bootstrap_budget", bootstrap_budget},
        {"oracle", oracle.to_json()},
        {"seed", seed},
    };
}

EaConfig EaConfig::from_json(const json& doc) {
    if (!doc.is_object()) {
        throw ParseError("EA config must be a JSON object");
    }
    EaConfig cfg;
    try {
        if (!doc.contains("n")) {
            throw ParseError("EA config: missing field 'n'");
        }
        cfg.n = doc.at("n").get<std::size_t>();
        cfg.mode = parse_hardness(doc.value("mode", std::string("hard")));
        cfg.mu = doc.value("mu", cfg.mu);
        cfg.lambda = doc.value("lambda", cfg.lambda);
        cfg.generations = doc.value("generations", cfg.generations);
        if (doc.contains("alpha_threshold")) {
            cfg.alpha_threshold = doc.at("alpha_threshold").get<double>();
        } else {
            cfg.alpha_threshold = published_alpha_threshold(cfg.n, cfg.mode);
        }
        if (doc.contains("measure")) {
            cfg.measure = WeightSpec::from_json(doc.at("measure"));
        } else if (doc.contains("feature")) {
            cfg.measure = WeightSpec::single(parse_feature(doc.at("feature").get<std::string>()));
        } else {
            throw ParseError("EA config: missing field 'measure' (or 'feature')");
        }
        if (doc.contains("mutation")) {
            const auto& m = doc.at("mutation");
            cfg.mutation.sigma_small = m.value("sigma_small", cfg.mutation.sigma_small);
            cfg.mutation.sigma_large = m.value("sigma_large", cfg.mutation.sigma_large);
            cfg.mutation.p_small = m.value("p_small", cfg.mutation.p_small);
            cfg.mutation.cities_per_mutation = m.value("cities_per_mutation", cfg.mutation.cities_per_mutation);
        }
        cfg.restarts = doc.value("restarts", cfg.restarts);
        cfg.bootstrap_budget = doc.value("bootstrap_budget", cfg.bootstrap_budget);
        if (doc.contains("oracle")) {
            cfg.oracle = OptOracle::from_json(doc.at("oracle"));
        }
        cfg.seed = doc.value("seed", cfg.seed);
    } catch (const json::exception& e) {
        throw ParseError(std::string("EA config: ") + e.what());
    }
    return cfg;
}

MutationOutcome mutate_detailed(const TspInstance& parent, const MutationParams& params, RandomSource& rng) {
    const double sigma = rng.bernoulli(params.p_small) ? params.sigma_small : params.sigma_large;
    std::vector<Point> cities(parent.cities().begin(), parent.cities().end());
    MutationOutcome out{parent, sigma, {}};
    for (std::size_t step = 0; step < params.cities_per_mutation; ++step) {
        const auto i = rng.uniform_index(0, cities.size() - 1);
        const double x = cities[i].x + rng.normal(0.0, sigma);
        const double y = cities[i].y + rng.normal(0.0, sigma);
        if (x >= 0.0 && x <= 1.0) {
            cities[i].x = x;
        }
        if (y >= 0.0 && y <= 1.0) {
            cities[i].y = y;
        }
        out.cities.push_back(i);
    }
    out.child = TspInstance(std::move(cities), parent.id());
    return out;
}

TspInstance mutate(const TspInstance& parent, const MutationParams& params, RandomSource& rng) {
    return mutate_detailed(parent, params, rng).child;
}

EvaluatedInstance evaluate(const TspInstance& inst, const EaConfig& cfg, std::uint64_t seed) {
    RandomSource rng(seed);
    const auto ratio = evaluate_ratio(inst, cfg.oracle, rng, cfg.restarts);
    return EvaluatedInstance{inst, compute_all(inst), ratio.alpha};
}

BootstrapResult bootstrap(const EaConfig& cfg) {
    cfg.validate();
    RandomSource rng(derive_seed(cfg.seed, {bootstrap_stream}));
    std::size_t evaluations = 0;
    auto next_eval = [&](const TspInstance& inst) {
        if (evaluations >= cfg.bootstrap_budget) {
            throw BudgetError("bootstrap exhausted its budget of " + std::to_string(cfg.bootstrap_budget) +
                              " evaluations without reaching alpha " +
                              std::string(cfg.mode == Hardness::hard ? ">= " : "<= ") +
                              std::to_string(cfg.alpha_threshold) + " at n = " + std::to_string(cfg.n));
        }
        return evaluate(inst, cfg, derive_seed(cfg.seed, {bootstrap_stream, evaluations++}));
    };

    auto current = next_eval(random_instance(cfg.n, rng));
    if (cfg.mode == Hardness::easy) {
        while (!satisfies_threshold(cfg.mode, current.alpha, cfg.alpha_threshold)) {
            current = next_eval(random_instance(cfg.n, rng));
        }
    } else {
        while (!satisfies_threshold(cfg.mode, current.alpha, cfg.alpha_threshold)) {
            auto candidate = next_eval(mutate(current.inst, cfg.mutation, rng));
            if (candidate.alpha >= current.alpha) {
                current = std::move(candidate);
            }
        }
    }
    return BootstrapResult{Population(cfg.mu, current), evaluations};
}

GenerationRecord summarize(const Population& pop, FeatureId feature, std::size_t generation) {
    GenerationRecord rec;
    rec.generation = generation;
    rec.feature_min = std::numeric_limits<double>::infinity();
    rec.feature_max = -rec.feature_min;
    rec.alpha_min = rec.feature_min;
    rec.alpha_max = -rec.feature_min;
    for (const auto& m : pop) {
        rec.feature_min = std::min(rec.feature_min, m.features[feature]);
        rec.feature_max = std::max(rec.feature_max, m.features[feature]);
        rec.alpha_min = std::min(rec.alpha_min, m.alpha);
        rec.alpha_max = std::max(rec.alpha_max, m.alpha);
    }
    rec.range = rec.feature_max - rec.feature_min;
    return rec;
}

RunLog evolve(const EaConfig& cfg, const GenerationObserver& observer) {
    cfg.validate();
    const auto logged = cfg.measure.features.front();
    auto boot = bootstrap(cfg);
    RunLog log;
    log.config = cfg;
    log.evaluations = boot.evaluations;
    Population pop = std::move(boot.population);

    auto record = [&](GenerationRecord rec) {
        log.generations.push_back(rec);
        if (observer) {
            observer(log.generations.back(), pop);
        }
    };
    record(summarize(pop, logged, 0));

    std::vector<std::size_t> slots(cfg.mu);
    for (std::size_t g = 1; g <= cfg.generations; ++g) {
        RandomSource rng(derive_seed(cfg.seed, {generation_stream, g}));

        // lambda distinct parents: partial Fisher-Yates over population slots.
        std::iota(slots.begin(), slots.end(), 0);
        for (std::size_t k = 0; k < cfg.lambda; ++k) {
            std::swap(slots[k], slots[rng.uniform_index(k, slots.size() - 1)]);
        }
        std::vector<TspInstance> offspring;
        offspring.reserve(cfg.lambda);
        for (std::size_t k = 0; k < cfg.lambda; ++k) {
            offspring.push_back(mutate(pop[slots[k]].inst, cfg.mutation, rng));
        }

        std::size_t accepted = 0;
        for (std::size_t k = 0; k < offspring.size(); ++k) {
            auto child = evaluate(offspring[k], cfg, derive_seed(cfg.seed, {offspring_stream, g, k}));
            ++log.evaluations;
            if (satisfies_threshold(cfg.mode, child.alpha, cfg.alpha_threshold)) {
                pop.push_back(std::move(child));
                ++accepted;
            }
        }
        const auto before = pop.size();
        if (pop.size() > cfg.mu) {
            pop = prune(std::move(pop), cfg.mu, cfg.measure, rng);
        }
        auto rec = summarize(pop, logged, g);
        rec.accepted = accepted;
        rec.removed = before - pop.size();
        record(rec);
    }
    log.population = std::move(pop);
    return log;
}

}  // namespace instance_forge
