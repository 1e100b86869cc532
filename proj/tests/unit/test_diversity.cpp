#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "instance_forge/diversity.hpp"
#include "instance_forge/errors.hpp"

using namespace instance_forge;

namespace {

std::vector<std::size_t> prune_values(const std::vector<double>& values, std::size_t mu, std::uint64_t seed,
                                      double bound = 1.0) {
    RandomSource rng(seed);
    const std::vector<std::vector<double>> cols{values};
    const std::vector<double> w{1.0};
    const std::vector<double> b{bound};
    return prune_indices(cols, w, b, mu, rng);
}

std::vector<std::size_t> argmin_set(const std::vector<double>& c) {
    std::vector<std::size_t> out;
    const double lo = *std::min_element(c.begin(), c.end());
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == lo) {
            out.push_back(i);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("single feature contributions follow the gap and boundary rules") {
    const auto c = single_feature_contributions(std::vector<double>{0.1, 0.3, 0.6}, 1.0);
    CHECK(c[0] == 1.0);
    CHECK(c[1] == doctest::Approx(0.06).epsilon(1e-12));
    CHECK(c[2] == 1.0);

    CHECK(single_feature_contributions(std::vector<double>{0.2, 0.2, 0.5}, 1.0) == std::vector<double>{0, 0, 1});
    CHECK(single_feature_contributions(std::vector<double>{0.4}, 3.0) == std::vector<double>{9.0});
    // Unsorted input: results are reported in input order.
    const auto u = single_feature_contributions(std::vector<double>{0.6, 0.1, 0.3}, 2.0);
    CHECK(u[0] == 4.0);
    CHECK(u[1] == 4.0);
    CHECK(u[2] == doctest::Approx(0.06));
    // Interior duplicates contribute nothing, and neither do their neighbours' shared gaps.
    const auto d = single_feature_contributions(std::vector<double>{0.0, 0.5, 0.5, 0.7, 1.0}, 1.0);
    CHECK(d[0] == 1.0);
    CHECK(d[1] == 0.0);
    CHECK(d[2] == 0.0);
    CHECK(d[3] == doctest::Approx(0.06).epsilon(1e-12));
    CHECK(d[4] == 1.0);
}

TEST_CASE("contribution properties on random value sets") {
    RandomSource rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto k = 1 + rng.uniform_index(0, 20);
        std::vector<double> v(k);
        for (auto& x : v) {
            // Coarse grid so duplicates happen.
            x = static_cast<double>(rng.uniform_index(0, 30)) / 40.0;
        }
        const double bound = 1.0;
        const auto c = single_feature_contributions(v, bound);
        for (double x : c) {
            CHECK(x >= 0.0);
            CHECK(x <= bound * bound);
        }
        // Translation leaves interior contributions unchanged.
        auto shifted = v;
        for (auto& x : shifted) {
            x += 0.125;
        }
        const auto cs = single_feature_contributions(shifted, bound);
        for (std::size_t i = 0; i < k; ++i) {
            CHECK(cs[i] == doctest::Approx(c[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("weighted contributions") {
    const std::vector<double> a{0.1, 0.35, 0.4, 0.9, 0.6};
    const std::vector<double> b{0.5, 0.2, 0.45, 0.05, 0.3};
    const std::vector<double> c{0.3, 0.3, 0.1, 0.8, 0.7};
    const std::vector<std::vector<double>> cols{a, b, c};
    const std::vector<double> bounds{1.0, 1.0, 1.0};

    SUBCASE("degenerate weights reproduce the single-feature ranking") {
        const auto w = weighted_contributions(cols, std::vector<double>{1, 0, 0}, bounds);
        const auto s = single_feature_contributions(a, 1.0);
        CHECK(argmin_set(w) == argmin_set(s));
        std::vector<std::size_t> ow(a.size());
        std::vector<std::size_t> os(a.size());
        std::iota(ow.begin(), ow.end(), 0);
        std::iota(os.begin(), os.end(), 0);
        std::stable_sort(ow.begin(), ow.end(), [&](auto i, auto j) { return w[i] < w[j]; });
        std::stable_sort(os.begin(), os.end(), [&](auto i, auto j) { return s[i] < s[j]; });
        CHECK(ow == os);
    }
    SUBCASE("identical layouts double the normalised value") {
        const std::vector<std::vector<double>> twin{a, a};
        const auto w = weighted_contributions(twin, std::vector<double>{1, 1}, std::vector<double>{1, 1});
        const auto s = single_feature_contributions(a, 1.0);
        const double top = *std::max_element(s.begin(), s.end());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(w[i] == doctest::Approx(2.0 * s[i] / top));
        }
    }
    SUBCASE("published weight distributions are accepted") {
        for (const auto& weights : std::vector<std::vector<double>>{
                 {1, 1, 1}, {2, 1, 1}, {1, 2, 1}, {1, 1, 2}, {2, 2, 1}, {2, 1, 2}, {1, 2, 2}}) {
            const auto w = weighted_contributions(cols, weights, bounds);
            REQUIRE(w.size() == a.size());
            const double total_weight = weights[0] + weights[1] + weights[2];
            for (double x : w) {
                CHECK(x >= 0.0);
                CHECK(x <= total_weight + 1e-12);
            }
        }
    }
    SUBCASE("all-duplicate feature drops out") {
        const std::vector<std::vector<double>> flat{{0.5, 0.5, 0.5}, {0.1, 0.2, 0.3}};
        const auto w = weighted_contributions(flat, std::vector<double>{5, 1}, std::vector<double>{1, 1});
        CHECK(w[0] == 1.0);
        CHECK(w[2] == 1.0);
    }
    CHECK_THROWS_AS(weighted_contributions(cols, std::vector<double>{1, 1}, bounds), ValidationError);
}

TEST_CASE("WeightSpec validation") {
    CHECK_THROWS_AS((WeightSpec{{}, {}}.validate()), ValidationError);
    CHECK_THROWS_AS((WeightSpec{{FeatureId::chull_area}, {1, 2}}.validate()), ValidationError);
    CHECK_THROWS_AS((WeightSpec{{FeatureId::chull_area, FeatureId::nnds_mean}, {0, 0}}.validate()), ValidationError);
    CHECK_THROWS_AS((WeightSpec{{FeatureId::chull_area}, {-1}}.validate()), ValidationError);
    const WeightSpec spec{{FeatureId::chull_area, FeatureId::nnds_mean}, {2, 1}};
    const auto back = WeightSpec::from_json(spec.to_json());
    CHECK(back.features == spec.features);
    CHECK(back.weights == spec.weights);
}

TEST_CASE("prune removes the smallest contribution") {
    const auto keep = prune_values({0.1, 0.2, 0.25, 0.6}, 3, 1);
    CHECK(keep == std::vector<std::size_t>{0, 2, 3});

    std::map<std::size_t, int> removed;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        const auto k = prune_values({0.3, 0.3, 0.9}, 2, seed);
        REQUIRE(k.size() == 2);
        CHECK(k.back() == 2);
        ++removed[k.front() == 0 ? 1 : 0];
    }
    // Both duplicates get removed sometimes.
    CHECK(removed[0] > 120);
    CHECK(removed[1] > 120);

    CHECK_THROWS_AS(prune_values({0.1, 0.2, 0.3}, 1, 0), ValidationError);
}

TEST_CASE("unique extremes survive randomized pruning") {
    RandomSource rng(55);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto k = 3 + rng.uniform_index(0, 30);
        std::vector<double> v(k);
        for (auto& x : v) {
            x = static_cast<double>(rng.uniform_index(1, 98)) / 100.0;
        }
        v[rng.uniform_index(0, k - 1)] = 0.0;
        std::size_t hi = rng.uniform_index(0, k - 1);
        while (v[hi] == 0.0) {
            hi = rng.uniform_index(0, k - 1);
        }
        v[hi] = 1.0;
        const auto mu = 2 + rng.uniform_index(0, k - 2);
        const auto keep = prune_values(v, mu, rng.next_u64());
        CHECK(keep.size() == mu);
        double lo = 2.0;
        double top = -1.0;
        for (auto i : keep) {
            lo = std::min(lo, v[i]);
            top = std::max(top, v[i]);
        }
        CHECK(lo == 0.0);
        CHECK(top == 1.0);
    }
}

TEST_CASE("prune never shrinks the range, even with duplicated extremes") {
    RandomSource rng(56);
    for (int trial = 0; trial < 300; ++trial) {
        const auto k = 3 + rng.uniform_index(0, 20);
        std::vector<double> v(k);
        for (auto& x : v) {
            x = static_cast<double>(rng.uniform_index(0, 6)) / 6.0;
        }
        const auto mu = 2 + rng.uniform_index(0, k - 2);
        const auto keep = prune_values(v, mu, rng.next_u64());
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        double klo = 2.0;
        double khi = -1.0;
        for (auto i : keep) {
            klo = std::min(klo, v[i]);
            khi = std::max(khi, v[i]);
        }
        CHECK(klo == *lo);
        CHECK(khi == *hi);
    }
}

TEST_CASE("population prune uses feature bounds for the instance size") {
    RandomSource rng(9);
    Population pop;
    for (int i = 0; i < 6; ++i) {
        const auto inst = random_instance(8, rng);
        pop.push_back({inst, compute_all(inst), 1.0});
    }
    const auto spec = WeightSpec::single(FeatureId::mst_depth_mean);
    const auto c = population_contributions(pop, spec, 8);
    CHECK(*std::max_element(c.begin(), c.end()) <= 49.0);
    RandomSource prng(1);
    const auto pruned = prune(pop, 4, spec, prng);
    CHECK(pruned.size() == 4);
}
