#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "instance_forge/classifier.hpp"
#include "instance_forge/errors.hpp"

using namespace instance_forge;

namespace {

Dataset xor_data() {
    return Dataset{{{0, 0}, {1, 1}, {0, 1}, {1, 0}}, {easy_label, easy_label, hard_label, hard_label}, {}};
}

Dataset rings(std::size_t per_class, std::uint64_t seed) {
    RandomSource rng(seed);
    Dataset ds;
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        const bool outer = i >= per_class;
        const double r = (outer ? 2.0 : 1.0) + rng.normal(0.0, 0.1);
        const double t = rng.uniform() * 2.0 * std::numbers::pi;
        ds.rows.push_back({r * std::cos(t), r * std::sin(t)});
        ds.labels.push_back(outer ? hard_label : easy_label);
    }
    return ds;
}

Population population_with(std::size_t n, std::size_t count, double alpha, std::uint64_t seed, double shrink) {
    RandomSource rng(seed);
    Population pop;
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<Point> pts;
        for (std::size_t c = 0; c < n; ++c) {
            pts.push_back({0.5 + shrink * (rng.uniform() - 0.5), 0.5 + shrink * (rng.uniform() - 0.5)});
        }
        TspInstance inst(std::move(pts));
        pop.push_back({inst, compute_all(inst), alpha});
    }
    return pop;
}

}  // namespace

TEST_CASE("kernels") {
    const std::vector<double> u{1.0, 2.0};
    const std::vector<double> v{0.0, 4.0};
    CHECK(KernelSpec::linear()(u, v) == 8.0);
    CHECK(KernelSpec::rbf(0.5)(u, v) == doctest::Approx(std::exp(-0.5 * 5.0)));
    CHECK(KernelSpec::rbf(2.0)(u, u) == 1.0);
}

TEST_CASE("standardizer") {
    const auto s = Standardizer::fit({{1, 5}, {3, 5}, {5, 5}});
    CHECK(s.mean == std::vector<double>{3, 5});
    const auto z = s.apply(std::vector<double>{5, 5});
    CHECK(z[0] == doctest::Approx(std::sqrt(1.5)));
    CHECK(z[1] == 0.0);
}

TEST_CASE("separable pair") {
    const Dataset ds{{{0.0}, {1.0}}, {easy_label, hard_label}, {}};
    const auto m = train(ds, KernelSpec::linear(), {});
    CHECK(m.converged);
    CHECK(predict(m, std::vector<double>{-1.0}).label == easy_label);
    CHECK(predict(m, std::vector<double>{2.0}).label == hard_label);
    CHECK(training_accuracy(m, ds) == 1.0);
}

TEST_CASE("XOR with the RBF kernel matches the exact dual solution") {
    const auto ds = xor_data();
    const auto m = train(ds, KernelSpec::rbf(2.0), TrainOptions{100.0});
    CHECK(m.converged);
    CHECK(training_accuracy(m, ds) == 1.0);
    // Standardized corners are (+-1, +-1); by symmetry all four multipliers are
    // equal and solve a (1 - e^-8)^2 = 1.
    const double expected = 1.0 / ((1.0 - std::exp(-8.0)) * (1.0 - std::exp(-8.0)));
    REQUIRE(m.alphas.size() == 4);
    for (double a : m.alphas) {
        CHECK(a == doctest::Approx(expected).epsilon(1e-3));
    }
    CHECK(std::abs(m.bias) < 1e-3);
    CHECK(KernelSpec::linear().name() == "linear");
}

TEST_CASE("KKT conditions hold at the solution") {
    const auto ds = rings(40, 3);
    const double C = 10.0;
    const auto m = train(ds, KernelSpec::rbf(1.0), TrainOptions{C});
    REQUIRE(m.converged);
    double balance = 0.0;
    for (std::size_t i = 0; i < m.alphas.size(); ++i) {
        CHECK(m.alphas[i] > 0.0);
        CHECK(m.alphas[i] <= C + 1e-12);
        balance += m.alphas[i] * m.labels[i];
    }
    CHECK(std::abs(balance) < 1e-8);
    // Free support vectors sit on the margin.
    const auto s = m.standardizer;
    std::size_t free = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto z = s.apply(ds.rows[i]);
        for (std::size_t k = 0; k < m.support_vectors.size(); ++k) {
            if (m.support_vectors[k] == z && m.alphas[k] < C - 1e-6) {
                CHECK(std::abs(m.decision_value(ds.rows[i]) * ds.labels[i] - 1.0) < 1e-2);
                ++free;
            }
        }
    }
    CHECK(free > 0);
}

TEST_CASE("label flip and affine rescaling") {
    auto ds = rings(30, 8);
    const auto m = train(ds, KernelSpec::rbf(2.0), TrainOptions{100.0});
    auto flipped = ds;
    for (auto& y : flipped.labels) {
        y = -y;
    }
    const auto mf = train(flipped, KernelSpec::rbf(2.0), TrainOptions{100.0});
    auto scaled = ds;
    for (auto& r : scaled.rows) {
        r[0] = 3.0 * r[0] + 7.0;
    }
    const auto ms = train(scaled, KernelSpec::rbf(2.0), TrainOptions{100.0});
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double d = m.decision_value(ds.rows[i]);
        CHECK(mf.decision_value(ds.rows[i]) == doctest::Approx(-d).epsilon(1e-3).scale(1.0));
        CHECK(ms.decision_value(scaled.rows[i]) == doctest::Approx(d).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("concentric rings are separable with the RBF kernel") {
    const auto ds = rings(100, 21);
    const auto m = train(ds, KernelSpec::rbf(2.0), TrainOptions{100.0});
    CHECK(training_accuracy(m, ds) >= 0.95);
    const auto lin = train(ds, KernelSpec::linear(), TrainOptions{1.0});
    CHECK(training_accuracy(lin, ds) < 0.8);
}

TEST_CASE("indistinguishable classes do not beat the majority by much with a linear kernel") {
    Dataset ds;
    RandomSource rng(4);
    for (int i = 0; i < 60; ++i) {
        ds.rows.push_back({rng.uniform(), rng.uniform()});
        ds.labels.push_back(i < 36 ? easy_label : hard_label);
    }
    const auto m = train(ds, KernelSpec::linear(), TrainOptions{1.0});
    CHECK(training_accuracy(m, ds) <= 0.75);

    Dataset same;
    for (int i = 0; i < 10; ++i) {
        same.rows.push_back({0.5, 0.5});
        same.labels.push_back(i < 6 ? easy_label : hard_label);
    }
    const auto ms = train(same, KernelSpec::rbf(2.0), TrainOptions{100.0});
    CHECK(training_accuracy(ms, same) <= 0.6 + 1e-12);
}

TEST_CASE("training input errors") {
    CHECK_THROWS_AS(train(Dataset{{{0.0}, {1.0}}, {easy_label, easy_label}, {}}, KernelSpec::linear()), ValidationError);
    CHECK_THROWS_AS(train(Dataset{{{0.0}, {1.0, 2.0}}, {easy_label, hard_label}, {}}, KernelSpec::linear()),
                    ValidationError);
    CHECK_THROWS_AS(train(Dataset{{{0.0}, {NAN}}, {easy_label, hard_label}, {}}, KernelSpec::linear()), ValidationError);
    CHECK_THROWS_AS(train(Dataset{{{0.0}, {1.0}}, {easy_label, 3}, {}}, KernelSpec::linear()), ValidationError);
    const auto m = train(xor_data(), KernelSpec::rbf(2.0), TrainOptions{100.0});
    CHECK_THROWS_AS(predict(m, std::vector<double>{1.0}), ValidationError);
    CHECK(m.to_json().contains("bias"));
}

TEST_CASE("feature combinations") {
    CHECK(feature_combinations(2).size() == 21);
    CHECK(feature_combinations(3).size() == 35);
    CHECK(feature_combinations(7).size() == 1);
    const auto first = feature_combinations(3).front();
    CHECK(first == std::vector<FeatureId>{FeatureId::angle_mean, FeatureId::centroid_mean_distance_to_centroid,
                                          FeatureId::chull_area});
    CHECK(feature_combinations(0).empty());
    CHECK(feature_combinations(8).empty());
}

TEST_CASE("combination sweep") {
    auto easy = population_with(10, 12, 1.0, 1, 1.0);
    auto hard = population_with(10, 12, 1.2, 2, 0.3);
    auto easy20 = population_with(12, 8, 1.0, 3, 1.0);
    auto hard20 = population_with(12, 8, 1.2, 4, 0.3);
    easy.insert(easy.end(), easy20.begin(), easy20.end());
    hard.insert(hard.end(), hard20.begin(), hard20.end());

    SweepOptions opt;
    const auto rows = combination_sweep(easy, hard, opt);
    CHECK(rows.size() == 2 * (21 + 35));
    for (const auto& r : rows) {
        CHECK(r.ok());
        CHECK((r.n == 10 || r.n == 12));
        CHECK(r.accuracy >= 0.5);
    }
    opt.pooled = true;
    opt.combo_sizes = {2};
    const auto pooled = combination_sweep(easy, hard, opt);
    CHECK(pooled.size() == 21);
    CHECK(pooled.front().n == 0);

    const auto csv = format_sweep_csv(pooled);
    CHECK(csv.rfind("feature_1,feature_2,feature_3,n,kernel,C,gamma,accuracy,support_vector_count,status\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 22);

    // A size with only one class is reported per cell, not fatal.
    auto lonely = population_with(14, 5, 1.0, 9, 1.0);
    easy.insert(easy.end(), lonely.begin(), lonely.end());
    opt.pooled = false;
    const auto mixed = combination_sweep(easy, hard, opt);
    std::size_t failed = 0;
    for (const auto& r : mixed) {
        failed += r.ok() ? 0 : 1;
    }
    CHECK(failed == 21);
}
