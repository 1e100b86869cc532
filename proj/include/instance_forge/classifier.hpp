#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "instance_forge/diversity.hpp"
#include "instance_forge/features.hpp"

namespace instance_forge {

inline constexpr int easy_label = -1;
inline constexpr int hard_label = +1;

enum class KernelKind { linear, rbf };

struct KernelSpec {
    KernelKind kind = KernelKind::rbf;
    double gamma = 2.0;  // rbf only: k(u, v) = exp(-gamma * |u - v|^2)

    static KernelSpec linear() { return {KernelKind::linear, 0.0}; }
    static KernelSpec rbf(double gamma) { return {KernelKind::rbf, gamma}; }

    double operator()(std::span<const double> u, std::span<const double> v) const;
    std::string name() const { return kind == KernelKind::linear ? "linear" : "rbf"; }
};

struct Dataset {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;  // easy_label or hard_label
    std::vector<FeatureId> feature_ids;

    std::size_t size() const noexcept { return rows.size(); }
    std::size_t dimension() const noexcept { return rows.empty() ? 0 : rows.front().size(); }
};

/// Per-column zero mean and unit (population) variance. Constant columns are
/// only centred.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    static Standardizer fit(const std::vector<std::vector<double>>& rows);
    std::vector<double> apply(std::span<const double> row) const;
};

struct TrainOptions {
    double C = 1.0;
    double tol = 1e-3;
    std::size_t max_updates = 1'000'000;
};

struct SvmModel {
    KernelSpec kernel;
    double C = 1.0;
    Standardizer standardizer;
    std::vector<std::vector<double>> support_vectors;  // standardized
    std::vector<double> alphas;                        // dual variables, 0 < a <= C
    std::vector<int> labels;
    double bias = 0.0;
    std::size_t iterations = 0;
    double kkt_violation = 0.0;  // max violating pair gap at exit
    bool converged = false;

    /// Raw (unstandardized) input.
    double decision_value(std::span<const double> row) const;
    nlohmann::json to_json() const;
};

/// Soft-margin SVM on standardized features, solved by SMO with maximal
/// violating pair selection. Throws ValidationError for single-class data,
/// ragged rows or non-finite values.
SvmModel train(const Dataset& ds, const KernelSpec& kernel, const TrainOptions& options = {});

struct Prediction {
    int label = 0;
    double decision = 0.0;
};

/// Throws ValidationError on dimension mismatch.
Prediction predict(const SvmModel& model, std::span<const double> row);

double training_accuracy(const SvmModel& model, const Dataset& ds);

/// All k-subsets of the seven features in lexicographic order of FeatureId.
std::vector<std::vector<FeatureId>> feature_combinations(std::size_t k);

Dataset build_dataset(const Population& easy, const Population& hard, const std::vector<FeatureId>& features);

struct SweepOptions {
    KernelSpec kernel = KernelSpec::rbf(2.0);
    double C = 100.0;
    std::vector<std::size_t> combo_sizes = {2, 3};
    /// Train one model per subset on all sizes together instead of per size.
    bool pooled = false;
    /// Fraction of each class held out for scoring; 0 scores on the training set.
    double holdout_fraction = 0.0;
    std::uint64_t seed = 0;
};

struct SweepRow {
    std::vector<FeatureId> features;
    std::size_t n = 0;  // 0 when pooled
    KernelSpec kernel;
    double C = 0.0;
    double accuracy = 0.0;
    std::size_t support_vectors = 0;
    std::string error;  // non-empty when training failed for this cell

    bool ok() const noexcept { return error.empty(); }
};

/// Trains one model per (feature subset, instance size) cell. A failing cell
/// is recorded with its error message instead of aborting the sweep.
std::vector<SweepRow> combination_sweep(const Population& easy, const Population& hard, const SweepOptions& options);

/// feature_1,feature_2,feature_3,n,kernel,C,gamma,accuracy,support_vector_count,status
std::string format_sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace instance_forge
