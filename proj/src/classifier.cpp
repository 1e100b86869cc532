#include "instance_forge/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "instance_forge/csv.hpp"
#include "instance_forge/errors.hpp"

namespace instance_forge {

double KernelSpec::operator()(std::span<const double> u, std::span<const double> v) const {
    if (kind == KernelKind::linear) {
        return std::inner_product(u.begin(), u.end(), v.begin(), 0.0);
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u[i] - v[i];
        sq += d * d;
    }
    return std::exp(-gamma * sq);
}

Standardizer Standardizer::fit(const std::vector<std::vector<double>>& rows) {
    Standardizer s;
    if (rows.empty()) {
        return s;
    }
    const auto dim = rows.front().size();
    const auto count = static_cast<double>(rows.size());
    s.mean.assign(dim, 0.0);
    s.scale.assign(dim, 0.0);
    for (const auto& r : rows) {
        for (std::size_t d = 0; d < dim; ++d) {
            s.mean[d] += r[d];
        }
    }
    for (auto& m : s.mean) {
        m /= count;
    }
    for (const auto& r : rows) {
        for (std::size_t d = 0; d < dim; ++d) {
            s.scale[d] += (r[d] - s.mean[d]) * (r[d] - s.mean[d]);
        }
    }
    for (auto& sc : s.scale) {
        sc = std::sqrt(sc / count);
        if (!(sc > 0.0)) {
            sc = 1.0;
        }
    }
    return s;
}

std::vector<double> Standardizer::apply(std::span<const double> row) const {
    std::vector<double> out(row.size());
    for (std::size_t d = 0; d < row.size(); ++d) {
        out[d] = (row[d] - mean[d]) / scale[d];
    }
    return out;
}

double SvmModel::decision_value(std::span<const double> row) const {
    const auto z = standardizer.apply(row);
    double sum = bias;
    for (std::size_t i = 0; i < support_vectors.size(); ++i) {
        sum += alphas[i] * labels[i] * kernel(support_vectors[i], z);
    }
    return sum;
}

nlohmann::json SvmModel::to_json() const {
    return {
        {"kernel", kernel.name()},
        {"gamma", kernel.gamma},
        {"C", C},
        {"bias", bias},
        {"mean", standardizer.mean},
        {"scale", standardizer.scale},
        {"support_vectors", support_vectors},
        {"alphas", alphas},
        {"labels", labels},
        {"iterations", iterations},
        {"kkt_violation", kkt_violation},
        {"converged", converged},
    };
}

namespace {

void check_dataset(const Dataset& ds) {
    if (ds.rows.size() != ds.labels.size()) {
        throw ValidationError("dataset has " + std::to_string(ds.rows.size()) + " rows but " +
                              std::to_string(ds.labels.size()) + " labels");
    }
    if (ds.rows.size() < 2) {
        throw ValidationError("training needs at least two rows");
    }
    const auto dim = ds.dimension();
    bool has_easy = false;
    bool has_hard = false;
    for (std::size_t i = 0; i < ds.rows.size(); ++i) {
        if (ds.rows[i].size() != dim) {
            throw ValidationError("row " + std::to_string(i) + " has dimension " + std::to_string(ds.rows[i].size()) +
                                  ", expected " + std::to_string(dim));
        }
        for (double v : ds.rows[i]) {
            if (!std::isfinite(v)) {
                throw ValidationError("row " + std::to_string(i) + " holds a non-finite value");
            }
        }
        if (ds.labels[i] == easy_label) {
            has_easy = true;
        } else if (ds.labels[i] == hard_label) {
            has_hard = true;
        } else {
            throw ValidationError("labels must be -1 (easy) or +1 (hard)");
        }
    }
    if (!has_easy || !has_hard) {
        throw ValidationError("training data holds a single class; both easy and hard rows are required");
    }
}

}  // namespace

SvmModel train(const Dataset& ds, const KernelSpec& kernel, const TrainOptions& options) {
    check_dataset(ds);
    if (!(options.C > 0.0)) {
        throw ValidationError("C must be positive");
    }
    if (kernel.kind == KernelKind::rbf && !(kernel.gamma > 0.0)) {
        throw ValidationError("rbf gamma must be positive");
    }
    const auto n = ds.size();
    const double C = options.C;
    SvmModel model;
    model.kernel = kernel;
    model.C = C;
    model.standardizer = Standardizer::fit(ds.rows);

    std::vector<std::vector<double>> z;
    z.reserve(n);
    for (const auto& r : ds.rows) {
        z.push_back(model.standardizer.apply(r));
    }
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = ds.labels[i];
    }
    // Q_ij = y_i y_j k(z_i, z_j)
    std::vector<double> Q(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            Q[i * n + j] = Q[j * n + i] = y[i] * y[j] * kernel(z[i], z[j]);
        }
    }

    constexpr double tau = 1e-12;
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // Q alpha - e
    auto in_up = [&](std::size_t t) { return (y[t] > 0 && alpha[t] < C) || (y[t] < 0 && alpha[t] > 0); };
    auto in_low = [&](std::size_t t) { return (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < C); };

    std::size_t updates = 0;
    double gap = 0.0;
    while (true) {
        std::size_t i = n;
        std::size_t j = n;
        double up_max = -std::numeric_limits<double>::infinity();
        double low_min = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -y[t] * grad[t];
            if (in_up(t) && v > up_max) {
                up_max = v;
                i = t;
            }
            if (in_low(t) && v < low_min) {
                low_min = v;
                j = t;
            }
        }
        gap = (i == n || j == n) ? 0.0 : up_max - low_min;
        if (gap < options.tol || updates >= options.max_updates) {
            break;
        }
        ++updates;

        const double old_i = alpha[i];
        const double old_j = alpha[j];
        const double* Qi = &Q[i * n];
        const double* Qj = &Q[j * n];
        if (y[i] != y[j]) {
            double quad = Qi[i] + Qj[j] + 2.0 * Qi[j];
            if (quad <= 0.0) {
                quad = tau;
            }
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = C - diff;
                }
            } else if (alpha[j] > C) {
                alpha[j] = C;
                alpha[i] = C + diff;
            }
        } else {
            double quad = Qi[i] + Qj[j] - 2.0 * Qi[j];
            if (quad <= 0.0) {
                quad = tau;
            }
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = sum - C;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > C) {
                if (alpha[j] > C) {
                    alpha[j] = C;
                    alpha[i] = sum - C;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        const double di = alpha[i] - old_i;
        const double dj = alpha[j] - old_j;
        for (std::size_t t = 0; t < n; ++t) {
            grad[t] += Qi[t] * di + Qj[t] * dj;
        }
    }

    // Offset from the free variables, or the midpoint of the feasible interval.
    double upper = std::numeric_limits<double>::infinity();
    double lower = -upper;
    double free_sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        if (alpha[t] >= C) {
            if (y[t] < 0) {
                upper = std::min(upper, yg);
            } else {
                lower = std::max(lower, yg);
            }
        } else if (alpha[t] <= 0.0) {
            if (y[t] > 0) {
                upper = std::min(upper, yg);
            } else {
                lower = std::max(lower, yg);
            }
        } else {
            free_sum += yg;
            ++free_count;
        }
    }
    const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (upper + lower) / 2.0;
    model.bias = -rho;
    model.iterations = updates;
    model.kkt_violation = gap;
    model.converged = gap < options.tol;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 0.0) {
            model.support_vectors.push_back(z[t]);
            model.alphas.push_back(alpha[t]);
            model.labels.push_back(ds.labels[t]);
        }
    }
    return model;
}

Prediction predict(const SvmModel& model, std::span<const double> row) {
    if (row.size() != model.standardizer.mean.size()) {
        throw ValidationError("row has dimension " + std::to_string(row.size()) + ", model expects " +
                              std::to_string(model.standardizer.mean.size()));
    }
    const double f = model.decision_value(row);
    return Prediction{f >= 0.0 ? hard_label : easy_label, f};
}

double training_accuracy(const SvmModel& model, const Dataset& ds) {
    if (ds.size() == 0) {
        return 0.0;
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (predict(model, ds.rows[i]).label == ds.labels[i]) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(ds.size());
}

std::vector<std::vector<FeatureId>> feature_combinations(std::size_t k) {
    std::vector<std::vector<FeatureId>> out;
    if (k == 0 || k > feature_count) {
        return out;
    }
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        std::vector<FeatureId> combo;
        for (auto i : idx) {
            combo.push_back(all_features[i]);
        }
        out.push_back(std::move(combo));
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == feature_count - k + pos - 1) {
            --pos;
        }
        if (pos == 0) {
            break;
        }
        ++idx[pos - 1];
        for (std::size_t q = pos; q < k; ++q) {
            idx[q] = idx[q - 1] + 1;
        }
    }
    return out;
}

Dataset build_dataset(const Population& easy, const Population& hard, const std::vector<FeatureId>& features) {
    Dataset ds;
    ds.feature_ids = features;
    auto add = [&](const Population& pop, int label) {
        for (const auto& m : pop) {
            std::vector<double> row;
            row.reserve(features.size());
            for (auto f : features) {
                row.push_back(m.features[f]);
            }
            ds.rows.push_back(std::move(row));
            ds.labels.push_back(label);
        }
    };
    add(easy, easy_label);
    add(hard, hard_label);
    return ds;
}

namespace {

std::pair<Dataset, Dataset> holdout_split(const Dataset& ds, double fraction, RandomSource& rng) {
    Dataset train_part{{}, {}, ds.feature_ids};
    Dataset test_part{{}, {}, ds.feature_ids};
    for (int label : {easy_label, hard_label}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (ds.labels[i] == label) {
                idx.push_back(i);
            }
        }
        std::shuffle(idx.begin(), idx.end(), rng.engine());
        const auto held = static_cast<std::size_t>(std::round(fraction * static_cast<double>(idx.size())));
        for (std::size_t p = 0; p < idx.size(); ++p) {
            auto& target = p < held ? test_part : train_part;
            target.rows.push_back(ds.rows[idx[p]]);
            target.labels.push_back(label);
        }
    }
    return {std::move(train_part), std::move(test_part)};
}

}  // namespace

std::vector<SweepRow> combination_sweep(const Population& easy, const Population& hard, const SweepOptions& options) {
    if (easy.empty() || hard.empty()) {
        throw ValidationError("combination sweep needs both easy and hard instances");
    }
    if (!(options.holdout_fraction >= 0.0 && options.holdout_fraction < 1.0)) {
        throw ValidationError("holdout fraction must lie in [0, 1)");
    }
    // Group by instance size unless pooled; key 0 stands for the pooled group.
    std::map<std::size_t, std::pair<Population, Population>> groups;
    for (const auto& m : easy) {
        groups[options.pooled ? 0 : m.inst.size()].first.push_back(m);
    }
    for (const auto& m : hard) {
        groups[options.pooled ? 0 : m.inst.size()].second.push_back(m);
    }

    std::vector<SweepRow> rows;
    for (auto k : options.combo_sizes) {
        for (const auto& combo : feature_combinations(k)) {
            for (const auto& [n, group] : groups) {
                SweepRow row{combo, n, options.kernel, options.C, 0.0, 0, {}};
                try {
                    const auto ds = build_dataset(group.first, group.second, combo);
                    if (options.holdout_fraction > 0.0) {
                        RandomSource rng(derive_seed(options.seed, {n, k}));
                        const auto [train_part, test_part] = holdout_split(ds, options.holdout_fraction, rng);
                        const auto model = train(train_part, options.kernel, TrainOptions{options.C});
                        row.accuracy = training_accuracy(model, test_part);
                        row.support_vectors = model.support_vectors.size();
                    } else {
                        const auto model = train(ds, options.kernel, TrainOptions{options.C});
                        row.accuracy = training_accuracy(model, ds);
                        row.support_vectors = model.support_vectors.size();
                    }
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "feature_1,feature_2,feature_3,n,kernel,C,gamma,accuracy,support_vector_count,status\n";
    for (const auto& r : rows) {
        std::vector<std::string> f;
        for (std::size_t i = 0; i < 3; ++i) {
            f.push_back(i < r.features.size() ? std::string(feature_name(r.features[i])) : std::string{});
        }
        f.push_back(r.n == 0 ? std::string("pooled") : std::to_string(r.n));
        f.push_back(r.kernel.name());
        f.push_back(csv::format_double(r.C));
        f.push_back(r.kernel.kind == KernelKind::rbf ? csv::format_double(r.kernel.gamma) : std::string{});
        if (r.ok()) {
            f.push_back(csv::format_double(r.accuracy));
            f.push_back(std::to_string(r.support_vectors));
            f.push_back("ok");
        } else {
            std::string msg = r.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            f.push_back({});
            f.push_back({});
            f.push_back("error: " + msg);
        }
        out += csv::join(f) + "\n";
    }
    return out;
}

}  // namespace instance_forge
