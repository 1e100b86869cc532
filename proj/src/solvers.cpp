#include "instance_forge/solvers.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "instance_forge/errors.hpp"

namespace instance_forge {

namespace {

class DistanceMatrix {
public:
    explicit DistanceMatrix(const TspInstance& inst) : n_(inst.size()), d_(n_ * n_) {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = i + 1; j < n_; ++j) {
                d_[i * n_ + j] = d_[j * n_ + i] = distance(inst[i], inst[j]);
            }
        }
    }

    double operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }

private:
    std::size_t n_;
    std::vector<double> d_;
};

}  // namespace

Tour two_opt(const TspInstance& inst, Tour start) {
    const auto n = inst.size();
    if (start.size() != n) {
        throw ValidationError("start tour size does not match instance size");
    }
    const DistanceMatrix d(inst);
    std::vector<int> t(start.order().begin(), start.order().end());
    auto at = [&](std::size_t pos) { return static_cast<std::size_t>(t[pos]); };

    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t i = 0; i + 2 < n && !improved; ++i) {
            for (std::size_t j = i + 2; j < n; ++j) {
                if (i == 0 && j == n - 1) {
                    continue;  // the two edges share city t[0]
                }
                const auto a = at(i);
                const auto b = at(i + 1);
                const auto c = at(j);
                const auto e = at((j + 1) % n);
                const double delta = d(a, c) + d(b, e) - d(a, b) - d(c, e);
                if (delta < -two_opt_epsilon) {
                    std::reverse(t.begin() + static_cast<std::ptrdiff_t>(i + 1),
                                 t.begin() + static_cast<std::ptrdiff_t>(j + 1));
                    improved = true;
                    break;
                }
            }
        }
    }
    return Tour(std::move(t));
}

SolveReport two_opt_mean_quality(const TspInstance& inst, std::size_t runs, RandomSource& rng) {
    if (runs == 0) {
        throw ValidationError("two_opt_mean_quality needs at least one run");
    }
    const auto base = rng.next_u64();
    std::vector<Tour> tours;
    std::vector<double> lengths;
    tours.reserve(runs);
    lengths.reserve(runs);
    for (std::size_t k = 0; k < runs; ++k) {
        RandomSource restart_rng(derive_seed(base, {k}));
        tours.push_back(two_opt(inst, random_tour(inst.size(), restart_rng)));
        lengths.push_back(tour_length(inst, tours.back()));
    }
    const auto best = static_cast<std::size_t>(std::min_element(lengths.begin(), lengths.end()) - lengths.begin());
    double total = 0.0;
    for (double l : lengths) {
        total += l;
    }
    return SolveReport{tours[best], lengths[best], total / static_cast<double>(runs), runs};
}

double exact_optimum(const TspInstance& inst, std::size_t max_exact) {
    const auto n = inst.size();
    if (n > max_exact) {
        throw CapacityError("exact solver supports at most " + std::to_string(max_exact) + " cities, instance has " +
                            std::to_string(n) + "; configure an external or cached optimal-tour oracle");
    }
    const DistanceMatrix d(inst);
    // City 0 is the fixed start; bit k of a mask stands for city k + 1.
    const std::size_t m = n - 1;
    const std::size_t full = (std::size_t{1} << m) - 1;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp((full + 1) * m, inf);
    auto cell = [&](std::size_t mask, std::size_t last) -> double& { return dp[mask * m + last]; };

    for (std::size_t k = 0; k < m; ++k) {
        cell(std::size_t{1} << k, k) = d(0, k + 1);
    }
    for (std::size_t mask = 1; mask <= full; ++mask) {
        for (std::size_t last = 0; last < m; ++last) {
            if (!(mask & (std::size_t{1} << last))) {
                continue;
            }
            const double base = cell(mask, last);
            if (base == inf) {
                continue;
            }
            for (std::size_t next = 0; next < m; ++next) {
                const auto bit = std::size_t{1} << next;
                if (mask & bit) {
                    continue;
                }
                double& target = cell(mask | bit, next);
                target = std::min(target, base + d(last + 1, next + 1));
            }
        }
    }
    double best = inf;
    for (std::size_t last = 0; last < m; ++last) {
        best = std::min(best, cell(full, last) + d(last + 1, 0));
    }
    return best;
}

}  // namespace instance_forge
