#pragma once

#include <cstddef>

#include "instance_forge/instance.hpp"

namespace instance_forge {

/// Improvements smaller than this are treated as floating-point noise.
inline constexpr double two_opt_epsilon = 1e-10;

/// 2-OPT local search, first improvement. Position pairs (i, j), i < j, are
/// scanned lexicographically; the move replaces edges (t[i], t[i+1]) and
/// (t[j], t[j+1]) by (t[i], t[j]) and (t[i+1], t[j+1]) by reversing
/// t[i+1..j], and the scan restarts from the beginning after every move.
Tour two_opt(const TspInstance& inst, Tour start);

struct SolveReport {
    Tour best_tour;
    double length = 0.0;       // best local optimum
    double mean_length = 0.0;  // A(I)
    std::size_t restarts = 0;
};

inline constexpr std::size_t default_restarts = 5;

/// Runs 2-OPT from `runs` uniformly random tours. Restart k draws its start
/// tour from a child stream keyed by k, so results do not depend on order.
SolveReport two_opt_mean_quality(const TspInstance& inst, std::size_t runs, RandomSource& rng);

inline constexpr std::size_t default_max_exact = 16;

/// Held-Karp dynamic programme over subsets. Throws CapacityError when
/// inst.size() > max_exact.
double exact_optimum(const TspInstance& inst, std::size_t max_exact = default_max_exact);

}  // namespace instance_forge
