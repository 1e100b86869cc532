// Independent reference computations used only by tests. Nothing here calls
// into the library's algorithms; only the plain data types are shared.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "instance_forge/instance.hpp"

namespace oracle {

using instance_forge::Point;

inline double dist(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline double cycle_length(const std::vector<Point>& pts, const std::vector<int>& order) {
    double total = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        total += dist(pts[static_cast<std::size_t>(order[i])], pts[static_cast<std::size_t>(order[(i + 1) % order.size()])]);
    }
    return total;
}

/// Minimum over all (n-1)!/2 distinct Hamiltonian cycles: city 0 fixed first,
/// and each direction counted once by requiring order[1] < order[n-1].
inline double brute_force_tsp(const std::vector<Point>& pts) {
    const int n = static_cast<int>(pts.size());
    std::vector<int> rest(static_cast<std::size_t>(n - 1));
    std::iota(rest.begin(), rest.end(), 1);
    double best = std::numeric_limits<double>::infinity();
    do {
        if (rest.front() > rest.back()) {
            continue;
        }
        std::vector<int> order{0};
        order.insert(order.end(), rest.begin(), rest.end());
        best = std::min(best, cycle_length(pts, order));
    } while (std::next_permutation(rest.begin(), rest.end()));
    return best;
}

/// Minimum spanning tree weight over all n^(n-2) labelled trees, decoded from
/// Pruefer sequences.
inline double brute_force_mst_weight(const std::vector<Point>& pts) {
    const std::size_t n = pts.size();
    if (n == 2) {
        return dist(pts[0], pts[1]);
    }
    std::vector<std::size_t> seq(n - 2, 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        std::vector<int> degree(n, 1);
        for (auto s : seq) {
            ++degree[s];
        }
        double weight = 0.0;
        for (auto s : seq) {
            std::size_t leaf = 0;
            while (degree[leaf] != 1) {
                ++leaf;
            }
            weight += dist(pts[leaf], pts[s]);
            --degree[leaf];
            --degree[s];
        }
        std::size_t u = n;
        std::size_t v = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (degree[i] == 1) {
                (u == n ? u : v) = i;
            }
        }
        weight += dist(pts[u], pts[v]);
        best = std::min(best, weight);

        std::size_t pos = 0;
        while (pos < seq.size() && ++seq[pos] == n) {
            seq[pos++] = 0;
        }
        if (pos == seq.size()) {
            break;
        }
    }
    return best;
}

/// Counts improving 2-exchanges by checking every pair of non-adjacent tour edges.
inline std::size_t count_improving_two_exchanges(const std::vector<Point>& pts, const std::vector<int>& tour,
                                                 double threshold) {
    const std::size_t n = tour.size();
    auto p = [&](std::size_t pos) { return pts[static_cast<std::size_t>(tour[pos % n])]; };
    std::size_t count = 0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            // Edges (a, a+1) and (b, b+1) must not share a city.
            if (b == a + 1 || (a + n) == b + 1) {
                continue;
            }
            const double removed = dist(p(a), p(a + 1)) + dist(p(b), p(b + 1));
            const double added = dist(p(a), p(b)) + dist(p(a + 1), p(b + 1));
            if (added < removed - threshold) {
                ++count;
            }
        }
    }
    return count;
}

inline double reference_nnds_mean(const std::vector<Point>& pts) {
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<double> d;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (i != j) {
                d.push_back(dist(pts[i], pts[j]));
            }
        }
        total += *std::min_element(d.begin(), d.end());
    }
    return total / static_cast<double>(pts.size());
}

/// Angle between the two nearest neighbours via atan2 of cross and dot products.
inline double reference_angle_mean(const std::vector<Point>& pts) {
    double total = 0.0;
    for (std::size_t c = 0; c < pts.size(); ++c) {
        std::vector<std::pair<double, std::size_t>> ranked;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j != c) {
                ranked.emplace_back(dist(pts[c], pts[j]), j);
            }
        }
        std::sort(ranked.begin(), ranked.end());
        const auto& a = pts[ranked[0].second];
        const auto& b = pts[ranked[1].second];
        const double ux = a.x - pts[c].x;
        const double uy = a.y - pts[c].y;
        const double vx = b.x - pts[c].x;
        const double vy = b.y - pts[c].y;
        total += std::abs(std::atan2(ux * vy - uy * vx, ux * vx + uy * vy));
    }
    return total / static_cast<double>(pts.size());
}

inline double reference_centroid_distance(const std::vector<Point>& pts) {
    long double cx = 0.0L;
    long double cy = 0.0L;
    for (const auto& p : pts) {
        cx += p.x;
        cy += p.y;
    }
    const Point c{static_cast<double>(cx / pts.size()), static_cast<double>(cy / pts.size())};
    double total = 0.0;
    for (const auto& p : pts) {
        total += dist(p, c);
    }
    return total / static_cast<double>(pts.size());
}

/// Density clusters by transitive closure (Floyd-Warshall) over eps-links
/// between points that each have at least one other point within eps
/// (minimum neighbourhood 2 including the point itself).
inline double reference_cluster_centroid_distance(const std::vector<Point>& pts, double eps) {
    const std::size_t n = pts.size();
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        reach[i][i] = 1;
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && dist(pts[i], pts[j]) <= eps) {
                reach[i][j] = 1;
            }
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (reach[i][k] && reach[k][j]) {
                    reach[i][j] = 1;
                }
            }
        }
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double cx = 0.0;
        double cy = 0.0;
        double count = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (reach[i][j]) {
                cx += pts[j].x;
                cy += pts[j].y;
                count += 1.0;
            }
        }
        total += dist(pts[i], {cx / count, cy / count});
    }
    return total / static_cast<double>(n);
}

}  // namespace oracle
