#include "instance_forge/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "instance_forge/errors.hpp"

namespace instance_forge {

namespace {

constexpr std::array<std::string_view, feature_count> feature_names = {
    "angle_mean",
    "centroid_mean_distance_to_centroid",
    "chull_area",
    "cluster_10pct_mean_distance_to_centroid",
    "mst_depth_mean",
    "nnds_mean",
    "mst_dists_mean",
};

constexpr double collinear_tolerance = 1e-12;

double cross(Point o, Point a, Point b) noexcept {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

Point centroid_of(std::span<const Point> pts) {
    Point c;
    for (const auto& p : pts) {
        c.x += p.x;
        c.y += p.y;
    }
    c.x /= static_cast<double>(pts.size());
    c.y /= static_cast<double>(pts.size());
    return c;
}

}  // namespace

std::string_view feature_name(FeatureId f) noexcept {
    return feature_names[static_cast<std::size_t>(f)];
}

FeatureId parse_feature(std::string_view name) {
    for (std::size_t i = 0; i < feature_count; ++i) {
        if (feature_names[i] == name) {
            return all_features[i];
        }
    }
    throw ValidationError("unknown feature '" + std::string(name) + "'");
}

double feature_bound(FeatureId f, std::size_t n) {
    switch (f) {
        case FeatureId::angle_mean:
            return std::numbers::pi;
        case FeatureId::chull_area:
            return 1.0;
        case FeatureId::mst_depth_mean:
            return n > 0 ? static_cast<double>(n - 1) : 0.0;
        case FeatureId::centroid_mean_distance_to_centroid:
        case FeatureId::cluster_10pct_mean_distance_to_centroid:
        case FeatureId::nnds_mean:
        case FeatureId::mst_dists_mean:
            return std::numbers::sqrt2;
    }
    return 0.0;
}

double MstResult::total_weight() const noexcept {
    double total = 0.0;
    for (const auto& e : edges) {
        total += e.weight;
    }
    return total;
}

std::vector<int> MstResult::depths() const {
    // Edges are stored in insertion order, so a parent's depth is known first.
    std::vector<int> depth(parent.size(), 0);
    for (const auto& e : edges) {
        depth[static_cast<std::size_t>(e.to)] = depth[static_cast<std::size_t>(e.from)] + 1;
    }
    return depth;
}

MstResult minimum_spanning_tree(const TspInstance& inst) {
    const auto n = inst.size();
    const auto pts = inst.cities();
    MstResult result;
    result.root = 0;
    result.parent.assign(n, 0);
    result.edges.reserve(n - 1);

    std::vector<double> key(n, std::numeric_limits<double>::infinity());
    std::vector<char> in_tree(n, 0);
    in_tree[0] = 1;
    for (std::size_t v = 1; v < n; ++v) {
        key[v] = distance(pts[0], pts[v]);
    }
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t best = n;
        for (std::size_t v = 0; v < n; ++v) {
            if (!in_tree[v] && (best == n || key[v] < key[best])) {
                best = v;
            }
        }
        in_tree[best] = 1;
        result.edges.push_back({result.parent[best], static_cast<int>(best), key[best]});
        for (std::size_t v = 0; v < n; ++v) {
            if (in_tree[v]) {
                continue;
            }
            const double d = distance(pts[best], pts[v]);
            if (d < key[v]) {
                key[v] = d;
                result.parent[v] = static_cast<int>(best);
            }
        }
    }
    return result;
}

double mst_dists_mean(const TspInstance& inst) {
    const auto mst = minimum_spanning_tree(inst);
    return mst.total_weight() / static_cast<double>(mst.edges.size());
}

double mst_depth_mean(const TspInstance& inst) {
    const auto depth = minimum_spanning_tree(inst).depths();
    return std::accumulate(depth.begin(), depth.end(), 0.0) / static_cast<double>(depth.size());
}

std::vector<Point> convex_hull(std::span<const Point> points) {
    std::vector<Point> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) {
        return pts;
    }
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= collinear_tolerance) {
            --k;
        }
        hull[k++] = p;
    }
    const auto lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= collinear_tolerance) {
            --k;
        }
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

double polygon_area(std::span<const Point> polygon) {
    if (polygon.size() < 3) {
        return 0.0;
    }
    double twice = 0.0;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const auto& a = polygon[i];
        const auto& b = polygon[(i + 1) % polygon.size()];
        twice += a.x * b.y - b.x * a.y;
    }
    return std::abs(twice) / 2.0;
}

double convex_hull_area(const TspInstance& inst) {
    return polygon_area(convex_hull(inst.cities()));
}

double nnds_mean(const TspInstance& inst) {
    const auto pts = inst.cities();
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j != i) {
                nearest = std::min(nearest, distance(pts[i], pts[j]));
            }
        }
        total += nearest;
    }
    return total / static_cast<double>(pts.size());
}

AngleStats angle_statistics(const TspInstance& inst) {
    const auto pts = inst.cities();
    const auto n = pts.size();
    AngleStats stats;
    double total = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        // Two nearest other cities; strict comparisons keep the smaller index on ties.
        std::size_t first = n;
        std::size_t second = n;
        double d_first = std::numeric_limits<double>::infinity();
        double d_second = d_first;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == c) {
                continue;
            }
            const double d = distance(pts[c], pts[j]);
            if (d < d_first) {
                second = first;
                d_second = d_first;
                first = j;
                d_first = d;
            } else if (d < d_second) {
                second = j;
                d_second = d;
            }
        }
        const double ax = pts[first].x - pts[c].x;
        const double ay = pts[first].y - pts[c].y;
        const double bx = pts[second].x - pts[c].x;
        const double by = pts[second].y - pts[c].y;
        const double norms = std::sqrt(ax * ax + ay * ay) * std::sqrt(bx * bx + by * by);
        if (norms == 0.0) {
            ++stats.degenerate_count;
            continue;
        }
        total += std::acos(std::clamp((ax * bx + ay * by) / norms, -1.0, 1.0));
    }
    stats.mean = total / static_cast<double>(n);
    return stats;
}

double angle_mean(const TspInstance& inst) {
    return angle_statistics(inst).mean;
}

double centroid_mean_distance_to_centroid(const TspInstance& inst) {
    const auto pts = inst.cities();
    const auto c = centroid_of(pts);
    double total = 0.0;
    for (const auto& p : pts) {
        total += distance(p, c);
    }
    return total / static_cast<double>(pts.size());
}

ClusterAssignment density_clusters(const TspInstance& inst, double eps, std::size_t min_points) {
    const auto pts = inst.cities();
    const auto n = pts.size();
    std::vector<std::vector<std::size_t>> neighbours(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (distance(pts[i], pts[j]) <= eps) {
                neighbours[i].push_back(j);
            }
        }
    }
    auto is_core = [&](std::size_t i) { return neighbours[i].size() >= min_points; };

    constexpr int unlabeled = -1;
    ClusterAssignment out;
    out.label.assign(n, unlabeled);
    int next_label = 0;
    std::vector<std::size_t> frontier;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (out.label[seed] != unlabeled || !is_core(seed)) {
            continue;
        }
        const int label = next_label++;
        out.label[seed] = label;
        frontier.assign(1, seed);
        while (!frontier.empty()) {
            const auto i = frontier.back();
            frontier.pop_back();
            if (!is_core(i)) {
                continue;
            }
            for (auto j : neighbours[i]) {
                if (out.label[j] == unlabeled) {
                    out.label[j] = label;
                    frontier.push_back(j);
                }
            }
        }
    }
    for (auto& l : out.label) {
        if (l == unlabeled) {
            l = next_label++;
        }
    }

    std::vector<std::vector<Point>> members(static_cast<std::size_t>(next_label));
    for (std::size_t i = 0; i < n; ++i) {
        members[static_cast<std::size_t>(out.label[i])].push_back(pts[i]);
    }
    out.centroids.reserve(members.size());
    for (const auto& m : members) {
        out.centroids.push_back(centroid_of(m));
    }
    return out;
}

double cluster_10pct_mean_distance_to_centroid(const TspInstance& inst) {
    const auto clusters = density_clusters(inst, cluster_reachability_eps, cluster_min_points);
    const auto pts = inst.cities();
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        total += distance(pts[i], clusters.centroids[static_cast<std::size_t>(clusters.label[i])]);
    }
    return total / static_cast<double>(pts.size());
}

FeatureVector compute_all(const TspInstance& inst) {
    FeatureVector fv;
    const auto angles = angle_statistics(inst);
    fv[FeatureId::angle_mean] = angles.mean;
    fv.degenerate = angles.degenerate_count > 0;
    fv[FeatureId::centroid_mean_distance_to_centroid] = centroid_mean_distance_to_centroid(inst);
    fv[FeatureId::chull_area] = convex_hull_area(inst);
    fv[FeatureId::cluster_10pct_mean_distance_to_centroid] = cluster_10pct_mean_distance_to_centroid(inst);

    const auto mst = minimum_spanning_tree(inst);
    const auto depth = mst.depths();
    fv[FeatureId::mst_depth_mean] =
        std::accumulate(depth.begin(), depth.end(), 0.0) / static_cast<double>(depth.size());
    fv[FeatureId::mst_dists_mean] = mst.total_weight() / static_cast<double>(mst.edges.size());
    fv[FeatureId::nnds_mean] = nnds_mean(inst);
    return fv;
}

double compute_feature(const TspInstance& inst, FeatureId f) {
    switch (f) {
        case FeatureId::angle_mean:
            return angle_mean(inst);
        case FeatureId::centroid_mean_distance_to_centroid:
            return centroid_mean_distance_to_centroid(inst);
        case FeatureId::chull_area:
            return convex_hull_area(inst);
        case FeatureId::cluster_10pct_mean_distance_to_centroid:
            return cluster_10pct_mean_distance_to_centroid(inst);
        case FeatureId::mst_depth_mean:
            return mst_depth_mean(inst);
        case FeatureId::nnds_mean:
            return nnds_mean(inst);
        case FeatureId::mst_dists_mean:
            return mst_dists_mean(inst);
    }
    return 0.0;
}

}  // namespace instance_forge
