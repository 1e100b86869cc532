#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "instance_forge/instance.hpp"

namespace instance_forge {

/// The seven instance features. Order is the canonical column order.
enum class FeatureId : int {
    angle_mean = 0,
    centroid_mean_distance_to_centroid,
    chull_area,
    cluster_10pct_mean_distance_to_centroid,
    mst_depth_mean,
    nnds_mean,
    mst_dists_mean,
};

inline constexpr std::size_t feature_count = 7;

inline constexpr std::array<FeatureId, feature_count> all_features = {
    FeatureId::angle_mean,
    FeatureId::centroid_mean_distance_to_centroid,
    FeatureId::chull_area,
    FeatureId::cluster_10pct_mean_distance_to_centroid,
    FeatureId::mst_depth_mean,
    FeatureId::nnds_mean,
    FeatureId::mst_dists_mean,
};

std::string_view feature_name(FeatureId f) noexcept;
/// Throws ValidationError for unknown names.
FeatureId parse_feature(std::string_view name);

/// Upper bound R on the feature's value in the unit square. Only
/// mst_depth_mean depends on the instance size n.
double feature_bound(FeatureId f, std::size_t n);

class FeatureVector {
public:
    FeatureVector() { values_.fill(0.0); }

    double operator[](FeatureId f) const noexcept { return values_[static_cast<std::size_t>(f)]; }
    double& operator[](FeatureId f) noexcept { return values_[static_cast<std::size_t>(f)]; }
    const std::array<double, feature_count>& values() const noexcept { return values_; }

    /// Set when some angle had a zero-length leg (coincident cities).
    bool degenerate = false;

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

private:
    std::array<double, feature_count> values_;
};

struct MstEdge {
    int from = 0;
    int to = 0;
    double weight = 0.0;
};

struct MstResult {
    std::vector<MstEdge> edges;  // edges[k].from is the parent of edges[k].to
    std::vector<int> parent;     // parent[root] == root
    int root = 0;

    double total_weight() const noexcept;
    /// Edge count from the root, per city.
    std::vector<int> depths() const;
};

/// Prim's algorithm from city 0 on the complete Euclidean graph. Among equal
/// candidate distances the smallest city index is attached first.
MstResult minimum_spanning_tree(const TspInstance& inst);

double mst_dists_mean(const TspInstance& inst);
double mst_depth_mean(const TspInstance& inst);

/// Counter-clockwise hull vertices (monotone chain); collinear points dropped.
std::vector<Point> convex_hull(std::span<const Point> points);
double polygon_area(std::span<const Point> polygon);
double convex_hull_area(const TspInstance& inst);

double nnds_mean(const TspInstance& inst);

struct AngleStats {
    double mean = 0.0;
    std::size_t degenerate_count = 0;
};

/// Angle at each city between its two nearest neighbours (ties by index).
AngleStats angle_statistics(const TspInstance& inst);
double angle_mean(const TspInstance& inst);

double centroid_mean_distance_to_centroid(const TspInstance& inst);

struct ClusterAssignment {
    std::vector<int> label;         // per city; noise cities get their own label
    std::vector<Point> centroids;   // indexed by label
};

/// Density clustering: a city is core when its closed eps-ball holds at least
/// `min_points` cities; clusters are the density-reachable closures of core
/// cities; remaining cities become singleton clusters. Labels are numbered in
/// discovery order, with the singleton labels after all dense clusters.
ClusterAssignment density_clusters(const TspInstance& inst, double eps, std::size_t min_points);

inline constexpr double cluster_reachability_eps = 0.14142135623730950488;  // 0.1 * sqrt(2)
inline constexpr std::size_t cluster_min_points = 2;

double cluster_10pct_mean_distance_to_centroid(const TspInstance& inst);

FeatureVector compute_all(const TspInstance& inst);
double compute_feature(const TspInstance& inst, FeatureId f);

}  // namespace instance_forge
