#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace instance_forge {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Euclidean distance.
double distance(Point a, Point b) noexcept;

/// True when both coordinates lie in the closed unit interval.
bool in_unit_square(Point p) noexcept;

/// A Euclidean TSP instance with all cities in [0,1]^2 and at least 3 cities.
class TspInstance {
public:
    static constexpr std::size_t min_cities = 3;

    explicit TspInstance(std::vector<Point> cities, std::string id = {});

    std::size_t size() const noexcept { return cities_.size(); }
    std::span<const Point> cities() const noexcept { return cities_; }
    const Point& operator[](std::size_t i) const { return cities_[i]; }
    const std::string& id() const noexcept { return id_; }

    /// Copy of this instance with city `index` moved to `p`.
    TspInstance with_city(std::size_t index, Point p) const;
    TspInstance with_id(std::string id) const;

    friend bool operator==(const TspInstance&, const TspInstance&) = default;

private:
    std::vector<Point> cities_;
    std::string id_;
};

/// A permutation of city indices.
class Tour {
public:
    /// Throws ValidationError unless `order` is a permutation of 0..n-1.
    explicit Tour(std::vector<int> order);

    static Tour identity(std::size_t n);

    std::size_t size() const noexcept { return order_.size(); }
    std::span<const int> order() const noexcept { return order_; }
    int operator[](std::size_t i) const { return order_[i]; }

    friend bool operator==(const Tour&, const Tour&) = default;

private:
    std::vector<int> order_;
};

/// Cycle length of `tour` over `inst`. Throws ValidationError on size mismatch.
double tour_length(const TspInstance& inst, const Tour& tour);

/// Mixes a base seed with a sequence of stream identifiers (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> streams) noexcept;

/// Seeded pseudo-random stream. Single owner; pass by reference or split.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    /// Uniform in [0, 1).
    double uniform();
    /// Uniform integer in [lo, hi].
    std::size_t uniform_index(std::size_t lo, std::size_t hi);
    double normal(double mean = 0.0, double stddev = 1.0);
    bool bernoulli(double p);
    std::uint64_t next_u64() { return engine_(); }

    /// Independent child stream; does not advance this stream.
    RandomSource child(std::uint64_t stream) const { return RandomSource(derive_seed(seed_, {stream})); }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// n cities i.i.d. uniform on [0,1]^2.
TspInstance random_instance(std::size_t n, RandomSource& rng);

/// Uniformly random permutation of 0..n-1.
Tour random_tour(std::size_t n, RandomSource& rng);

}  // namespace instance_forge
