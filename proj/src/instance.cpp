#include "instance_forge/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "instance_forge/errors.hpp"

namespace instance_forge {

double distance(Point a, Point b) noexcept {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

bool in_unit_square(Point p) noexcept {
    return p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0;
}

TspInstance::TspInstance(std::vector<Point> cities, std::string id)
    : cities_(std::move(cities)), id_(std::move(id)) {
    if (cities_.size() < min_cities) {
        throw ValidationError("instance needs at least 3 cities, got " + std::to_string(cities_.size()));
    }
    for (std::size_t i = 0; i < cities_.size(); ++i) {
        if (!in_unit_square(cities_[i])) {
            throw ValidationError("city " + std::to_string(i) + " lies outside [0,1]^2");
        }
    }
}

TspInstance TspInstance::with_city(std::size_t index, Point p) const {
    auto cities = cities_;
    cities.at(index) = p;
    return TspInstance(std::move(cities), id_);
}

TspInstance TspInstance::with_id(std::string id) const {
    return TspInstance(cities_, std::move(id));
}

Tour::Tour(std::vector<int> order) : order_(std::move(order)) {
    std::vector<char> seen(order_.size(), 0);
    for (int c : order_) {
        if (c < 0 || static_cast<std::size_t>(c) >= order_.size() || seen[static_cast<std::size_t>(c)]) {
            throw ValidationError("tour is not a permutation of 0.." + std::to_string(order_.size()) + "-1");
        }
        seen[static_cast<std::size_t>(c)] = 1;
    }
}

Tour Tour::identity(std::size_t n) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    return Tour(std::move(order));
}

double tour_length(const TspInstance& inst, const Tour& tour) {
    if (tour.size() != inst.size()) {
        throw ValidationError("tour size " + std::to_string(tour.size()) + " does not match instance size " +
                              std::to_string(inst.size()));
    }
    const auto n = tour.size();
    double length = distance(inst[tour[n - 1]], inst[tour[0]]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        length += distance(inst[tour[i]], inst[tour[i + 1]]);
    }
    return length;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> streams) noexcept {
    std::uint64_t h = splitmix64(base);
    for (auto s : streams) {
        h = splitmix64(h ^ splitmix64(s + 0x632be59bd9b4e019ULL));
    }
    return h;
}

double RandomSource::uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

std::size_t RandomSource::uniform_index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
}

double RandomSource::normal(double mean, double stddev) {
    return std::normal_distribution<double>(mean, stddev)(engine_);
}

bool RandomSource::bernoulli(double p) {
    return std::bernoulli_distribution(p)(engine_);
}

TspInstance random_instance(std::size_t n, RandomSource& rng) {
    if (n < TspInstance::min_cities) {
        throw ValidationError("random_instance needs n >= 3, got " + std::to_string(n));
    }
    std::vector<Point> cities(n);
    for (auto& c : cities) {
        c.x = rng.uniform();
        c.y = rng.uniform();
    }
    return TspInstance(std::move(cities));
}

Tour random_tour(std::size_t n, RandomSource& rng) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng.engine());
    return Tour(std::move(order));
}

}  // namespace instance_forge
