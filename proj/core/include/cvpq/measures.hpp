#pragma once

// Finite mixtures of isotropic Gaussians over R^k. Every probability
// measure handled by the library is one of these; sigma == 0 is a point mass.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace cvpq {

using Point = std::vector<double>;

/// One isotropic normal N(center, sigma^2 I). sigma == 0 is a Dirac mass.
class GaussianComponent {
public:
    GaussianComponent(Point center, double sigma);

    const Point& center() const noexcept { return center_; }
    double sigma() const noexcept { return sigma_; }
    std::size_t dimension() const noexcept { return center_.size(); }

    bool is_point_mass() const noexcept { return sigma_ == 0.0; }

    friend bool operator==(const GaussianComponent&, const GaussianComponent&) = default;

private:
    Point center_;
    double sigma_;
};

struct WeightedComponent {
    double weight;
    GaussianComponent component;
};

/// Weighted finite mixture of GaussianComponents of a common dimension.
/// Weights lie in (0, 1] and sum to 1 within kWeightTolerance.
class MixtureMeasure {
public:
    static constexpr double kWeightTolerance = 1e-12;

    explicit MixtureMeasure(std::vector<WeightedComponent> components);

    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return components_.size(); }
    const std::vector<WeightedComponent>& components() const noexcept { return components_; }

    bool has_point_mass() const noexcept;

    /// Components sorted lexicographically by (center, sigma) with exact
    /// duplicates merged. Two measures describe the same mixture iff their
    /// canonical forms match.
    MixtureMeasure canonical() const;
    /// True when already sorted and merged (built by canonical() or marginalize).
    bool is_canonical() const noexcept { return canonical_; }

private:
    struct Trusted {};
    MixtureMeasure(Trusted, std::size_t dimension, std::vector<WeightedComponent> components);

    std::size_t dimension_ = 0;
    std::vector<WeightedComponent> components_;
    bool canonical_ = false;

    friend MixtureMeasure marginalize(const MixtureMeasure&, std::span<const std::size_t>);
};

/// Largest absolute discrepancy in weight, center coordinate, or sigma
/// between the canonical forms of a and b. Infinity when the component
/// counts or dimensions differ.
double mixture_distance(const MixtureMeasure& a, const MixtureMeasure& b);

MixtureMeasure normal_measure(Point center, double sigma);

/// Flattens a weighted list of mixtures into one. Weights must be positive
/// and sum to 1 within MixtureMeasure::kWeightTolerance; nothing is renormalized.
MixtureMeasure mix(std::span<const std::pair<double, MixtureMeasure>> entries);
MixtureMeasure mix(std::initializer_list<std::pair<double, MixtureMeasure>> entries);

/// Projects onto the coordinates listed in keep (0-based, distinct, in the
/// given order). Components whose projected centers and sigmas coincide
/// exactly are merged.
MixtureMeasure marginalize(const MixtureMeasure& measure, std::span<const std::size_t> keep);
MixtureMeasure marginalize(const MixtureMeasure& measure, std::initializer_list<std::size_t> keep);

/// E[x^n] for x ~ N(mean, sigma^2), via M_n = mean M_{n-1} + (n-1) sigma^2 M_{n-2}.
double normal_raw_moment(unsigned n, double mean, double sigma);

/// Exact product moment E[prod_i x_i^{n_i}] of the mixture.
double moment(const MixtureMeasure& measure, std::span<const unsigned> exponents);
double moment(const MixtureMeasure& measure, std::initializer_list<unsigned> exponents);

/// Mixture density at point. Throws UndefinedDensity if any component is a point mass.
double density_at(const MixtureMeasure& measure, std::span<const double> point);

/// Draws points from a mixture using a caller-owned engine. Component
/// selection uses the cumulative weight table; point masses return the
/// center exactly.
class MixtureSampler {
public:
    explicit MixtureSampler(const MixtureMeasure& measure);

    void draw(std::mt19937_64& engine, std::span<double> out) const;

    std::size_t dimension() const noexcept { return measure_->dimension(); }

private:
    const MixtureMeasure* measure_;
    std::vector<double> cumulative_;
};

/// Seed scrambler used everywhere a 64-bit seed feeds an engine.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// count independent draws; identical output for identical (measure, count, seed).
std::vector<Point> sample(const MixtureMeasure& measure, std::size_t count, std::uint64_t seed);

}  // namespace cvpq
