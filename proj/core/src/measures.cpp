#include "cvpq/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>

#include "cvpq/errors.hpp"

namespace cvpq {

GaussianComponent::GaussianComponent(Point center, double sigma)
    : center_(std::move(center)), sigma_(sigma) {
    if (center_.empty()) throw InvalidParameter("gaussian component needs dimension >= 1");
    if (!(sigma_ >= 0.0) || !std::isfinite(sigma_))
        throw InvalidParameter("gaussian component sigma must be finite and >= 0, got " +
                               std::to_string(sigma_));
    for (double x : center_)
        if (!std::isfinite(x)) throw InvalidParameter("gaussian component center must be finite");
}

MixtureMeasure::MixtureMeasure(std::vector<WeightedComponent> components)
    : components_(std::move(components)) {
    if (components_.empty()) throw InvalidParameter("mixture needs at least one component");
    dimension_ = components_.front().component.dimension();
    double total = 0.0;
    for (const auto& [w, c] : components_) {
        if (c.dimension() != dimension_)
            throw InvalidParameter("mixture components have mismatched dimensions");
        if (!(w > 0.0) || w > 1.0)
            throw InvalidParameter("mixture weight outside (0, 1]: " + std::to_string(w));
        total += w;
    }
    if (std::abs(total - 1.0) > kWeightTolerance)
        throw InvalidParameter("mixture weights sum to " + std::to_string(total) + ", expected 1");
}

MixtureMeasure::MixtureMeasure(Trusted, std::size_t dimension,
                               std::vector<WeightedComponent> components)
    : dimension_(dimension), components_(std::move(components)), canonical_(true) {}

bool MixtureMeasure::has_point_mass() const noexcept {
    return std::any_of(components_.begin(), components_.end(),
                       [](const auto& wc) { return wc.component.is_point_mass(); });
}

namespace {

bool component_less(const WeightedComponent& a, const WeightedComponent& b) {
    const auto& ca = a.component.center();
    const auto& cb = b.component.center();
    if (ca != cb) return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
    return a.component.sigma() < b.component.sigma();
}

// Sorts and merges exact duplicates in place.
void canonicalize(std::vector<WeightedComponent>& comps) {
    std::sort(comps.begin(), comps.end(), component_less);
    std::vector<WeightedComponent> merged;
    merged.reserve(comps.size());
    for (auto& wc : comps) {
        if (!merged.empty() && merged.back().component == wc.component)
            merged.back().weight += wc.weight;
        else
            merged.push_back(std::move(wc));
    }
    comps = std::move(merged);
}

}  // namespace

MixtureMeasure MixtureMeasure::canonical() const {
    if (canonical_) return *this;
    auto comps = components_;
    canonicalize(comps);
    return MixtureMeasure(Trusted{}, dimension_, std::move(comps));
}

double mixture_distance(const MixtureMeasure& a, const MixtureMeasure& b) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (a.dimension() != b.dimension()) return inf;
    std::optional<MixtureMeasure> owned_a, owned_b;
    if (!a.is_canonical()) owned_a = a.canonical();
    if (!b.is_canonical()) owned_b = b.canonical();
    const auto& ca = owned_a ? *owned_a : a;
    const auto& cb = owned_b ? *owned_b : b;
    if (ca.size() != cb.size()) return inf;
    double worst = 0.0;
    for (std::size_t j = 0; j < ca.size(); ++j) {
        const auto& x = ca.components()[j];
        const auto& y = cb.components()[j];
        worst = std::max(worst, std::abs(x.weight - y.weight));
        worst = std::max(worst, std::abs(x.component.sigma() - y.component.sigma()));
        for (std::size_t i = 0; i < ca.dimension(); ++i)
            worst = std::max(worst, std::abs(x.component.center()[i] - y.component.center()[i]));
    }
    return worst;
}

MixtureMeasure normal_measure(Point center, double sigma) {
    std::vector<WeightedComponent> comps;
    comps.push_back({1.0, GaussianComponent(std::move(center), sigma)});
    return MixtureMeasure(std::move(comps));
}

MixtureMeasure mix(std::span<const std::pair<double, MixtureMeasure>> entries) {
    if (entries.empty()) throw InvalidParameter("mix needs at least one entry");
    const std::size_t dim = entries.front().second.dimension();
    std::vector<WeightedComponent> comps;
    for (const auto& [w, m] : entries) {
        if (!(w > 0.0)) throw InvalidParameter("mix weights must be positive");
        if (m.dimension() != dim) throw InvalidParameter("mix entries have mismatched dimensions");
        for (const auto& wc : m.components()) comps.push_back({w * wc.weight, wc.component});
    }
    return MixtureMeasure(std::move(comps));
}

MixtureMeasure mix(std::initializer_list<std::pair<double, MixtureMeasure>> entries) {
    return mix(std::span<const std::pair<double, MixtureMeasure>>(entries.begin(), entries.size()));
}

MixtureMeasure marginalize(const MixtureMeasure& measure, std::span<const std::size_t> keep) {
    if (keep.empty()) throw InvalidParameter("marginalize: keep set is empty");
    std::vector<bool> seen(measure.dimension(), false);
    for (std::size_t k : keep) {
        if (k >= measure.dimension())
            throw InvalidParameter("marginalize: mode index " + std::to_string(k) + " out of range");
        if (seen[k]) throw InvalidParameter("marginalize: duplicate mode index");
        seen[k] = true;
    }

    // Project into one flat buffer and sort row indices; Points are only
    // allocated for the merged components, which are usually far fewer.
    const std::size_t n = measure.size(), k = keep.size();
    const auto& src = measure.components();
    std::vector<double> rows(n * k);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < k; ++i) rows[j * k + i] = src[j].component.center()[keep[i]];
    auto row = [&](std::size_t j) { return rows.begin() + static_cast<std::ptrdiff_t>(j * k); };
    auto same = [&](std::size_t a, std::size_t b) {
        return std::equal(row(a), row(a) + static_cast<std::ptrdiff_t>(k), row(b)) &&
               src[a].component.sigma() == src[b].component.sigma();
    };
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto ra = row(a), rb = row(b);
        const auto end = static_cast<std::ptrdiff_t>(k);
        if (!std::equal(ra, ra + end, rb)) return std::lexicographical_compare(ra, ra + end, rb, rb + end);
        return src[a].component.sigma() < src[b].component.sigma();
    });

    std::vector<WeightedComponent> comps;
    for (std::size_t idx = 0; idx < n;) {
        const std::size_t first = order[idx];
        double w = 0.0;
        for (; idx < n && same(order[idx], first); ++idx) w += src[order[idx]].weight;
        comps.push_back({w, GaussianComponent(Point(row(first), row(first) + static_cast<std::ptrdiff_t>(k)),
                                              src[first].component.sigma())});
    }
    return MixtureMeasure(MixtureMeasure::Trusted{}, keep.size(), std::move(comps));
}

MixtureMeasure marginalize(const MixtureMeasure& measure, std::initializer_list<std::size_t> keep) {
    return marginalize(measure, std::span<const std::size_t>(keep.begin(), keep.size()));
}

double normal_raw_moment(unsigned n, double mean, double sigma) {
    if (n == 0) return 1.0;
    const double var = sigma * sigma;
    double prev = 1.0;
    double cur = mean;
    for (unsigned k = 2; k <= n; ++k) {
        const double next = mean * cur + static_cast<double>(k - 1) * var * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double moment(const MixtureMeasure& measure, std::span<const unsigned> exponents) {
    if (exponents.size() != measure.dimension())
        throw InvalidParameter("moment: exponent vector length " + std::to_string(exponents.size()) +
                               " does not match dimension " + std::to_string(measure.dimension()));
    double total = 0.0;
    for (const auto& [w, c] : measure.components()) {
        double term = w;
        for (std::size_t i = 0; i < exponents.size() && term != 0.0; ++i)
            term *= normal_raw_moment(exponents[i], c.center()[i], c.sigma());
        total += term;
    }
    return total;
}

double moment(const MixtureMeasure& measure, std::initializer_list<unsigned> exponents) {
    return moment(measure, std::span<const unsigned>(exponents.begin(), exponents.size()));
}

double density_at(const MixtureMeasure& measure, std::span<const double> point) {
    if (point.size() != measure.dimension())
        throw InvalidParameter("density_at: point dimension mismatch");
    if (measure.has_point_mass())
        throw UndefinedDensity("density_at: mixture contains a point mass (sigma = 0)");

    const double k = static_cast<double>(measure.dimension());
    const double inv_sqrt_2pi = std::numbers::inv_sqrtpi / std::numbers::sqrt2;
    double total = 0.0;
    for (const auto& [w, c] : measure.components()) {
        double r2 = 0.0;
        for (std::size_t i = 0; i < point.size(); ++i) {
            const double d = c.center()[i] - point[i];
            r2 += d * d;
        }
        const double s = c.sigma();
        total += w * std::pow(inv_sqrt_2pi / s, k) * std::exp(-r2 / (2.0 * s * s));
    }
    return total;
}

MixtureSampler::MixtureSampler(const MixtureMeasure& measure) : measure_(&measure) {
    cumulative_.reserve(measure.size());
    double acc = 0.0;
    for (const auto& wc : measure.components()) {
        acc += wc.weight;
        cumulative_.push_back(acc);
    }
}

void MixtureSampler::draw(std::mt19937_64& engine, std::span<double> out) const {
    // Uniform in [0, total) so round-off in the cumulative sum cannot select past the end.
    std::uniform_real_distribution<double> pick(0.0, cumulative_.back());
    const double u = pick(engine);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    const auto& comp = measure_->components()[static_cast<std::size_t>(it - cumulative_.begin())].component;

    if (comp.is_point_mass()) {
        std::copy(comp.center().begin(), comp.center().end(), out.begin());
        return;
    }
    std::normal_distribution<double> gauss(0.0, comp.sigma());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = comp.center()[i] + gauss(engine);
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<Point> sample(const MixtureMeasure& measure, std::size_t count, std::uint64_t seed) {
    if (count == 0) throw InvalidParameter("sample: count must be >= 1");
    std::mt19937_64 engine(splitmix64(seed));
    MixtureSampler sampler(measure);
    std::vector<Point> points(count, Point(measure.dimension()));
    for (auto& p : points) sampler.draw(engine, p);
    return points;
}

}  // namespace cvpq
