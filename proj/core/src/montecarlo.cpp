#include "cvpq/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvpq/errors.hpp"
#include "cvpq/parallel.hpp"

namespace cvpq {

namespace {

// Streaming mean/M2 with Chan's pairwise merge.
struct RunningStats {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }

    void merge(const RunningStats& o) {
        if (o.count == 0) return;
        const double na = static_cast<double>(count);
        const double nb = static_cast<double>(o.count);
        const double d = o.mean - mean;
        const double n = na + nb;
        mean += d * nb / n;
        m2 += o.m2 + d * d * na * nb / n;
        count += o.count;
    }

    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
};

struct Chunking {
    std::size_t chunks;
    std::size_t size;

    std::size_t length(std::size_t k, std::size_t n) const {
        return std::min(size, n - k * size);
    }
};

Chunking chunking(std::size_t n, const MonteCarloOptions& options) {
    if (options.chunk_size == 0) throw InvalidParameter("monte carlo chunk size must be positive");
    return {(n + options.chunk_size - 1) / options.chunk_size, options.chunk_size};
}

// Per-coordinate statistics of x and x^2 for marginal comparisons.
struct CoordinateStats {
    RunningStats value;
    RunningStats square;
};

std::vector<CoordinateStats> sample_coordinates(const MixtureMeasure& measure,
                                                std::span<const std::size_t> coords, std::size_t n,
                                                std::uint64_t seed, const MonteCarloOptions& options) {
    const auto plan = chunking(n, options);
    std::vector<std::vector<CoordinateStats>> per_chunk(plan.chunks,
                                                        std::vector<CoordinateStats>(coords.size()));
    MixtureSampler sampler(measure);
    parallel_for(plan.chunks, options.workers, [&](std::size_t k) {
        std::mt19937_64 engine(splitmix64(seed + k));
        std::vector<double> point(measure.dimension());
        auto& stats = per_chunk[k];
        for (std::size_t i = 0, len = plan.length(k, n); i < len; ++i) {
            sampler.draw(engine, point);
            for (std::size_t c = 0; c < coords.size(); ++c) {
                const double x = point[coords[c]];
                stats[c].value.add(x);
                stats[c].square.add(x * x);
            }
        }
    });
    std::vector<CoordinateStats> total(coords.size());
    for (const auto& chunk : per_chunk)
        for (std::size_t c = 0; c < coords.size(); ++c) {
            total[c].value.merge(chunk[c].value);
            total[c].square.merge(chunk[c].square);
        }
    return total;
}

}  // namespace

EstimateReport estimate_moment(const MixtureMeasure& measure, std::span<const unsigned> exponents,
                               std::size_t n, std::uint64_t seed, const MonteCarloOptions& options) {
    if (n < 2) throw InvalidParameter("estimate_moment needs n >= 2");
    if (exponents.size() != measure.dimension())
        throw InvalidParameter("estimate_moment: exponent vector length does not match dimension");

    const auto plan = chunking(n, options);
    std::vector<RunningStats> per_chunk(plan.chunks);
    MixtureSampler sampler(measure);
    parallel_for(plan.chunks, options.workers, [&](std::size_t k) {
        std::mt19937_64 engine(splitmix64(seed + k));
        std::vector<double> point(measure.dimension());
        for (std::size_t i = 0, len = plan.length(k, n); i < len; ++i) {
            sampler.draw(engine, point);
            double value = 1.0;
            for (std::size_t d = 0; d < exponents.size(); ++d)
                for (unsigned e = 0; e < exponents[d]; ++e) value *= point[d];
            per_chunk[k].add(value);
        }
    });

    RunningStats total;
    for (const auto& s : per_chunk) total.merge(s);
    return EstimateReport{total.mean, std::sqrt(total.variance() / static_cast<double>(n)), n, seed};
}

NsStatisticalReport ns_statistical_test(const BellBehavior& behavior, std::span<const std::size_t> modes_kept,
                                        std::size_t n, std::uint64_t seed,
                                        const MonteCarloOptions& options) {
    const std::size_t m = behavior.modes();
    if (n < 2) throw InvalidParameter("ns_statistical_test needs n >= 2");
    if (modes_kept.empty() || modes_kept.size() >= m)
        throw InvalidParameter("ns_statistical_test: modes_kept must be a nonempty proper subset");
    std::uint64_t subset = 0;
    for (std::size_t k : modes_kept) {
        if (k >= m) throw InvalidParameter("ns_statistical_test: mode index " + std::to_string(k) + " out of range");
        if ((subset >> k) & 1u) throw InvalidParameter("ns_statistical_test: duplicate mode index");
        subset |= std::uint64_t{1} << k;
    }
    if (m > BellBehavior::kMaxExtensionalModes)
        throw InvalidParameter("ns_statistical_test supports m <= " +
                               std::to_string(BellBehavior::kMaxExtensionalModes));

    NsStatisticalReport report;
    const std::uint64_t full = behavior.settings_count() - 1;
    const std::uint64_t comp = full & ~subset;
    // Each sampled setting gets its own seed stream, offset far apart.
    auto stream_seed = [seed](std::uint64_t settings) { return splitmix64(seed ^ (settings * 0x9e3779b97f4a7c15ULL)); };

    std::uint64_t key = 0;
    do {
        const auto reference = sample_coordinates(*behavior.measure(key), modes_kept, n, stream_seed(key), options);
        std::uint64_t rest = (0 - comp) & comp;
        while (rest != 0) {
            const std::uint64_t other = key | rest;
            const auto stats = sample_coordinates(*behavior.measure(other), modes_kept, n, stream_seed(other), options);
            for (std::size_t c = 0; c < modes_kept.size(); ++c) {
                const double nn = static_cast<double>(n);
                const auto& a = reference[c];
                const auto& b = stats[c];
                NsComparison cmp{key, other, c, 0.0, 0.0};
                const double se_mean = std::sqrt(a.value.variance() / nn + b.value.variance() / nn);
                const double dmean = a.value.mean - b.value.mean;
                cmp.mean_z = se_mean > 0.0 ? dmean / se_mean : (dmean == 0.0 ? 0.0 : INFINITY);

                // s^2 = E[x^2] - E[x]^2. Its standard error is bounded above by
                // se(E[x^2]) + 2|mean| se(E[x]) (Minkowski), which keeps the test conservative.
                const double var_a = a.square.mean - a.value.mean * a.value.mean;
                const double var_b = b.square.mean - b.value.mean * b.value.mean;
                const double se_a = std::sqrt(a.square.variance() / nn) + 2.0 * std::abs(a.value.mean) * std::sqrt(a.value.variance() / nn);
                const double se_b = std::sqrt(b.square.variance() / nn) + 2.0 * std::abs(b.value.mean) * std::sqrt(b.value.variance() / nn);
                const double se_var = std::hypot(se_a, se_b);
                const double dvar = var_a - var_b;
                cmp.variance_z = se_var > 0.0 ? dvar / se_var : (dvar == 0.0 ? 0.0 : INFINITY);

                report.worst_z = std::max({report.worst_z, std::abs(cmp.mean_z), std::abs(cmp.variance_z)});
                report.comparisons.push_back(cmp);
            }
            rest = (rest - comp) & comp;
        }
        key = (key - subset) & subset;
    } while (key != 0);

    report.pass = report.worst_z <= report.z_threshold;
    return report;
}

}  // namespace cvpq
