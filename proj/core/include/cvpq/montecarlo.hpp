#pragma once

// Sampling-based oracles for the analytic moment and no-signaling engines.
//
// Draws are split into fixed-size chunks. Chunk k seeds its own
// std::mt19937_64 with splitmix64(seed + k), and chunk statistics are merged
// in chunk order, so results are bit-identical for fixed (seed, n, chunk size)
// regardless of how many workers run the chunks.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cvpq/behaviors.hpp"
#include "cvpq/measures.hpp"

namespace cvpq {

struct MonteCarloOptions {
    std::size_t chunk_size = 1u << 16;
    unsigned workers = 0;  ///< 0 = hardware concurrency
};

struct EstimateReport {
    double estimate = 0.0;
    double std_error = 0.0;  ///< sample standard deviation / sqrt(n)
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

/// Sample mean of prod_i x_i^{n_i} over n >= 2 draws.
EstimateReport estimate_moment(const MixtureMeasure& measure, std::span<const unsigned> exponents,
                               std::size_t n, std::uint64_t seed, const MonteCarloOptions& options = {});

struct NsComparison {
    std::uint64_t settings_a = 0;
    std::uint64_t settings_b = 0;
    std::size_t coordinate = 0;  ///< position within modes_kept
    double mean_z = 0.0;
    double variance_z = 0.0;
};

struct NsStatisticalReport {
    bool pass = true;
    double worst_z = 0.0;
    double z_threshold = 5.0;
    std::vector<NsComparison> comparisons;
};

/// For every assignment on modes_kept, compares the marginal samples of the
/// all-zero completion against every other setting vector with that
/// assignment: per kept coordinate, z-tests on mean and variance. Passes iff
/// every |z| <= 5. modes_kept is 0-based and must be a nonempty proper subset.
NsStatisticalReport ns_statistical_test(const BellBehavior& behavior, std::span<const std::size_t> modes_kept,
                                        std::size_t n, std::uint64_t seed,
                                        const MonteCarloOptions& options = {});

}  // namespace cvpq
