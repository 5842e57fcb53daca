#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cvpq/errors.hpp"
#include "cvpq/measures.hpp"
#include "test_support.hpp"

using namespace cvpq;

namespace {

MixtureMeasure odd_three_mode(double l, double sigma) {
    return mix({{0.25, normal_measure({l, l, -l}, sigma)},
                {0.25, normal_measure({l, -l, l}, sigma)},
                {0.25, normal_measure({-l, l, l}, sigma)},
                {0.25, normal_measure({-l, -l, -l}, sigma)}});
}

}  // namespace

TEST(measures, normal_measure_single_component) {
    const auto m = normal_measure({0.0, 0.0, 0.0}, 1.0);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_EQ(m.dimension(), 3u);
    EXPECT_DOUBLE_EQ(m.components()[0].weight, 1.0);
}

TEST(measures, normal_measure_rejects_negative_sigma) {
    EXPECT_THROW(normal_measure({0.0}, -1.0), InvalidParameter);
    EXPECT_THROW(normal_measure({}, 1.0), InvalidParameter);
}

TEST(measures, mix_identity_and_errors) {
    const auto m = odd_three_mode(0.7, 0.2);
    EXPECT_EQ(mixture_distance(mix({{1.0, m}}), m), 0.0);
    EXPECT_THROW(mix({{0.5, m}, {0.6, m}}), InvalidParameter);
    EXPECT_THROW(mix({{0.5, normal_measure({0.0}, 1.0)}, {0.5, normal_measure({0.0, 0.0}, 1.0)}}), InvalidParameter);
    EXPECT_THROW(mix({{-0.5, m}, {1.5, m}}), InvalidParameter);
}

TEST(measures, mixture_weight_tolerance_is_not_renormalized) {
    std::vector<WeightedComponent> ok{{0.5, GaussianComponent({0.0}, 1.0)}, {0.5 + 5e-13, GaussianComponent({1.0}, 1.0)}};
    EXPECT_NO_THROW(MixtureMeasure{ok});
    std::vector<WeightedComponent> bad{{0.5, GaussianComponent({0.0}, 1.0)}, {0.5 + 1e-9, GaussianComponent({1.0}, 1.0)}};
    EXPECT_THROW(MixtureMeasure{bad}, InvalidParameter);
}

TEST(measures, single_mode_marginal_of_eq3a) {
    const double l = 0.8, s = 0.3;
    const auto marg = marginalize(odd_three_mode(l, s), {0});
    const auto expected = mix({{0.5, normal_measure({l}, s)}, {0.5, normal_measure({-l}, s)}});
    EXPECT_EQ(marg.size(), 2u);
    EXPECT_LE(mixture_distance(marg, expected), 1e-15);
}

TEST(measures, two_mode_marginal_of_eq3a) {
    const double l = 1.1, s = 0.4;
    const auto marg = marginalize(odd_three_mode(l, s), {0, 1});
    const auto expected = mix({{0.25, normal_measure({l, l}, s)},
                               {0.25, normal_measure({l, -l}, s)},
                               {0.25, normal_measure({-l, l}, s)},
                               {0.25, normal_measure({-l, -l}, s)}});
    EXPECT_LE(mixture_distance(marg, expected), 1e-15);
}

TEST(measures, marginalize_all_coordinates_is_identity) {
    const auto m = odd_three_mode(0.5, 0.5);
    EXPECT_EQ(mixture_distance(marginalize(m, {0, 1, 2}), m), 0.0);
}

TEST(measures, marginalize_errors) {
    const auto m = odd_three_mode(0.5, 0.5);
    EXPECT_THROW(marginalize(m, std::span<const std::size_t>{}), InvalidParameter);
    EXPECT_THROW(marginalize(m, {3}), InvalidParameter);
    EXPECT_THROW(marginalize(m, {1, 1}), InvalidParameter);
}

TEST(measures, marginalize_respects_keep_order) {
    const auto m = normal_measure({1.0, 2.0, 3.0}, 0.1);
    const auto marg = marginalize(m, {2, 0});
    EXPECT_EQ(marg.components()[0].component.center(), (Point{3.0, 1.0}));
}

TEST(measures, moment_examples) {
    EXPECT_DOUBLE_EQ(moment(normal_measure({1.0}, 1.0), {2}), 2.0);
    for (double l : {0.3, 1.0, 1.7})
        for (double s : {0.0, 0.4, 1.2}) {
            const auto m = odd_three_mode(l, s);
            EXPECT_NEAR(moment(m, {1, 1, 1}), -l * l * l, 1e-14);
            EXPECT_NEAR(moment(m, {2, 2, 2}), std::pow(l * l + s * s, 3), 1e-12);
        }
}

TEST(measures, moment_requires_matching_length) {
    EXPECT_THROW(moment(normal_measure({1.0, 2.0}, 1.0), {1}), InvalidParameter);
}

TEST(measures, raw_moment_recursion_matches_binomial_oracle) {
    for (unsigned n = 0; n <= 10; ++n)
        for (double a : {-1.3, 0.0, 0.4, 2.0})
            for (double s : {0.0, 0.3, 1.1})
                EXPECT_TRUE(oracle::close_rel(normal_raw_moment(n, a, s), oracle::binomial_normal_moment(n, a, s), 1e-12))
                    << "n=" << n << " a=" << a << " s=" << s;
}

TEST(measures, density_examples) {
    EXPECT_NEAR(density_at(normal_measure({0.0}, 1.0), std::vector<double>{0.0}), 0.3989422804014327, 1e-15);
    const auto sym = mix({{0.5, normal_measure({1.0}, 1.0)}, {0.5, normal_measure({-1.0}, 1.0)}});
    EXPECT_NEAR(density_at(sym, std::vector<double>{0.0}), 0.24197072451914337, 1e-15);
    EXPECT_THROW(density_at(normal_measure({1.0}, 0.0), std::vector<double>{1.0}), UndefinedDensity);
}

TEST(measures, density_of_product_is_product_of_densities) {
    const auto m = normal_measure({0.2, -0.5, 1.0}, 0.7);
    const std::vector<double> x{0.1, 0.3, -0.4};
    double expected = 1.0;
    for (std::size_t i = 0; i < 3; ++i)
        expected *= density_at(normal_measure({m.components()[0].component.center()[i]}, 0.7), std::vector<double>{x[i]});
    EXPECT_NEAR(density_at(m, x), expected, 1e-15);
}

TEST(measures, sample_mean_of_standard_normal) {
    const auto pts = sample(normal_measure({0.0}, 1.0), 100000, 42);
    double mean = 0.0;
    for (const auto& p : pts) mean += p[0];
    mean /= static_cast<double>(pts.size());
    EXPECT_LT(std::abs(mean), 5.0 / std::sqrt(1e5));
}

TEST(measures, sample_point_mass_and_determinism) {
    const auto dirac = sample(normal_measure({0.75}, 0.0), 1000, 7);
    for (const auto& p : dirac) EXPECT_EQ(p[0], 0.75);

    const auto m = odd_three_mode(1.0, 0.5);
    EXPECT_EQ(sample(m, 500, 99), sample(m, 500, 99));
    EXPECT_NE(sample(m, 500, 99), sample(m, 500, 100));
    EXPECT_THROW(sample(m, 0, 1), InvalidParameter);
}

// Invariants on random mixtures.

TEST(measures_property, normalization) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 100; ++t) {
        const std::size_t dim = 1 + t % 4;
        const auto m = oracle::random_mixture(rng, dim, 1 + t % 5, true);
        EXPECT_NEAR(moment(m, std::vector<unsigned>(dim, 0)), 1.0, 1e-12);
    }
}

TEST(measures_property, moment_matches_binomial_oracle) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 200; ++t) {
        const std::size_t dim = 1 + t % 3;
        const auto m = oracle::random_mixture(rng, dim, 3, true);
        const auto e = oracle::random_exponents(rng, dim, 8);
        EXPECT_TRUE(oracle::close_rel(moment(m, e), oracle::binomial_mixture_moment(m, e), 1e-12));
    }
}

TEST(measures_property, moment_is_linear_in_weights) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    for (int t = 0; t < 100; ++t) {
        const std::size_t dim = 1 + t % 3;
        const auto a = oracle::random_mixture(rng, dim, 3);
        const auto b = oracle::random_mixture(rng, dim, 2);
        const double w = unit(rng);
        const auto e = oracle::random_exponents(rng, dim, 6);
        const double mixed = moment(mix({{w, a}, {1.0 - w, b}}), e);
        EXPECT_TRUE(oracle::close_rel(mixed, w * moment(a, e) + (1.0 - w) * moment(b, e), 1e-12));
    }
}

TEST(measures_property, marginalize_then_moment_equals_zero_exponents) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 100; ++t) {
        const std::size_t dim = 2 + t % 3;
        const auto m = oracle::random_mixture(rng, dim, 3, true);
        auto e = oracle::random_exponents(rng, dim, 6);
        std::vector<std::size_t> keep;
        std::vector<unsigned> kept_e;
        for (std::size_t i = 0; i < dim; ++i) {
            if ((t >> i) & 1u) {
                keep.push_back(i);
                kept_e.push_back(e[i]);
            } else {
                e[i] = 0;
            }
        }
        if (keep.empty()) continue;
        EXPECT_NEAR(moment(marginalize(m, keep), kept_e), moment(m, e), 1e-12 * std::max(1.0, std::abs(moment(m, e))));
    }
}

TEST(measures_property, canonical_form_is_order_independent) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const auto m = oracle::random_mixture(rng, 2, 4);
        auto comps = m.components();
        std::shuffle(comps.begin(), comps.end(), rng);
        EXPECT_EQ(mixture_distance(m, MixtureMeasure(comps)), 0.0);
    }
}
