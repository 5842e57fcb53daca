#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cvpq/cfrd.hpp"
#include "cvpq/errors.hpp"
#include "test_support.hpp"

using namespace cvpq;

TEST(cfrd_expansion, base_case) {
    const auto e = expand_complex_product(1);
    ASSERT_EQ(e.x_terms.size(), 1u);
    ASSERT_EQ(e.y_terms.size(), 1u);
    EXPECT_EQ(e.x_terms[0].sign, 1);
    EXPECT_EQ(e.x_terms[0].settings(1), SettingVector({0}));
    EXPECT_EQ(e.y_terms[0].sign, 1);
    EXPECT_EQ(e.y_terms[0].settings(1), SettingVector({1}));
}

TEST(cfrd_expansion, two_modes_by_hand) {
    // X0X0 - X1X1 + i (X0X1 + X1X0)
    const auto e = expand_complex_product(2);
    ASSERT_EQ(e.x_terms.size(), 2u);
    ASSERT_EQ(e.y_terms.size(), 2u);
    for (const auto& t : e.x_terms) {
        if (t.settings_index == 0b00) EXPECT_EQ(t.sign, 1);
        else if (t.settings_index == 0b11) EXPECT_EQ(t.sign, -1);
        else ADD_FAILURE() << "unexpected real term " << t.settings_index;
    }
    for (const auto& t : e.y_terms) {
        EXPECT_TRUE(t.settings_index == 0b01 || t.settings_index == 0b10);
        EXPECT_EQ(t.sign, 1);
    }
    EXPECT_EQ(e.negative_counts(), (SignCounts{1, 0}));
}

TEST(cfrd_expansion, every_monomial_appears_once) {
    for (std::size_t m = 1; m <= 10; ++m) {
        const auto e = expand_complex_product(m);
        std::vector<int> seen(std::size_t{1} << m, 0);
        for (const auto& t : e.x_terms) ++seen[t.settings_index];
        for (const auto& t : e.y_terms) ++seen[t.settings_index];
        for (int s : seen) EXPECT_EQ(s, 1);
        EXPECT_EQ(e.x_terms.size() + e.y_terms.size(), std::size_t{1} << m);
    }
}

TEST(cfrd_expansion, range) {
    EXPECT_THROW(expand_complex_product(0), InvalidParameter);
    EXPECT_THROW(expand_complex_product(25), InvalidParameter);
}

TEST(cfrd_signs, frozen_values) {
    EXPECT_EQ(sign_counts_recursive(1), (SignCounts{0, 0}));
    EXPECT_EQ(sign_counts_recursive(3), (SignCounts{3, 1}));
    EXPECT_EQ(sign_counts_recursive(4), (SignCounts{6, 4}));
    EXPECT_EQ(sign_counts_closed(1), (SignCounts{0, 0}));
    EXPECT_EQ(sign_counts_closed(3), (SignCounts{3, 1}));
    EXPECT_EQ(sign_counts_closed(12), sign_counts_recursive(12));
}

TEST(cfrd_signs, expansion_recursion_closed_and_enumeration_agree) {
    for (std::size_t m = 1; m <= 16; ++m) {
        const auto oracle = oracle::enumerate_sign_counts(m);
        EXPECT_EQ(expand_complex_product(m).negative_counts(), oracle) << "m=" << m;
        EXPECT_EQ(sign_counts_recursive(m), oracle) << "m=" << m;
        EXPECT_EQ(sign_counts_closed(m), oracle) << "m=" << m;
    }
    for (std::size_t m = 17; m <= 40; ++m) EXPECT_EQ(sign_counts_closed(m), sign_counts_recursive(m)) << "m=" << m;
}

TEST(cfrd_signs, all_momentum_term_parity) {
    for (std::size_t m = 1; m <= 12; ++m) {
        const auto e = expand_complex_product(m);
        const std::uint64_t ones = (std::uint64_t{1} << m) - 1;
        const auto& terms = m % 2 == 0 ? e.x_terms : e.y_terms;
        const int expected = ((m % 2 == 0 ? m / 2 : (m - 1) / 2) % 2 == 0) ? 1 : -1;
        bool found = false;
        for (const auto& t : terms)
            if (t.settings_index == ones) {
                found = true;
                EXPECT_EQ(t.sign, expected) << "m=" << m;
            }
        EXPECT_TRUE(found) << "m=" << m;
    }
}

TEST(cfrd_evaluate, three_mode_family) {
    for (double l : {0.3, 1.0, 1.8})
        for (double s : {0.0, 0.5, 1.3}) {
            const auto v = cfrd_evaluate(behavior_mmode(3, l, s));
            EXPECT_TRUE(oracle::close_rel(v.lhs, 20.0 * std::pow(l, 6), 1e-12));
            EXPECT_TRUE(oracle::close_rel(v.rhs, 8.0 * std::pow(l * l + s * s, 3), 1e-12));
        }
    const auto v = cfrd_evaluate(behavior_mmode(3, 1.0, 0.0));
    EXPECT_DOUBLE_EQ(v.margin, -12.0);
    EXPECT_TRUE(v.violated());
}

TEST(cfrd_evaluate, two_mode_family) {
    for (double l : {0.4, 1.0, 2.0})
        for (double s : {0.0, 0.7}) {
            const auto v = cfrd_evaluate(behavior_2mode(l, s));
            EXPECT_TRUE(oracle::close_rel(v.lhs, 8.0 * std::pow(l, 4), 1e-12));
            EXPECT_TRUE(oracle::close_rel(v.rhs, 4.0 * std::pow(l * l + s * s, 2), 1e-12));
        }
}

TEST(cfrd_evaluate, worker_count_does_not_change_result) {
    const auto b = behavior_mmode(8, 0.9, 0.3);
    const auto one = cfrd_evaluate(b, 1);
    const auto four = cfrd_evaluate(b, 4);
    EXPECT_EQ(one.lhs, four.lhs);
    EXPECT_EQ(one.rhs, four.rhs);
}

TEST(cfrd_coefficient, frozen_values) {
    EXPECT_EQ(family_cfrd_coefficient(2), 8.0);
    EXPECT_EQ(family_cfrd_coefficient(3), 20.0);
    EXPECT_EQ(family_cfrd_coefficient(7), 100.0);
    EXPECT_LT(family_cfrd_coefficient(7), std::exp2(7));
    EXPECT_THROW(family_cfrd_coefficient(1), InvalidParameter);
}

TEST(cfrd_coefficient, generic_means_match_sign_count_formulas) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.05, 2.0);
    for (std::size_t m = 2; m <= 10; ++m) {
        const double l = u(rng), s = u(rng);
        const auto g = cfrd_evaluate(behavior_mmode(m, l, s));
        const auto counts = sign_counts_recursive(m);
        const double half = std::exp2(static_cast<double>(m) - 1.0);
        const double lm = std::pow(l, static_cast<double>(m));
        double x = half - 2.0 * static_cast<double>(counts.a);
        double y = half - 2.0 * static_cast<double>(counts.b);
        if (m % 2 == 0) x += 2.0 * std::pow(-1.0, static_cast<double>(m / 2 + 1));
        else y += 2.0 * std::pow(-1.0, static_cast<double>((m - 1) / 2 + 1));
        EXPECT_NEAR(g.x_mean, x * lm, 1e-9 * std::max(1.0, std::abs(x * lm))) << "m=" << m;
        EXPECT_NEAR(g.y_mean, y * lm, 1e-9 * std::max(1.0, std::abs(y * lm))) << "m=" << m;
        EXPECT_TRUE(oracle::close_rel(g.lhs, family_cfrd_coefficient(m) * std::pow(l, 2.0 * m), 1e-9)) << "m=" << m;
        EXPECT_TRUE(oracle::close_rel(g.rhs, std::exp2(m) * std::pow(l * l + s * s, m), 1e-9)) << "m=" << m;

        const auto c = cfrd_closed_form(m, l, s);
        EXPECT_TRUE(oracle::close_rel(c.x_mean, g.x_mean, 1e-9));
        EXPECT_TRUE(oracle::close_rel(c.y_mean, g.y_mean, 1e-9));
    }
}

TEST(cfrd_slope, frozen_values) {
    ASSERT_TRUE(violation_slope(3).has_value());
    EXPECT_NEAR(*violation_slope(3), 0.5976694808148172, 1e-12);
    ASSERT_TRUE(violation_slope(2).has_value());
    EXPECT_NEAR(*violation_slope(2), 0.6435942529055827, 1e-12);
    EXPECT_FALSE(violation_slope(7).has_value());
}

TEST(cfrd_slope, absent_exactly_for_7_8_9_up_to_12) {
    for (std::size_t m = 2; m <= 12; ++m)
        EXPECT_EQ(violation_slope(m).has_value(), !(m >= 7 && m <= 9)) << "m=" << m;
}

TEST(cfrd_slope, matches_coefficient_route) {
    for (std::size_t m = 2; m <= 30; ++m) {
        const double radicand = std::pow(family_cfrd_coefficient(m), 1.0 / static_cast<double>(m)) / 2.0 - 1.0;
        const auto tau = violation_slope(m);
        if (std::abs(radicand) < 1e-12) continue;
        EXPECT_EQ(tau.has_value(), radicand > 0.0) << "m=" << m;
        if (tau) {
            EXPECT_NEAR(*tau * *tau, radicand, 1e-10) << "m=" << m;
        }
    }
}

TEST(cfrd_property, boundary_is_the_slope_line) {
    for (std::size_t m : {2u, 3u, 4u, 5u, 6u}) {
        const double tau = *violation_slope(m);
        for (double l : {0.2, 0.9, 1.4}) {
            EXPECT_LT(cfrd_evaluate(behavior_mmode(m, l, (1.0 - 1e-6) * tau * l)).margin, 0.0);
            EXPECT_GT(cfrd_evaluate(behavior_mmode(m, l, (1.0 + 1e-6) * tau * l)).margin, 0.0);
        }
    }
}

TEST(cfrd_property, scale_covariance_and_nonnegativity) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.05, 2.0), scale(0.2, 3.0);
    for (int t = 0; t < 60; ++t) {
        const std::size_t m = 2 + t % 5;
        const double l = u(rng), s = u(rng), k = scale(rng);
        const auto a = cfrd_evaluate(behavior_mmode(m, l, s));
        const auto b = cfrd_evaluate(behavior_mmode(m, k * l, k * s));
        EXPECT_GE(a.lhs, 0.0);
        EXPECT_GE(a.rhs, 0.0);
        const double f = std::pow(k, 2.0 * m);
        EXPECT_TRUE(oracle::close_rel(b.lhs, f * a.lhs, 1e-9));
        EXPECT_TRUE(oracle::close_rel(b.rhs, f * a.rhs, 1e-9));
        EXPECT_EQ(a.margin < 0.0, b.margin < 0.0);
    }
}
