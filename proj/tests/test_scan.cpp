#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cvpq/cfrd.hpp"
#include "cvpq/errors.hpp"
#include "cvpq/scan.hpp"

using namespace cvpq;

TEST(classify, frozen_examples) {
    EXPECT_EQ(classify_point(3, Family::MMode, 0.9, 0.1, 0.0).label, Label::PostQuantum);
    EXPECT_EQ(classify_point(3, Family::MMode, 0.9, 0.9, 0.0).label, Label::NoViolationDetected);

    const auto two = classify_point(2, Family::TwoMode, 2.0, 0.1, 0.0);
    EXPECT_EQ(two.label, Label::PostQuantum);
    EXPECT_NEAR(two.cfrd_margin, 4.0 * std::pow(4.01, 2) - 8.0 * 16.0, 1e-9);
    EXPECT_NEAR(two.rs_min_eig, 4.01 - std::sqrt(33.0), 1e-12);
}

TEST(classify, other_labels) {
    // Nonlocal (sigma < 0.5977 l) outside the RS disc.
    EXPECT_EQ(classify_point(3, Family::MMode, 1.2, 0.2, 0.0).label, Label::NonlocalOnly);
    // Inside the RS disc, above the CFRD line.
    EXPECT_EQ(classify_point(3, Family::MMode, 0.3, 0.6, 0.0).label, Label::RsViolatingOnly);
}

TEST(classify, label_rule) {
    EXPECT_EQ(label_for(-1.0, -1.0, 1e-9), Label::PostQuantum);
    EXPECT_EQ(label_for(-1.0, -1e-10, 1e-9), Label::NonlocalOnly);
    EXPECT_EQ(label_for(0.0, -1.0, 1e-9), Label::RsViolatingOnly);
    EXPECT_EQ(label_for(0.0, 0.0, 1e-9), Label::NoViolationDetected);
    EXPECT_EQ(to_string(Label::RsViolatingOnly), "rs-violating-only");
}

TEST(classify, preconditions) {
    EXPECT_THROW(classify_point(3, Family::TwoMode, 1.0, 1.0, 0.0), InvalidParameter);
    EXPECT_THROW(classify_point(3, Family::MMode, -1.0, 1.0, 0.0), InvalidParameter);
    EXPECT_THROW(classify_point(3, Family::MMode, 1.0, std::nan(""), 0.0), InvalidParameter);
    EXPECT_THROW(classify_point(3, Family::Custom, 1.0, 1.0, 0.0), InvalidParameter);
}

TEST(classify, generic_engine_matches_closed_form) {
    for (std::size_t m : {2u, 3u, 4u, 5u})
        for (double c : {0.0, 1.0})
            for (double l = 0.0; l <= 1.5; l += 0.125)
                for (double s = 0.0; s <= 1.0; s += 0.125) {
                    const auto family = m == 2 ? Family::TwoMode : Family::MMode;
                    const auto a = classify_point(m, family, l, s, c, Engine::ClosedForm);
                    const auto b = classify_point(m, family, l, s, c, Engine::Generic);
                    EXPECT_EQ(a.label, b.label) << "m=" << m << " l=" << l << " s=" << s << " c=" << c;
                    EXPECT_NEAR(a.cfrd_margin, b.cfrd_margin, 1e-9 * std::max(1.0, std::abs(a.cfrd_margin)));
                    EXPECT_NEAR(a.rs_min_eig, b.rs_min_eig, 1e-9);
                }
}

TEST(range, parse_and_count) {
    const auto r = Range::parse("0:1.5:0.01");
    EXPECT_EQ(r.count(), 151u);
    EXPECT_DOUBLE_EQ(r.at(150), 1.5);
    EXPECT_EQ(Range::parse("0:1:0.01").count(), 101u);
    EXPECT_EQ(Range::parse("0.25").count(), 1u);
    EXPECT_THROW(Range::parse("0:1"), InvalidParameter);
    EXPECT_THROW(Range::parse("a:b:c"), InvalidParameter);
    EXPECT_EQ((Range{1.0, 0.0, 0.1}).count(), 0u);
}

TEST(scan, config_validation) {
    ScanConfig cfg;
    cfg.l.step = 0.0;
    EXPECT_THROW(scan_region(cfg), InvalidParameter);
    cfg = ScanConfig{};
    cfg.sigma = Range{1.0, 0.0, 0.1};
    EXPECT_THROW(scan_region(cfg), InvalidParameter);
    cfg = ScanConfig{};
    cfg.family = Family::TwoMode;
    EXPECT_THROW(scan_region(cfg), InvalidParameter);
}

TEST(scan, three_mode_region) {
    ScanConfig cfg;  // defaults: m = 3, l in [0, 1.5], sigma in [0, 1], step 0.01
    const auto r = scan_region(cfg);
    EXPECT_EQ(r.cells.size(), 151u * 101u);
    EXPECT_GT(r.summary.count(Label::PostQuantum), 0u);
    ASSERT_TRUE(r.summary.fitted_slope.has_value());
    EXPECT_NEAR(*r.summary.fitted_slope, *violation_slope(3), 2 * cfg.sigma.step);
    EXPECT_EQ(r.at(90, 10).l, r.cells[90 * 101 + 10].l);
    EXPECT_EQ(r.at(90, 10).classification.label, Label::PostQuantum);
}

TEST(scan, seven_modes_never_violate) {
    ScanConfig cfg;
    cfg.modes = 7;
    const auto r = scan_region(cfg);
    EXPECT_EQ(r.summary.cfrd_violating, 0u);
    EXPECT_FALSE(r.summary.fitted_slope.has_value());
    EXPECT_FALSE(r.summary.expected_slope.has_value());
}

TEST(scan, rs_region_grows_with_c) {
    ScanConfig cfg;
    const auto base = scan_region(cfg);
    cfg.c = 1.0;
    const auto wide = scan_region(cfg);
    std::size_t extra = 0;
    for (std::size_t k = 0; k < base.cells.size(); ++k) {
        const auto& a = base.cells[k].classification;
        const auto& b = wide.cells[k].classification;
        if (a.rs_min_eig < -a.rs_tol) {
            EXPECT_LT(b.rs_min_eig, -b.rs_tol);
        }
        extra += (b.rs_min_eig < -b.rs_tol) && !(a.rs_min_eig < -a.rs_tol);
    }
    EXPECT_GT(extra, 0u);
    EXPECT_GT(wide.summary.rs_violating, base.summary.rs_violating);
}

TEST(scan, independent_of_worker_count) {
    ScanConfig cfg;
    cfg.l = Range{0.0, 1.0, 0.05};
    cfg.sigma = Range{0.0, 1.0, 0.05};
    cfg.engine = Engine::Generic;
    cfg.workers = 1;
    const auto a = scan_region(cfg);
    cfg.workers = 4;
    const auto b = scan_region(cfg);
    std::ostringstream sa, sb;
    write_csv(sa, a);
    write_csv(sb, b);
    EXPECT_EQ(sa.str(), sb.str());
}

TEST(scan_output, csv_layout) {
    ScanConfig cfg;
    cfg.l = Range{0.5, 0.6, 0.1};
    cfg.sigma = Range{0.0, 0.1, 0.1};
    std::ostringstream out;
    write_csv(out, scan_region(cfg));
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "l,sigma,cfrd_margin,rs_min_eig,label");
    std::vector<std::string> rows;
    while (std::getline(in, line)) rows.push_back(line);
    ASSERT_EQ(rows.size(), 4u);
    // l outer, sigma inner
    EXPECT_EQ(rows[0].substr(0, 6), "0.5,0,");
    EXPECT_EQ(rows[1].substr(0, 8), "0.5,0.1,");
    EXPECT_EQ(rows[2].substr(0, 6), "0.6,0,");
    // 9 significant digits: margin at (0.5, 0) is 8 * 0.25^3 - 20 * 0.5^6 = -0.1875
    EXPECT_EQ(rows[0], "0.5,0,-0.1875,-0.75,post-quantum");
    EXPECT_EQ(format_real(1.0 / 3.0), "0.333333333");
}

TEST(scan_output, json_layout) {
    ScanConfig cfg;
    cfg.l = Range{0.5, 0.6, 0.1};
    cfg.sigma = Range{0.0, 0.1, 0.1};
    cfg.c = 0.5;
    std::ostringstream out;
    write_json(out, scan_region(cfg));
    const auto doc = nlohmann::json::parse(out.str());
    EXPECT_EQ(doc["meta"]["modes"], 3);
    EXPECT_EQ(doc["meta"]["family"], "mmode");
    EXPECT_EQ(doc["meta"]["c"], 0.5);
    EXPECT_EQ(doc["meta"]["ranges"]["l"]["step"], 0.1);
    EXPECT_EQ(doc["meta"]["tol"]["rs_relative"], 1e-9);
    EXPECT_TRUE(doc["meta"].contains("version"));
    ASSERT_EQ(doc["cells"].size(), 4u);
    EXPECT_EQ(doc["cells"][0]["label"], "post-quantum");
    EXPECT_EQ(doc["summary"]["counts"]["post-quantum"].get<int>() + doc["summary"]["counts"]["nonlocal-only"].get<int>() +
                  doc["summary"]["counts"]["rs-violating-only"].get<int>() +
                  doc["summary"]["counts"]["no-violation-detected"].get<int>(),
              4);
}
