#include "cvpq/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cvpq/behaviors.hpp"
#include "cvpq/cfrd.hpp"
#include "cvpq/errors.hpp"
#include "cvpq/montecarlo.hpp"
#include "cvpq/rswitness.hpp"

namespace cvpq {

bool VerifyReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

std::string VerifyReport::to_json(int indent) const {
    nlohmann::json doc;
    doc["suite"] = suite;
    doc["passed"] = passed();
    doc["checks"] = nlohmann::json::array();
    for (const auto& c : checks)
        doc["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return doc.dump(indent);
}

namespace {

bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

void oracle_checks(VerifyReport& report) {
    {
        bool ok = true;
        std::ostringstream detail;
        for (std::size_t m = 1; m <= 16; ++m) {
            const auto e = expand_complex_product(m).negative_counts();
            const auto r = sign_counts_recursive(m);
            const auto c = sign_counts_closed(m);
            if (!(e == r && r == c)) {
                ok = false;
                detail << "m=" << m << " expansion (" << e.a << "," << e.b << ") recursion (" << r.a << ","
                       << r.b << ") closed (" << c.a << "," << c.b << "); ";
            }
        }
        report.checks.push_back({"sign_counts_agree_m1_16", ok, ok ? "expansion = recursion = closed form" : detail.str()});
    }
    {
        bool ok = true;
        std::ostringstream detail;
        for (std::size_t m = 2; m <= 10; ++m) {
            const double l = 0.7, sigma = 0.3;
            const auto g = cfrd_evaluate(behavior_mmode(m, l, sigma));
            const auto c = cfrd_closed_form(m, l, sigma);
            if (!close_rel(g.lhs, c.lhs, 1e-9) || !close_rel(g.rhs, c.rhs, 1e-9)) {
                ok = false;
                detail << "m=" << m << " generic lhs " << g.lhs << " closed " << c.lhs << "; ";
            }
        }
        report.checks.push_back({"cfrd_generic_vs_closed_m2_10", ok, ok ? "relative 1e-9" : detail.str()});
    }
    {
        std::vector<std::size_t> absent;
        for (std::size_t m = 2; m <= 12; ++m)
            if (!violation_slope(m)) absent.push_back(m);
        const bool ok = absent == std::vector<std::size_t>{7, 8, 9};
        std::ostringstream detail;
        detail << "no violation for m in {";
        for (std::size_t i = 0; i < absent.size(); ++i) detail << (i ? "," : "") << absent[i];
        detail << "}";
        report.checks.push_back({"violation_absent_m7_9", ok, detail.str()});
    }
    {
        bool ok = true;
        std::ostringstream detail;
        for (std::size_t m = 2; m <= 5; ++m)
            for (double c : {0.0, 0.5, 1.0})
                for (double l : {0.2, 0.6, 1.1})
                    for (double sigma : {0.0, 0.4, 0.9}) {
                        const auto b = behavior_mmode(m, l, sigma);
                        const double eig = rs_min_eigenvalue(covariance_matrix(b, JointChoice(c)));
                        const double closed = rs_min_eigenvalue_family(m, l, sigma, c);
                        if (std::abs(eig - closed) > 1e-9) {
                            ok = false;
                            detail << "m=" << m << " l=" << l << " sigma=" << sigma << " c=" << c << ": " << eig
                                   << " vs " << closed << "; ";
                        }
                    }
        report.checks.push_back({"rs_eigenvalue_vs_closed", ok, ok ? "agree to 1e-9" : detail.str()});
    }
    {
        bool ok = true;
        for (double l : {0.5, 1.0, 2.0})
            for (double sigma : {0.0, 0.3, 1.0})
                ok = ok && check_no_signaling(behavior_mmode(3, l, sigma)).ok &&
                     check_no_signaling(behavior_2mode(l, sigma)).ok;
        report.checks.push_back({"families_no_signaling", ok, "mmode(3) and 2mode on {0.5,1,2}x{0,0.3,1}"});
    }
}

MixtureMeasure random_mixture(std::mt19937_64& rng, std::size_t dim) {
    std::uniform_real_distribution<double> center(-1.5, 1.5), width(0.0, 1.0), weight(0.2, 1.0);
    std::vector<double> w(3);
    double total = 0.0;
    for (auto& x : w) total += (x = weight(rng));
    std::vector<WeightedComponent> comps;
    for (std::size_t j = 0; j < 3; ++j) {
        Point c(dim);
        for (auto& x : c) x = center(rng);
        comps.push_back({w[j] / total, GaussianComponent(std::move(c), width(rng))});
    }
    return MixtureMeasure(std::move(comps));
}

void montecarlo_checks(VerifyReport& report, const VerifyOptions& options) {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> dim_dist(1, 3);
    std::size_t within = 0;
    const std::size_t cases = 50;
    for (std::size_t k = 0; k < cases; ++k) {
        const std::size_t dim = dim_dist(rng);
        const auto measure = random_mixture(rng, dim);
        std::vector<unsigned> exps(dim, 0);
        std::uniform_int_distribution<std::size_t> coord(0, dim - 1);
        const unsigned degree = std::uniform_int_distribution<unsigned>(1, 6)(rng);
        for (unsigned d = 0; d < degree; ++d) ++exps[coord(rng)];
        const auto est = estimate_moment(measure, exps, options.samples, options.seed + 1000 * (k + 1),
                                         {.chunk_size = 1u << 16, .workers = options.workers});
        within += std::abs(est.estimate - moment(measure, exps)) <= 5.0 * est.std_error;
    }
    report.checks.push_back({"moment_vs_montecarlo", within >= 48,
                             std::to_string(within) + "/" + std::to_string(cases) + " within 5 standard errors"});

    const std::size_t keep[] = {0};
    const auto family = ns_statistical_test(behavior_mmode(3, 1.0, 0.5), keep, 100000, options.seed,
                                            {.chunk_size = 1u << 16, .workers = options.workers});
    report.checks.push_back({"ns_statistical_family", family.pass, "worst |z| = " + std::to_string(family.worst_z)});
}

}  // namespace

VerifyReport run_verify_suite(const std::string& suite, const VerifyOptions& options) {
    if (suite != "all" && suite != "oracles" && suite != "montecarlo")
        throw InvalidParameter("unknown verify suite '" + suite + "' (expected all, montecarlo or oracles)");
    VerifyReport report;
    report.suite = suite;
    if (suite == "all" || suite == "oracles") oracle_checks(report);
    if (suite == "all" || suite == "montecarlo") montecarlo_checks(report, options);
    return report;
}

}  // namespace cvpq
