// cvpq: command line front end for the post-quantum nonlocality toolkit.
//
// Exit codes: 0 success, 1 usage error, 2 internal assertion (oracle mismatch).

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvpq/behavior_json.hpp"
#include "cvpq/behaviors.hpp"
#include "cvpq/cfrd.hpp"
#include "cvpq/errors.hpp"
#include "cvpq/rswitness.hpp"
#include "cvpq/scan.hpp"
#include "cvpq/verify.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInternal = 2;

using nlohmann::json;

struct PointArgs {
    std::size_t modes = 3;
    std::string family = "mmode";
    double l = 1.0;
    double sigma = 0.5;
    double c = 0.0;
};

void add_point_options(CLI::App* cmd, PointArgs& args, bool with_c) {
    cmd->add_option("--modes,-m", args.modes, "Number of modes m")->capture_default_str();
    cmd->add_option("--family", args.family, "Behavior family: mmode or 2mode")
        ->check(CLI::IsMember({"mmode", "2mode"}))
        ->capture_default_str();
    cmd->add_option("--l", args.l, "Center magnitude l >= 0")->capture_default_str();
    cmd->add_option("--sigma", args.sigma, "Component width sigma >= 0")->capture_default_str();
    if (with_c)
        cmd->add_option("--c", args.c, "Single-mode position-momentum covariance (0 = product choice)")
            ->capture_default_str();
}

cvpq::BellBehavior build_behavior(const PointArgs& args) {
    const auto family = cvpq::parse_family(args.family);
    if (family == cvpq::Family::TwoMode) {
        if (args.modes != 2) throw cvpq::InvalidParameter("--family 2mode requires --modes 2");
        return cvpq::behavior_2mode(args.l, args.sigma);
    }
    return cvpq::behavior_mmode(args.modes, args.l, args.sigma);
}

void emit(const json& doc) { std::cout << doc.dump(2) << '\n'; }

int run_cfrd(const PointArgs& args) {
    const auto b = build_behavior(args);
    const auto v = cvpq::cfrd_evaluate(b);
    emit({{"modes", args.modes},
          {"family", args.family},
          {"l", args.l},
          {"sigma", args.sigma},
          {"x_mean", v.x_mean},
          {"y_mean", v.y_mean},
          {"lhs", v.lhs},
          {"rhs", v.rhs},
          {"margin", v.margin},
          {"violated", v.violated()}});
    return 0;
}

int run_rs(const PointArgs& args) {
    const auto b = build_behavior(args);
    const auto cm = cvpq::covariance_matrix(b, cvpq::JointChoice(args.c));
    const double eig = cvpq::rs_min_eigenvalue(cm);
    const double tol = cvpq::rs_tolerance(cm);
    const double threshold = args.modes == 2 ? cvpq::rs_threshold_2mode(args.l, args.c)
                                             : cvpq::rs_threshold_family(args.modes, args.c);
    const auto verdict = cvpq::rs_verdict(eig, tol);
    emit({{"modes", args.modes},
          {"family", args.family},
          {"l", args.l},
          {"sigma", args.sigma},
          {"c", args.c},
          {"l2_plus_sigma2", args.l * args.l + args.sigma * args.sigma},
          {"min_eigenvalue", eig},
          {"threshold", threshold},
          {"tol", tol},
          {"violated", verdict == cvpq::RsVerdict::Violated},
          {"verdict", cvpq::to_string(verdict)}});
    return 0;
}

int run_classify(const PointArgs& args, const std::string& engine) {
    const auto family = cvpq::parse_family(args.family);
    const auto k = cvpq::classify_point(args.modes, family, args.l, args.sigma, args.c, cvpq::parse_engine(engine));
    emit({{"modes", args.modes},
          {"family", args.family},
          {"l", args.l},
          {"sigma", args.sigma},
          {"c", args.c},
          {"engine", engine},
          {"cfrd_margin", k.cfrd_margin},
          {"rs_min_eig", k.rs_min_eig},
          {"rs_tol", k.rs_tol},
          {"label", cvpq::to_string(k.label)}});
    return 0;
}

int run_dump(const PointArgs& args, const std::string& out) {
    const auto text = cvpq::behavior_to_json(build_behavior(args));
    if (out.empty() || out == "-") {
        std::cout << text << '\n';
        return 0;
    }
    std::ofstream f(out);
    if (!f) throw cvpq::InvalidParameter("cannot open output file '" + out + "'");
    f << text << '\n';
    return 0;
}

struct ScanArgs {
    std::size_t modes = 3;
    std::string family = "mmode";
    std::string l = "0:1.5:0.01";
    std::string sigma = "0:1:0.01";
    double c = 0.0;
    std::string engine = "closed-form";
    std::string format = "csv";
    std::string out;
    unsigned workers = 0;
};

int run_scan(const ScanArgs& args) {
    cvpq::ScanConfig cfg;
    cfg.modes = args.modes;
    cfg.family = cvpq::parse_family(args.family);
    cfg.l = cvpq::Range::parse(args.l);
    cfg.sigma = cvpq::Range::parse(args.sigma);
    cfg.c = args.c;
    cfg.engine = cvpq::parse_engine(args.engine);
    cfg.format = cvpq::parse_format(args.format);
    cfg.workers = args.workers;
    const auto result = cvpq::scan_region(cfg);

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!args.out.empty() && args.out != "-") {
        file.open(args.out);
        if (!file) throw cvpq::InvalidParameter("cannot open output file '" + args.out + "'");
        out = &file;
    }
    if (cfg.format == cvpq::OutputFormat::Csv)
        cvpq::write_csv(*out, result);
    else
        cvpq::write_json(*out, result);

    const auto& s = result.summary;
    std::cerr << "cells=" << result.cells.size() << " post-quantum=" << s.count(cvpq::Label::PostQuantum)
              << " cfrd-violating=" << s.cfrd_violating << " rs-violating=" << s.rs_violating;
    if (s.fitted_slope) std::cerr << " fitted-slope=" << cvpq::format_real(*s.fitted_slope);
    std::cerr << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cvpq: CFRD nonlocality and Robertson-Schrodinger post-quantumness for Gaussian-mixture Bell behaviors"};
    app.require_subcommand(1);
    app.set_version_flag("--version", cvpq::library_version());

    PointArgs point;
    std::string engine = "closed-form";
    std::string dump_out;

    auto* cfrd = app.add_subcommand("cfrd", "Evaluate the CFRD inequality on a family behavior");
    add_point_options(cfrd, point, false);

    auto* rs = app.add_subcommand("rs", "Robertson-Schrodinger test on the behavior's covariance matrix");
    add_point_options(rs, point, true);

    auto* classify = app.add_subcommand("classify", "Classify one (l, sigma) point");
    add_point_options(classify, point, true);
    classify->add_option("--engine", engine, "closed-form or generic")
        ->check(CLI::IsMember({"closed-form", "generic"}))
        ->capture_default_str();

    auto* dump = app.add_subcommand("dump", "Write a family behavior as JSON");
    add_point_options(dump, point, false);
    dump->add_option("--out,-o", dump_out, "Output file (default stdout)");

    ScanArgs scan_args;
    auto* scan = app.add_subcommand("scan", "Classify a grid of (l, sigma) points");
    scan->add_option("--modes,-m", scan_args.modes, "Number of modes m")->capture_default_str();
    scan->add_option("--family", scan_args.family, "mmode or 2mode")
        ->check(CLI::IsMember({"mmode", "2mode"}))
        ->capture_default_str();
    scan->add_option("--l", scan_args.l, "l range start:stop:step")->capture_default_str();
    scan->add_option("--sigma", scan_args.sigma, "sigma range start:stop:step")->capture_default_str();
    scan->add_option("--c", scan_args.c, "Single-mode position-momentum covariance")->capture_default_str();
    scan->add_option("--engine", scan_args.engine, "closed-form or generic")
        ->check(CLI::IsMember({"closed-form", "generic"}))
        ->capture_default_str();
    scan->add_option("--format", scan_args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    scan->add_option("--out,-o", scan_args.out, "Output file (default stdout)");
    scan->add_option("--workers", scan_args.workers, "Worker threads (0 = all cores)")->capture_default_str();
    scan->footer("RS violation: min eig of V + i Omega < -1e-9 * (1 + max diagonal). Nonlocal: CFRD margin < 0.");

    std::string suite = "all";
    cvpq::VerifyOptions verify_opts;
    auto* verify = app.add_subcommand("verify", "Run the built-in oracle and Monte-Carlo self checks");
    verify->add_option("--suite", suite, "all, montecarlo or oracles")
        ->check(CLI::IsMember({"all", "montecarlo", "oracles"}))
        ->capture_default_str();
    verify->add_option("--seed", verify_opts.seed, "Monte-Carlo seed")->capture_default_str();
    verify->add_option("--samples", verify_opts.samples, "Samples per moment case")->capture_default_str();
    verify->add_option("--workers", verify_opts.workers, "Worker threads (0 = all cores)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*cfrd) return run_cfrd(point);
        if (*rs) return run_rs(point);
        if (*classify) return run_classify(point, engine);
        if (*dump) return run_dump(point, dump_out);
        if (*scan) return run_scan(scan_args);
        if (*verify) {
            const auto report = cvpq::run_verify_suite(suite, verify_opts);
            std::cout << report.to_json() << '\n';
            return report.passed() ? 0 : kExitInternal;
        }
    } catch (const cvpq::InvalidParameter& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const cvpq::IllDefinedCovariance& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}
