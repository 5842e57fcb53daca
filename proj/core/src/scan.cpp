#include "cvpq/scan.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "cvpq/cfrd.hpp"
#include "cvpq/errors.hpp"
#include "cvpq/parallel.hpp"
#include "cvpq/rswitness.hpp"

#ifndef CVPQ_VERSION
#define CVPQ_VERSION "0.0.0"
#endif

namespace cvpq {

std::string library_version() { return CVPQ_VERSION; }

std::string to_string(Label label) {
    switch (label) {
        case Label::NoViolationDetected: return "no-violation-detected";
        case Label::NonlocalOnly: return "nonlocal-only";
        case Label::RsViolatingOnly: return "rs-violating-only";
        case Label::PostQuantum: return "post-quantum";
    }
    return "no-violation-detected";
}

std::string to_string(Engine engine) {
    return engine == Engine::ClosedForm ? "closed-form" : "generic";
}

Engine parse_engine(const std::string& name) {
    if (name == "closed-form") return Engine::ClosedForm;
    if (name == "generic") return Engine::Generic;
    throw InvalidParameter("unknown engine '" + name + "' (expected closed-form or generic)");
}

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw InvalidParameter("unknown format '" + name + "' (expected csv or json)");
}

Label label_for(double cfrd_margin, double rs_min_eig, double rs_tol) {
    const bool nonlocal = cfrd_margin < 0.0;
    const bool rs = rs_min_eig < -rs_tol;
    if (nonlocal && rs) return Label::PostQuantum;
    if (nonlocal) return Label::NonlocalOnly;
    if (rs) return Label::RsViolatingOnly;
    return Label::NoViolationDetected;
}

namespace {

void validate_point(std::size_t modes, Family family, double l, double sigma, double c) {
    if (family == Family::Custom) throw InvalidParameter("classification needs the mmode or 2mode family");
    if (family == Family::TwoMode && modes != 2) throw InvalidParameter("the 2mode family has exactly 2 modes");
    if (modes < 2) throw InvalidParameter("classification needs m >= 2");
    if (!std::isfinite(l) || l < 0.0) throw InvalidParameter("l must be finite and >= 0");
    if (!std::isfinite(sigma) || sigma < 0.0) throw InvalidParameter("sigma must be finite and >= 0");
    if (!std::isfinite(c)) throw InvalidParameter("c must be finite");
}

}  // namespace

Classification classify_point(std::size_t modes, Family family, double l, double sigma, double c,
                              Engine engine) {
    validate_point(modes, family, l, sigma, c);
    Classification out;
    if (engine == Engine::ClosedForm) {
        // The 2mode family coincides with the m = 2 member of the mmode family.
        out.cfrd_margin = cfrd_closed_form(modes, l, sigma).margin;
        out.rs_min_eig = rs_min_eigenvalue_family(modes, l, sigma, c);
        out.rs_tol = 1e-9 * (1.0 + l * l + sigma * sigma);
    } else {
        const auto behavior = family == Family::TwoMode ? behavior_2mode(l, sigma) : behavior_mmode(modes, l, sigma);
        out.cfrd_margin = cfrd_evaluate(behavior).margin;
        const auto v = covariance_matrix(behavior, JointChoice(c));
        out.rs_min_eig = rs_min_eigenvalue(v);
        out.rs_tol = rs_tolerance(v);
    }
    out.label = label_for(out.cfrd_margin, out.rs_min_eig, out.rs_tol);
    return out;
}

std::size_t Range::count() const {
    if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(start) || !std::isfinite(stop) || stop < start)
        return 0;
    // Relative slack so that e.g. 0:1:0.01 includes 1.
    return static_cast<std::size_t>(std::floor((stop - start) / step * (1.0 + 1e-12) + 1e-9)) + 1;
}

Range Range::parse(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw InvalidParameter("range '" + text + "': cannot parse '" + item + "'");
        }
        if (used != item.size()) throw InvalidParameter("range '" + text + "': trailing characters");
        parts.push_back(v);
    }
    if (parts.size() == 1) return Range{parts[0], parts[0], 1.0};
    if (parts.size() == 3) return Range{parts[0], parts[1], parts[2]};
    throw InvalidParameter("range '" + text + "' must be start:stop:step or a single value");
}

void ScanConfig::validate() const {
    auto check = [](const Range& r, const char* name) {
        if (!(r.step > 0.0) || !std::isfinite(r.step))
            throw InvalidParameter(std::string(name) + " range step must be positive");
        if (r.count() == 0) throw InvalidParameter(std::string(name) + " range is empty");
        if (r.start < 0.0) throw InvalidParameter(std::string(name) + " range must be nonnegative");
    };
    check(l, "l");
    check(sigma, "sigma");
    validate_point(modes, family, l.start, sigma.start, c);
}

namespace {

ScanSummary summarize(const ScanConfig& config, const std::vector<Cell>& cells) {
    ScanSummary s;
    for (const auto& cell : cells) {
        const auto& k = cell.classification;
        ++s.counts[static_cast<std::size_t>(k.label)];
        s.cfrd_violating += k.cfrd_margin < 0.0;
        s.rs_violating += k.rs_min_eig < -k.rs_tol;
    }

    const std::size_t rows = config.l.count();
    const std::size_t cols = config.sigma.count();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        const double l = config.l.at(i);
        if (!(l > 0.0)) continue;
        for (std::size_t j = 1; j < cols; ++j) {
            const bool before = cells[i * cols + j - 1].classification.cfrd_margin < 0.0;
            const bool after = cells[i * cols + j].classification.cfrd_margin < 0.0;
            if (before && !after) {
                const double sigma_b = 0.5 * (config.sigma.at(j - 1) + config.sigma.at(j));
                sxy += l * sigma_b;
                sxx += l * l;
                ++s.boundary_rows;
                break;
            }
        }
    }
    if (s.boundary_rows > 0) s.fitted_slope = sxy / sxx;
    if (config.family == Family::MMode || config.family == Family::TwoMode)
        s.expected_slope = violation_slope(config.modes);
    return s;
}

}  // namespace

ScanResult scan_region(const ScanConfig& config) {
    config.validate();
    ScanResult result;
    result.config = config;
    const std::size_t rows = config.l.count();
    const std::size_t cols = config.sigma.count();
    result.cells.resize(rows * cols);
    parallel_for(rows * cols, config.workers, [&](std::size_t idx) {
        const double l = config.l.at(idx / cols);
        const double sigma = config.sigma.at(idx % cols);
        result.cells[idx] = Cell{l, sigma, classify_point(config.modes, config.family, l, sigma, config.c, config.engine)};
    });
    result.summary = summarize(config, result.cells);
    return result;
}

std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

void write_csv(std::ostream& out, const ScanResult& result) {
    out << "l,sigma,cfrd_margin,rs_min_eig,label\n";
    for (const auto& cell : result.cells) {
        const auto& k = cell.classification;
        out << format_real(cell.l) << ',' << format_real(cell.sigma) << ',' << format_real(k.cfrd_margin) << ','
            << format_real(k.rs_min_eig) << ',' << to_string(k.label) << '\n';
    }
}

void write_json(std::ostream& out, const ScanResult& result) {
    using nlohmann::json;
    const auto& cfg = result.config;
    auto range = [](const Range& r) { return json{{"start", r.start}, {"stop", r.stop}, {"step", r.step}, {"count", r.count()}}; };

    json doc;
    doc["meta"] = {
        {"modes", cfg.modes},
        {"family", to_string(cfg.family)},
        {"c", cfg.c},
        {"ranges", {{"l", range(cfg.l)}, {"sigma", range(cfg.sigma)}}},
        {"tol", {{"rs_relative", 1e-9}, {"rule", "min_eig < -1e-9 * (1 + max diagonal)"}}},
        {"engine", to_string(cfg.engine)},
        {"version", library_version()},
    };

    const auto& s = result.summary;
    json counts = json::object();
    for (std::size_t k = 0; k < kLabelCount; ++k) counts[to_string(static_cast<Label>(k))] = s.counts[k];
    doc["summary"] = {
        {"counts", counts},
        {"cfrd_violating", s.cfrd_violating},
        {"rs_violating", s.rs_violating},
        {"boundary_rows", s.boundary_rows},
        {"fitted_slope", s.fitted_slope ? json(*s.fitted_slope) : json(nullptr)},
        {"expected_slope", s.expected_slope ? json(*s.expected_slope) : json(nullptr)},
    };

    json cells = json::array();
    for (const auto& cell : result.cells) {
        const auto& k = cell.classification;
        cells.push_back({{"l", cell.l},
                         {"sigma", cell.sigma},
                         {"cfrd_margin", k.cfrd_margin},
                         {"rs_min_eig", k.rs_min_eig},
                         {"label", to_string(k.label)}});
    }
    doc["cells"] = std::move(cells);
    out << doc.dump() << '\n';
}

}  // namespace cvpq
