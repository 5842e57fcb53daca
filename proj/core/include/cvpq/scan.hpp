#pragma once

// Classification of (l, sigma) points into nonlocal / RS-violating /
// post-quantum regions, and grid scans over the parameter plane.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cvpq/behaviors.hpp"

namespace cvpq {

enum class Label {
    NoViolationDetected,
    NonlocalOnly,
    RsViolatingOnly,
    PostQuantum,
};
inline constexpr std::size_t kLabelCount = 4;

std::string to_string(Label label);

enum class Engine {
    ClosedForm,  ///< family formulas
    Generic,     ///< behavior construction + expansion + eigensolver
};

std::string to_string(Engine engine);
Engine parse_engine(const std::string& name);

struct Classification {
    double cfrd_margin = 0.0;
    double rs_min_eig = 0.0;
    double rs_tol = 0.0;
    Label label = Label::NoViolationDetected;
};

/// nonlocal: margin < 0. RS-violating: min eigenvalue < -tol.
Label label_for(double cfrd_margin, double rs_min_eig, double rs_tol);

/// family must be MMode (m >= 2) or TwoMode (m == 2); l, sigma >= 0 and finite.
Classification classify_point(std::size_t modes, Family family, double l, double sigma, double c,
                              Engine engine = Engine::ClosedForm);

/// Inclusive arithmetic grid start, start + step, ..., up to stop.
struct Range {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.01;

    std::size_t count() const;
    double at(std::size_t i) const { return start + static_cast<double>(i) * step; }

    /// "start:stop:step" or a single value.
    static Range parse(const std::string& text);
};

enum class OutputFormat { Csv, Json };
OutputFormat parse_format(const std::string& name);

struct ScanConfig {
    std::size_t modes = 3;
    Family family = Family::MMode;
    Range l{0.0, 1.5, 0.01};
    Range sigma{0.0, 1.0, 0.01};
    double c = 0.0;
    Engine engine = Engine::ClosedForm;
    OutputFormat format = OutputFormat::Csv;
    unsigned workers = 0;

    /// Throws InvalidParameter for empty ranges, nonpositive steps, negative
    /// or non-finite parameters, or a family/modes mismatch.
    void validate() const;
};

struct Cell {
    double l;
    double sigma;
    Classification classification;
};

struct ScanSummary {
    std::array<std::size_t, kLabelCount> counts{};
    std::size_t cfrd_violating = 0;
    std::size_t rs_violating = 0;
    /// Least-squares slope through the origin of the CFRD boundary, using the
    /// midpoint of each row's first violating -> non-violating transition.
    std::optional<double> fitted_slope;
    std::size_t boundary_rows = 0;
    std::optional<double> expected_slope;

    std::size_t count(Label label) const { return counts[static_cast<std::size_t>(label)]; }
};

struct ScanResult {
    ScanConfig config;
    std::vector<Cell> cells;  ///< row-major: l outer, sigma inner
    ScanSummary summary;

    const Cell& at(std::size_t l_index, std::size_t sigma_index) const {
        return cells[l_index * config.sigma.count() + sigma_index];
    }
};

/// Classifies every grid point in parallel; output is identical for any worker count.
ScanResult scan_region(const ScanConfig& config);

/// Header l,sigma,cfrd_margin,rs_min_eig,label; floats with 9 significant digits.
void write_csv(std::ostream& out, const ScanResult& result);

/// {meta: {modes, family, c, ranges, tol, version, ...}, summary: {...}, cells: [...]}.
void write_json(std::ostream& out, const ScanResult& result);

std::string library_version();

/// 9 significant digits, as used in every text output.
std::string format_real(double value);

}  // namespace cvpq
