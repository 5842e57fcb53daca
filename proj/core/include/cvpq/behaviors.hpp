#pragma once

// Bell behaviors: one outcome measure over R^m per global setting vector.
// Setting 0 is a position measurement, setting 1 a momentum measurement.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cvpq/measures.hpp"

namespace cvpq {

/// One binary setting per mode. Bit i of index() is the setting of mode i.
class SettingVector {
public:
    explicit SettingVector(std::vector<std::uint8_t> bits);
    static SettingVector from_index(std::size_t modes, std::uint64_t index);
    static SettingVector all(std::size_t modes, std::uint8_t setting);

    std::size_t modes() const noexcept { return bits_.size(); }
    std::uint8_t operator[](std::size_t mode) const { return bits_.at(mode); }
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
    std::uint64_t index() const noexcept;
    std::size_t count_ones() const noexcept;

    /// Mode 1 first, e.g. "011".
    std::string to_string() const;

    friend bool operator==(const SettingVector&, const SettingVector&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

enum class Family { MMode, TwoMode, Custom };

std::string to_string(Family family);
Family parse_family(const std::string& name);

enum class Parity { Odd, Even };

/// All sign patterns of (+-l, ..., +-l) in R^m whose number of minus signs
/// has the given parity, ordered by increasing minus-sign mask.
std::vector<Point> signed_centers(std::size_t modes, double l, Parity parity);

/// Uniform mixture of N(center, sigma) over signed_centers(modes, l, parity).
MixtureMeasure signed_center_mixture(std::size_t modes, double l, double sigma, Parity parity);

struct NoSignalingReport {
    bool ok = true;
    double worst_violation = 0.0;
    /// Set when only subsets of size <= 2 were examined (large m).
    bool restricted = false;
    std::string note;
};

/// Immutable map from setting vectors to measures of dimension modes().
/// Measures are shared between settings that use the same distribution.
class BellBehavior {
public:
    using MeasurePtr = std::shared_ptr<const MixtureMeasure>;

    /// Largest mode count stored as an explicit 2^m table.
    static constexpr std::size_t kMaxExtensionalModes = 12;
    static constexpr std::size_t kMaxModes = 24;

    /// table[s] is the measure for SettingVector::from_index(modes, s).
    static BellBehavior from_table(std::size_t modes, std::vector<MeasurePtr> table,
                                   Family family = Family::Custom,
                                   std::optional<double> l = std::nullopt,
                                   std::optional<double> sigma = std::nullopt);
    static BellBehavior from_table(std::size_t modes, std::vector<MixtureMeasure> table);

    std::size_t modes() const noexcept { return modes_; }
    std::uint64_t settings_count() const noexcept { return std::uint64_t{1} << modes_; }
    Family family() const noexcept { return family_; }
    std::optional<double> l() const noexcept { return l_; }
    std::optional<double> sigma() const noexcept { return sigma_; }

    /// True when measures are generated on demand instead of stored per setting.
    bool is_lazy() const noexcept { return lazy_ != nullptr; }

    MeasurePtr measure(const SettingVector& settings) const;
    MeasurePtr measure(std::uint64_t index) const;

private:
    struct LazyFamily;

    BellBehavior() = default;

    std::size_t modes_ = 0;
    Family family_ = Family::Custom;
    std::optional<double> l_;
    std::optional<double> sigma_;
    std::vector<MeasurePtr> table_;
    std::shared_ptr<const LazyFamily> lazy_;

    // The no-signaling verdict is a pure function of the table, so it is
    // computed once and shared by copies.
    struct NoSignalingMemo;
    static std::shared_ptr<NoSignalingMemo> new_memo();
    std::shared_ptr<NoSignalingMemo> ns_memo_ = new_memo();

    friend BellBehavior behavior_mmode(std::size_t, double, double);
    friend NoSignalingReport check_no_signaling(const BellBehavior&);
};

/// Setting (1,...,1) maps to the odd-parity uniform mixture, every other
/// setting to the even-parity one. Lazy for m > kMaxExtensionalModes.
BellBehavior behavior_mmode(std::size_t modes, double l, double sigma);

/// Two-mode behavior: xi_00 = xi_01 = xi_10 = 1/2[N((l,l)) + N((-l,-l))],
/// xi_11 = 1/2[N((l,-l)) + N((-l,l))].
BellBehavior behavior_2mode(double l, double sigma);

/// Compares marginals on every nonempty proper subset K of modes across all
/// setting vectors that agree on K. ok iff the worst canonical discrepancy
/// is <= kNoSignalingTolerance.
inline constexpr double kNoSignalingTolerance = 1e-12;
NoSignalingReport check_no_signaling(const BellBehavior& behavior);

/// Per-mode (setting, exponent) pairs.
struct MonomialQuery {
    struct Factor {
        std::uint8_t setting;
        unsigned exponent;
    };
    std::vector<Factor> factors;

    static MonomialQuery uniform(const SettingVector& settings, unsigned exponent);
};

/// <prod_k (X^k_{s_k})^{n_k}> evaluated under the query's setting vector.
double correlator(const BellBehavior& behavior, const MonomialQuery& query);

}  // namespace cvpq
