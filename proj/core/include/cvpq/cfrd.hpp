#pragma once

// CFRD inequalities for the quadrature product F = prod_k (X_0^k + i X_1^k):
//   <Re F>^2 + <Im F>^2 <= < prod_k ((X_0^k)^2 + (X_1^k)^2) >.
// A negative margin certifies nonlocality.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cvpq/behaviors.hpp"

namespace cvpq {

/// sign * prod_k X^k_{s_k}, each mode used once with degree 1.
struct SignedMonomial {
    std::int8_t sign;
    std::uint64_t settings_index;

    SettingVector settings(std::size_t modes) const {
        return SettingVector::from_index(modes, settings_index);
    }
};

struct SignCounts {
    std::uint64_t a = 0;  ///< negative terms in the real part
    std::uint64_t b = 0;  ///< negative terms in the imaginary part

    friend bool operator==(const SignCounts&, const SignCounts&) = default;
};

struct CfrdExpansion {
    std::size_t modes = 0;
    std::vector<SignedMonomial> x_terms;  ///< real part
    std::vector<SignedMonomial> y_terms;  ///< imaginary part

    SignCounts negative_counts() const;
};

inline constexpr std::size_t kMaxExpansionModes = 24;

/// Multiplies out the product factor by factor. 1 <= m <= 24.
CfrdExpansion expand_complex_product(std::size_t modes);

/// a_m = 2^{m-2} + a_{m-1} - b_{m-1}, b_m = a_{m-1} + b_{m-1}, from (a_1, b_1) = (0, 0).
SignCounts sign_counts_recursive(std::size_t modes);

/// a_m = (2^{m-1} - 2^{m/2} cos(m pi/4)) / 2, b_m likewise with sin. Rounded
/// after checking the residue is below kIntegerResidue. 1 <= m <= 52.
SignCounts sign_counts_closed(std::size_t modes);

/// Residue allowed before rounding an integer-valued floating result.
inline constexpr double kIntegerResidue = 1e-6;

struct CfrdValue {
    double x_mean = 0.0;  ///< <Re F>
    double y_mean = 0.0;  ///< <Im F>
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  ///< rhs - lhs

    bool violated() const noexcept { return margin < 0.0; }
};

/// Evaluates the inequality on any behavior via the expansion and the
/// moment engine. Distinct measures are integrated in parallel; the sums run
/// in a fixed order so the result does not depend on workers.
CfrdValue cfrd_evaluate(const BellBehavior& behavior, unsigned workers = 1);

/// Coefficient alpha of l^{2m} in the family inequality alpha l^{2m} <= 2^m (l^2 + sigma^2)^m.
/// Integer-valued; rounded with a residue check for m <= 52.
double family_cfrd_coefficient(std::size_t modes);

/// tau_m with violation iff sigma < tau_m * l, or nullopt when the family
/// never violates the inequality for this m.
std::optional<double> violation_slope(std::size_t modes);

/// (alpha l^{2m}, 2^m (l^2 + sigma^2)^m) for the m-mode family.
CfrdValue cfrd_closed_form(std::size_t modes, double l, double sigma);

}  // namespace cvpq
