#include "cvpq/cfrd.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "cvpq/errors.hpp"
#include "cvpq/parallel.hpp"

namespace cvpq {

SignCounts CfrdExpansion::negative_counts() const {
    SignCounts c;
    for (const auto& t : x_terms) c.a += t.sign < 0;
    for (const auto& t : y_terms) c.b += t.sign < 0;
    return c;
}

CfrdExpansion expand_complex_product(std::size_t modes) {
    if (modes < 1 || modes > kMaxExpansionModes)
        throw InvalidParameter("expand_complex_product supports 1 <= m <= " +
                               std::to_string(kMaxExpansionModes));
    // Start from the empty product 1 and multiply by (X_0^k + i X_1^k).
    CfrdExpansion e;
    e.modes = modes;
    e.x_terms.push_back({+1, 0});
    for (std::size_t k = 0; k < modes; ++k) {
        const std::uint64_t bit = std::uint64_t{1} << k;
        std::vector<SignedMonomial> x, y;
        x.reserve(e.x_terms.size() + e.y_terms.size());
        y.reserve(e.x_terms.size() + e.y_terms.size());
        for (const auto& t : e.x_terms) {
            x.push_back({t.sign, t.settings_index});        // Re * X_0
            y.push_back({t.sign, t.settings_index | bit});  // Re * i X_1
        }
        for (const auto& t : e.y_terms) {
            y.push_back({t.sign, t.settings_index});                                   // i Im * X_0
            x.push_back({static_cast<std::int8_t>(-t.sign), t.settings_index | bit});  // i Im * i X_1
        }
        e.x_terms = std::move(x);
        e.y_terms = std::move(y);
    }
    return e;
}

SignCounts sign_counts_recursive(std::size_t modes) {
    if (modes < 1 || modes > 62) throw InvalidParameter("sign_counts_recursive supports 1 <= m <= 62");
    SignCounts c;
    for (std::size_t m = 2; m <= modes; ++m) {
        const std::uint64_t half = std::uint64_t{1} << (m - 2);
        c = SignCounts{half + c.a - c.b, c.a + c.b};
    }
    return c;
}

namespace {

// cos(m pi/4), sin(m pi/4) from the eighth-turn table.
double quarter_pi_cos(std::size_t m) {
    constexpr double h = std::numbers::sqrt2 / 2.0;
    constexpr std::array<double, 8> table{1.0, h, 0.0, -h, -1.0, -h, 0.0, h};
    return table[m % 8];
}

double quarter_pi_sin(std::size_t m) { return quarter_pi_cos(m + 6); }

double round_integer(double value, const char* what) {
    const double r = std::round(value);
    if (std::abs(value - r) >= kIntegerResidue)
        throw OracleMismatch(std::string(what) + ": closed form is not integer-valued (" +
                             std::to_string(value) + ")");
    return r;
}

}  // namespace

SignCounts sign_counts_closed(std::size_t modes) {
    if (modes < 1 || modes > 52) throw InvalidParameter("sign_counts_closed supports 1 <= m <= 52");
    const double m = static_cast<double>(modes);
    const double half_total = std::exp2(m - 1.0);
    const double amp = std::exp2(m / 2.0);
    const double a = 0.5 * (half_total - amp * quarter_pi_cos(modes));
    const double b = 0.5 * (half_total - amp * quarter_pi_sin(modes));
    return SignCounts{static_cast<std::uint64_t>(round_integer(a, "a_m")),
                      static_cast<std::uint64_t>(round_integer(b, "b_m"))};
}

namespace {

const CfrdExpansion& cached_expansion(std::size_t modes) {
    static std::mutex mutex;
    static std::array<std::unique_ptr<const CfrdExpansion>, kMaxExpansionModes + 1> cache;
    if (modes < 1 || modes > kMaxExpansionModes)
        throw InvalidParameter("cfrd_evaluate supports 1 <= m <= " + std::to_string(kMaxExpansionModes));
    std::lock_guard lock(mutex);
    auto& slot = cache[modes];
    if (!slot) slot = std::make_unique<const CfrdExpansion>(expand_complex_product(modes));
    return *slot;
}

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace

CfrdValue cfrd_evaluate(const BellBehavior& behavior, unsigned workers) {
    const std::size_t m = behavior.modes();
    const auto& expansion = cached_expansion(m);
    const std::uint64_t n = behavior.settings_count();

    // Every correlator here uses a uniform exponent, so it depends only on the measure.
    std::vector<BellBehavior::MeasurePtr> distinct;
    std::vector<std::uint32_t> slot_of(n);
    for (std::uint64_t s = 0; s < n; ++s) {
        auto p = behavior.measure(s);
        std::size_t j = 0;
        while (j < distinct.size() && distinct[j] != p) ++j;
        if (j == distinct.size()) distinct.push_back(std::move(p));
        slot_of[s] = static_cast<std::uint32_t>(j);
    }

    const std::vector<unsigned> ones(m, 1u), twos(m, 2u);
    std::vector<double> first(distinct.size()), second(distinct.size());
    parallel_for(distinct.size(), workers, [&](std::size_t j) {
        first[j] = moment(*distinct[j], ones);
        second[j] = moment(*distinct[j], twos);
    });

    CompensatedSum x, y, rhs;
    for (const auto& t : expansion.x_terms) x.add(t.sign * first[slot_of[t.settings_index]]);
    for (const auto& t : expansion.y_terms) y.add(t.sign * first[slot_of[t.settings_index]]);
    for (std::uint64_t s = 0; s < n; ++s) rhs.add(second[slot_of[s]]);

    CfrdValue v;
    v.x_mean = x.value();
    v.y_mean = y.value();
    v.lhs = v.x_mean * v.x_mean + v.y_mean * v.y_mean;
    v.rhs = rhs.value();
    v.margin = v.rhs - v.lhs;
    return v;
}

double family_cfrd_coefficient(std::size_t modes) {
    if (modes < 2) throw InvalidParameter("family_cfrd_coefficient needs m >= 2");
    const double amp = std::exp2(static_cast<double>(modes) / 2.0);
    const double c = quarter_pi_cos(modes);
    const double s = quarter_pi_sin(modes);
    double alpha;
    if (modes % 2 == 0) {
        const double sign = ((modes / 2 + 1) % 2 == 0) ? 1.0 : -1.0;
        const double re = amp * c + sign * 2.0;
        alpha = re * re + amp * amp * s * s;
    } else {
        const double sign = (((modes - 1) / 2 + 1) % 2 == 0) ? 1.0 : -1.0;
        const double im = amp * s + sign * 2.0;
        alpha = im * im + amp * amp * c * c;
    }
    return modes <= 52 ? round_integer(alpha, "alpha_m") : alpha;
}

std::optional<double> violation_slope(std::size_t modes) {
    if (modes < 2) throw InvalidParameter("violation_slope needs m >= 2");
    // alpha^{1/m} / 2 = (alpha / 2^m)^{1/m}; the normalized ratio stays O(1) for every m.
    const double scale = std::exp2(1.0 - static_cast<double>(modes) / 2.0);
    const double c = quarter_pi_cos(modes);
    const double s = quarter_pi_sin(modes);
    double ratio;
    if (modes % 2 == 0) {
        const double sign = ((modes / 2 + 1) % 2 == 0) ? 1.0 : -1.0;
        const double re = c + sign * scale;
        ratio = re * re + s * s;
    } else {
        const double sign = (((modes - 1) / 2 + 1) % 2 == 0) ? 1.0 : -1.0;
        const double im = s + sign * scale;
        ratio = im * im + c * c;
    }
    const double radicand = std::expm1(std::log(ratio) / static_cast<double>(modes));
    if (!(radicand > 0.0)) return std::nullopt;
    return std::sqrt(radicand);
}

CfrdValue cfrd_closed_form(std::size_t modes, double l, double sigma) {
    const double m = static_cast<double>(modes);
    CfrdValue v;
    if (modes <= 52) {
        // <Re F>, <Im F> from the negative-term counts; the all-momentum term flips sign.
        const auto counts = sign_counts_closed(modes);
        const double half_total = std::exp2(m - 1.0);
        const double lm = std::pow(l, m);
        double x = half_total - 2.0 * static_cast<double>(counts.a);
        double y = half_total - 2.0 * static_cast<double>(counts.b);
        if (modes % 2 == 0)
            x += ((modes / 2 + 1) % 2 == 0 ? 2.0 : -2.0);
        else
            y += (((modes - 1) / 2 + 1) % 2 == 0 ? 2.0 : -2.0);
        v.x_mean = x * lm;
        v.y_mean = y * lm;
    } else {
        v.x_mean = v.y_mean = std::numeric_limits<double>::quiet_NaN();
    }
    v.lhs = family_cfrd_coefficient(modes) * std::pow(l, 2.0 * m);
    v.rhs = std::exp2(m) * std::pow(l * l + sigma * sigma, m);
    v.margin = v.rhs - v.lhs;
    return v;
}

}  // namespace cvpq
