#include "cvpq/behaviors.hpp"

#include <bit>
#include <cmath>
#include <mutex>
#include <set>
#include <utility>

#include "cvpq/errors.hpp"

namespace cvpq {

SettingVector::SettingVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) throw InvalidParameter("setting vector needs at least one mode");
    for (auto b : bits_)
        if (b > 1) throw InvalidParameter("settings must be 0 (position) or 1 (momentum)");
}

SettingVector SettingVector::from_index(std::size_t modes, std::uint64_t index) {
    if (modes == 0 || modes > 63) throw InvalidParameter("setting vector mode count out of range");
    if (index >> modes) throw InvalidParameter("setting index out of range");
    std::vector<std::uint8_t> bits(modes);
    for (std::size_t i = 0; i < modes; ++i) bits[i] = static_cast<std::uint8_t>((index >> i) & 1u);
    return SettingVector(std::move(bits));
}

SettingVector SettingVector::all(std::size_t modes, std::uint8_t setting) {
    return SettingVector(std::vector<std::uint8_t>(modes, setting));
}

std::uint64_t SettingVector::index() const noexcept {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < bits_.size(); ++i) idx |= std::uint64_t{bits_[i]} << i;
    return idx;
}

std::size_t SettingVector::count_ones() const noexcept {
    std::size_t n = 0;
    for (auto b : bits_) n += b;
    return n;
}

std::string SettingVector::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) s.push_back(b ? '1' : '0');
    return s;
}

std::string to_string(Family family) {
    switch (family) {
        case Family::MMode: return "mmode";
        case Family::TwoMode: return "2mode";
        case Family::Custom: return "custom";
    }
    return "custom";
}

Family parse_family(const std::string& name) {
    if (name == "mmode") return Family::MMode;
    if (name == "2mode") return Family::TwoMode;
    if (name == "custom") return Family::Custom;
    throw InvalidParameter("unknown behavior family '" + name + "'");
}

std::vector<Point> signed_centers(std::size_t modes, double l, Parity parity) {
    if (modes == 0 || modes > BellBehavior::kMaxModes)
        throw InvalidParameter("signed_centers: mode count out of range");
    const unsigned want = parity == Parity::Odd ? 1u : 0u;
    std::vector<Point> centers;
    centers.reserve(std::size_t{1} << (modes - 1));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << modes); ++mask) {
        if ((static_cast<unsigned>(std::popcount(mask)) & 1u) != want) continue;
        Point c(modes);
        for (std::size_t i = 0; i < modes; ++i) c[i] = ((mask >> i) & 1u) ? -l : l;
        centers.push_back(std::move(c));
    }
    return centers;
}

MixtureMeasure signed_center_mixture(std::size_t modes, double l, double sigma, Parity parity) {
    auto centers = signed_centers(modes, l, parity);
    // Dyadic weight, exact in binary.
    const double w = 1.0 / static_cast<double>(centers.size());
    std::vector<WeightedComponent> comps;
    comps.reserve(centers.size());
    for (auto& c : centers) comps.push_back({w, GaussianComponent(std::move(c), sigma)});
    return MixtureMeasure(std::move(comps));
}

struct BellBehavior::LazyFamily {
    std::size_t modes;
    double l;
    double sigma;
    mutable std::once_flag odd_once;
    mutable std::once_flag even_once;
    mutable MeasurePtr odd;
    mutable MeasurePtr even;

    MeasurePtr get(bool all_ones) const {
        if (all_ones) {
            std::call_once(odd_once, [this] {
                odd = std::make_shared<const MixtureMeasure>(
                    signed_center_mixture(modes, l, sigma, Parity::Odd));
            });
            return odd;
        }
        std::call_once(even_once, [this] {
            even = std::make_shared<const MixtureMeasure>(
                signed_center_mixture(modes, l, sigma, Parity::Even));
        });
        return even;
    }
};

BellBehavior BellBehavior::from_table(std::size_t modes, std::vector<MeasurePtr> table,
                                      Family family, std::optional<double> l,
                                      std::optional<double> sigma) {
    if (modes == 0 || modes > kMaxExtensionalModes)
        throw InvalidParameter("explicit behavior tables support 1.." +
                               std::to_string(kMaxExtensionalModes) + " modes");
    if (table.size() != (std::size_t{1} << modes))
        throw InvalidParameter("behavior table needs exactly 2^m entries");
    for (const auto& m : table) {
        if (!m) throw InvalidParameter("behavior table contains a null measure");
        if (m->dimension() != modes)
            throw InvalidParameter("behavior measure dimension differs from mode count");
    }
    BellBehavior b;
    b.modes_ = modes;
    b.family_ = family;
    b.l_ = l;
    b.sigma_ = sigma;
    b.table_ = std::move(table);
    return b;
}

BellBehavior BellBehavior::from_table(std::size_t modes, std::vector<MixtureMeasure> table) {
    std::vector<MeasurePtr> ptrs;
    ptrs.reserve(table.size());
    for (auto& m : table) ptrs.push_back(std::make_shared<const MixtureMeasure>(std::move(m)));
    return from_table(modes, std::move(ptrs));
}

BellBehavior::MeasurePtr BellBehavior::measure(std::uint64_t index) const {
    if (index >= settings_count()) throw InvalidParameter("setting index out of range");
    if (lazy_) return lazy_->get(index == settings_count() - 1);
    return table_[index];
}

BellBehavior::MeasurePtr BellBehavior::measure(const SettingVector& settings) const {
    if (settings.modes() != modes_)
        throw InvalidParameter("setting vector length differs from mode count");
    return measure(settings.index());
}

namespace {

void check_family_parameters(double l, double sigma) {
    if (!std::isfinite(l) || l < 0.0) throw InvalidParameter("l must be finite and >= 0");
    if (!std::isfinite(sigma) || sigma < 0.0) throw InvalidParameter("sigma must be finite and >= 0");
}

}  // namespace

BellBehavior behavior_mmode(std::size_t modes, double l, double sigma) {
    if (modes < 2) throw InvalidParameter("behavior_mmode needs m >= 2");
    if (modes > BellBehavior::kMaxModes)
        throw InvalidParameter("behavior_mmode supports m <= " +
                               std::to_string(BellBehavior::kMaxModes));
    check_family_parameters(l, sigma);

    auto lazy = std::make_shared<BellBehavior::LazyFamily>();
    lazy->modes = modes;
    lazy->l = l;
    lazy->sigma = sigma;

    if (modes > BellBehavior::kMaxExtensionalModes) {
        BellBehavior b;
        b.modes_ = modes;
        b.family_ = Family::MMode;
        b.l_ = l;
        b.sigma_ = sigma;
        b.lazy_ = std::move(lazy);
        return b;
    }

    const std::uint64_t n = std::uint64_t{1} << modes;
    auto odd = lazy->get(true);
    auto even = lazy->get(false);
    std::vector<BellBehavior::MeasurePtr> table(n, even);
    table[n - 1] = odd;
    return BellBehavior::from_table(modes, std::move(table), Family::MMode, l, sigma);
}

BellBehavior behavior_2mode(double l, double sigma) {
    check_family_parameters(l, sigma);
    auto same = std::make_shared<const MixtureMeasure>(
        mix({{0.5, normal_measure({l, l}, sigma)}, {0.5, normal_measure({-l, -l}, sigma)}}));
    auto anti = std::make_shared<const MixtureMeasure>(
        mix({{0.5, normal_measure({l, -l}, sigma)}, {0.5, normal_measure({-l, l}, sigma)}}));
    return BellBehavior::from_table(2, {same, same, same, anti}, Family::TwoMode, l, sigma);
}

namespace {

// Settings compared within one group when only low-order subsets are checked:
// complement all zeros, all ones, and each single one.
std::vector<std::uint64_t> restricted_group(std::size_t modes, std::uint64_t subset,
                                            std::uint64_t key) {
    const std::uint64_t full = (std::uint64_t{1} << modes) - 1;
    const std::uint64_t comp = full & ~subset;
    std::vector<std::uint64_t> out{key, key | comp};
    for (std::size_t i = 0; i < modes; ++i)
        if ((comp >> i) & 1u) out.push_back(key | (std::uint64_t{1} << i));
    return out;
}

}  // namespace

struct BellBehavior::NoSignalingMemo {
    std::once_flag once;
    NoSignalingReport report;
};

std::shared_ptr<BellBehavior::NoSignalingMemo> BellBehavior::new_memo() {
    return std::make_shared<NoSignalingMemo>();
}

namespace {

NoSignalingReport compute_no_signaling(const BellBehavior& behavior) {
    NoSignalingReport report;
    const std::size_t m = behavior.modes();
    if (m < 2) return report;

    const bool restricted = m > BellBehavior::kMaxExtensionalModes;
    if (restricted) {
        report.restricted = true;
        report.note = "m > " + std::to_string(BellBehavior::kMaxExtensionalModes) +
                      ": only subsets of size <= 2 were checked";
    }

    const std::uint64_t n = behavior.settings_count();
    const std::uint64_t full = n - 1;
    for (std::uint64_t subset = 1; subset < full; ++subset) {
        if (restricted && std::popcount(subset) > 2) continue;

        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < m; ++i)
            if ((subset >> i) & 1u) keep.push_back(i);

        // Marginals are computed once per distinct source measure.
        std::vector<std::pair<BellBehavior::MeasurePtr, MixtureMeasure>> cache;
        auto marginal_of = [&](const BellBehavior::MeasurePtr& src) -> const MixtureMeasure& {
            for (const auto& [p, marg] : cache)
                if (p == src) return marg;
            cache.emplace_back(src, marginalize(*src, keep));
            return cache.back().second;
        };

        // The same pair of source measures recurs under many keys; compare it once.
        std::set<std::pair<const MixtureMeasure*, const MixtureMeasure*>> compared;
        auto compare_group = [&](const std::vector<std::uint64_t>& settings) {
            std::vector<BellBehavior::MeasurePtr> distinct;
            for (auto s : settings) {
                auto p = behavior.measure(s);
                bool seen = false;
                for (const auto& d : distinct) seen = seen || d == p;
                if (!seen) distinct.push_back(std::move(p));
            }
            for (std::size_t a = 0; a < distinct.size(); ++a)
                for (std::size_t b = a + 1; b < distinct.size(); ++b) {
                    auto pa = distinct[a].get(), pb = distinct[b].get();
                    if (pb < pa) std::swap(pa, pb);
                    if (!compared.insert({pa, pb}).second) continue;
                    const double d = mixture_distance(marginal_of(distinct[a]), marginal_of(distinct[b]));
                    if (d > report.worst_violation) report.worst_violation = d;
                }
        };

        // Enumerate each assignment on the subset (key) by iterating submasks.
        std::uint64_t key = 0;
        do {
            if (restricted) {
                compare_group(restricted_group(m, subset, key));
            } else {
                std::vector<std::uint64_t> group;
                const std::uint64_t comp = full & ~subset;
                std::uint64_t rest = 0;
                do {
                    group.push_back(key | rest);
                    rest = (rest - comp) & comp;
                } while (rest != 0);
                compare_group(group);
            }
            key = (key - subset) & subset;
        } while (key != 0);
    }
    report.ok = report.worst_violation <= kNoSignalingTolerance;
    return report;
}

}  // namespace

NoSignalingReport check_no_signaling(const BellBehavior& behavior) {
    auto& memo = *behavior.ns_memo_;
    std::call_once(memo.once, [&] { memo.report = compute_no_signaling(behavior); });
    return memo.report;
}

MonomialQuery MonomialQuery::uniform(const SettingVector& settings, unsigned exponent) {
    MonomialQuery q;
    q.factors.reserve(settings.modes());
    for (auto b : settings.bits()) q.factors.push_back({b, exponent});
    return q;
}

double correlator(const BellBehavior& behavior, const MonomialQuery& query) {
    if (query.factors.size() != behavior.modes())
        throw InvalidParameter("monomial query must assign one factor per mode");
    std::uint64_t index = 0;
    std::vector<unsigned> exponents;
    exponents.reserve(query.factors.size());
    for (std::size_t i = 0; i < query.factors.size(); ++i) {
        const auto& f = query.factors[i];
        if (f.setting > 1) throw InvalidParameter("monomial query setting must be 0 or 1");
        index |= std::uint64_t{f.setting} << i;
        exponents.push_back(f.exponent);
    }
    return moment(*behavior.measure(index), exponents);
}

}  // namespace cvpq
