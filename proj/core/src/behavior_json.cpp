#include "cvpq/behavior_json.hpp"

#include <json.hpp>

#include "cvpq/errors.hpp"

namespace cvpq {

using nlohmann::json;

std::string behavior_to_json(const BellBehavior& behavior, int indent) {
    if (behavior.is_lazy())
        throw InvalidParameter("behavior_to_json: behaviors with more than " +
                               std::to_string(BellBehavior::kMaxExtensionalModes) +
                               " modes are not serialized");
    json doc;
    doc["modes"] = behavior.modes();
    doc["l"] = behavior.l() ? json(*behavior.l()) : json(nullptr);
    doc["sigma"] = behavior.sigma() ? json(*behavior.sigma()) : json(nullptr);
    doc["family"] = to_string(behavior.family());

    json table = json::array();
    for (std::uint64_t s = 0; s < behavior.settings_count(); ++s) {
        const auto settings = SettingVector::from_index(behavior.modes(), s);
        json comps = json::array();
        for (const auto& [w, c] : behavior.measure(s)->components())
            comps.push_back({{"weight", w}, {"center", c.center()}, {"sigma", c.sigma()}});
        table.push_back({{"settings", settings.bits()}, {"components", std::move(comps)}});
    }
    doc["table"] = std::move(table);
    return doc.dump(indent);
}

BellBehavior behavior_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidParameter(std::string("behavior json: ") + e.what());
    }
    try {
        const auto modes = doc.at("modes").get<std::size_t>();
        if (modes == 0 || modes > BellBehavior::kMaxExtensionalModes)
            throw InvalidParameter("behavior json: modes out of range");
        const Family family = parse_family(doc.at("family").get<std::string>());
        std::optional<double> l, sigma;
        if (doc.contains("l") && !doc["l"].is_null()) l = doc["l"].get<double>();
        if (doc.contains("sigma") && !doc["sigma"].is_null()) sigma = doc["sigma"].get<double>();

        std::vector<BellBehavior::MeasurePtr> table(std::size_t{1} << modes);
        for (const auto& row : doc.at("table")) {
            const SettingVector settings(row.at("settings").get<std::vector<std::uint8_t>>());
            if (settings.modes() != modes)
                throw InvalidParameter("behavior json: settings length differs from modes");
            auto& slot = table[settings.index()];
            if (slot) throw InvalidParameter("behavior json: duplicate settings " + settings.to_string());

            std::vector<WeightedComponent> comps;
            for (const auto& c : row.at("components"))
                comps.push_back({c.at("weight").get<double>(),
                                 GaussianComponent(c.at("center").get<Point>(), c.at("sigma").get<double>())});
            slot = std::make_shared<const MixtureMeasure>(std::move(comps));
        }
        for (const auto& slot : table)
            if (!slot) throw InvalidParameter("behavior json: table is missing setting vectors");
        return BellBehavior::from_table(modes, std::move(table), family, l, sigma);
    } catch (const json::exception& e) {
        throw InvalidParameter(std::string("behavior json: ") + e.what());
    }
}

}  // namespace cvpq
