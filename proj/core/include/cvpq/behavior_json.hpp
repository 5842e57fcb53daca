#pragma once

#include <string>
#include <string_view>

#include "cvpq/behaviors.hpp"

namespace cvpq {

/// Serializes as
///   {modes, l, sigma, family, table: [{settings, components: [{weight, center, sigma}]}]}
/// with table rows in setting-index order. l and sigma are null for custom behaviors.
/// Lazy behaviors (m > 12) are rejected.
std::string behavior_to_json(const BellBehavior& behavior, int indent = 2);

/// Inverse of behavior_to_json. Rows may appear in any order but every
/// setting vector must occur exactly once.
BellBehavior behavior_from_json(std::string_view text);

}  // namespace cvpq
