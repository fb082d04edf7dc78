#pragma once

#include <json.hpp>

#include "psel/selection.hpp"

namespace psel {

// Wire representation of a selection outcome; see docs/formats.md and
// docs/selection_result.schema.json.
nlohmann::json selection_to_json(const SelectionResult& res);

}  // namespace psel
