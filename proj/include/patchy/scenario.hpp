#pragma once

#include <string>

#include "json.hpp"

#include "patchy/model.hpp"

namespace patchy {

// Throws Error(ParseError) on malformed input or unknown keys, then validates.
PatchLayout layout_from_json(const nlohmann::json& j);
nlohmann::json layout_to_json(const PatchLayout& layout);

PatchLayout parse_scenario(const std::string& text);
std::string dump_scenario(const PatchLayout& layout);
PatchLayout load_scenario(const std::string& path);

} // namespace patchy
