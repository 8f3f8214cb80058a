#pragma once

#include <optional>
#include <string>
#include <vector>

#include "patchy/model.hpp"

namespace patchy {

struct Preset {
    std::string name;
    std::string description;
    PatchLayout layout;
    std::optional<double> reference_min_mortality; // externally quoted figure, checked not trusted
};

const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);

} // namespace patchy
