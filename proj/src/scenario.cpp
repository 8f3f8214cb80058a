#include "patchy/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/core.h>

#include "patchy/errors.hpp"

namespace patchy {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const char* where)
{
    if (!j.is_object()) throw Error(ErrorCode::ParseError, fmt::format("{} must be an object", where));
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw Error(ErrorCode::ParseError, fmt::format("unknown key '{}' in {}", key, where));
}

double number(const json& j, const char* key, const char* where)
{
    if (!j.contains(key)) throw Error(ErrorCode::ParseError, fmt::format("missing '{}' in {}", key, where));
    const auto& v = j.at(key);
    if (!v.is_number()) throw Error(ErrorCode::ParseError, fmt::format("'{}' in {} must be a number", key, where));
    return v.get<double>();
}

Vec vector_of(const json& j, const char* key, const char* where)
{
    if (!j.contains(key) || !j.at(key).is_array())
        throw Error(ErrorCode::ParseError, fmt::format("'{}' in {} must be an array", key, where));
    Vec out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw Error(ErrorCode::ParseError, fmt::format("'{}' in {} holds a non-number", key, where));
        out.push_back(v.get<double>());
    }
    return out;
}

Zone scalar_zone(const json& j, const char* where)
{
    reject_unknown(j, {"diffusion", "growth"}, where);
    return ScalarZone{number(j, "diffusion", where), number(j, "growth", where)};
}

Zone stage_zone(const json& j, const char* where)
{
    reject_unknown(j, {"A_diag", "M", "births", "deaths"}, where);
    StageZone z;
    z.diffusion = vector_of(j, "A_diag", where);
    const bool has_m = j.contains("M");
    const bool has_bd = j.contains("births") || j.contains("deaths");
    if (has_m == has_bd)
        throw Error(ErrorCode::ParseError, fmt::format("{} needs either 'M' or 'births'/'deaths'", where));
    if (has_m) {
        const auto& rows = j.at("M");
        if (!rows.is_array() || rows.empty())
            throw Error(ErrorCode::ParseError, fmt::format("'M' in {} must be an array of rows", where));
        const std::size_t n = rows.size();
        z.reaction = Mat(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!rows[i].is_array() || rows[i].size() != n)
                throw Error(ErrorCode::DimensionMismatch, fmt::format("'M' in {} is not square", where));
            for (std::size_t k = 0; k < n; ++k) {
                if (!rows[i][k].is_number())
                    throw Error(ErrorCode::ParseError, fmt::format("'M' in {} holds a non-number", where));
                z.reaction(i, k) = rows[i][k].get<double>();
            }
        }
    } else {
        z.reaction = build_stage_matrix({vector_of(j, "deaths", where), vector_of(j, "births", where)});
    }
    return z;
}

json zone_to_json(const Zone& z)
{
    if (const auto* s = std::get_if<ScalarZone>(&z)) return json{{"diffusion", s->diffusion}, {"growth", s->growth}};
    const auto& st = std::get<StageZone>(z);
    json rows = json::array();
    for (std::size_t i = 0; i < st.reaction.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < st.reaction.cols(); ++k) row.push_back(st.reaction(i, k));
        rows.push_back(row);
    }
    return json{{"A_diag", st.diffusion}, {"M", rows}};
}

} // namespace

PatchLayout layout_from_json(const json& j)
{
    reject_unknown(j, {"model", "beneficial", "control", "R", "r", "K", "bc"}, "scenario");
    if (!j.contains("model") || !j.at("model").is_string())
        throw Error(ErrorCode::ParseError, "'model' must be \"scalar\" or \"staged\"");
    const std::string model = j.at("model").get<std::string>();
    if (model != "scalar" && model != "staged")
        throw Error(ErrorCode::ParseError, fmt::format("unknown model '{}'", model));
    for (const char* key : {"beneficial", "control"})
        if (!j.contains(key)) throw Error(ErrorCode::ParseError, fmt::format("missing '{}'", key));

    PatchLayout layout;
    auto zone = model == "scalar" ? scalar_zone : stage_zone;
    layout.beneficial = zone(j.at("beneficial"), "beneficial");
    layout.control = zone(j.at("control"), "control");
    layout.R = number(j, "R", "scenario");
    layout.r = j.contains("r") ? number(j, "r", "scenario") : 0.0;
    if (j.contains("K")) {
        if (!j.at("K").is_number_integer()) throw Error(ErrorCode::ParseError, "'K' must be an integer");
        layout.K = j.at("K").get<int>();
    }
    if (j.contains("bc")) {
        if (!j.at("bc").is_string()) throw Error(ErrorCode::ParseError, "'bc' must be a string");
        layout.bc = boundary_from_string(j.at("bc").get<std::string>());
    }
    return validate_layout(layout);
}

json layout_to_json(const PatchLayout& layout)
{
    return json{{"model", is_scalar(layout) ? "scalar" : "staged"},
                {"beneficial", zone_to_json(layout.beneficial)},
                {"control", zone_to_json(layout.control)},
                {"R", layout.R},
                {"r", layout.r},
                {"K", layout.K},
                {"bc", to_string(layout.bc)}};
}

PatchLayout parse_scenario(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return layout_from_json(j);
}

std::string dump_scenario(const PatchLayout& layout) { return layout_to_json(layout).dump(2) + "\n"; }

PatchLayout load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, fmt::format("cannot open '{}'", path));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

} // namespace patchy
