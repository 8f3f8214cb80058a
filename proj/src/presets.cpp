#include "patchy/presets.hpp"

#include <fmt/core.h>

#include "patchy/errors.hpp"

namespace patchy {

namespace {

PatchLayout scalar(double a, double lambda, double b, double mu, double R, double r)
{
    PatchLayout l;
    l.beneficial = ScalarZone{a, lambda};
    l.control = ScalarZone{b, -mu};
    l.R = R;
    l.r = r;
    l.K = 1;
    l.bc = Boundary::Periodic;
    return validate_layout(l);
}

// A^-1 M_ben = [[-0.91, 2.24], [0.01, -0.02]] exactly; control births halved, deaths raised to 40.
PatchLayout taiga_two_stage()
{
    const Vec A{1.0 / 0.91, 50.0};
    const double b2 = 2.24 / 0.91, b1 = 0.5;
    const double omega = 0.5;
    PatchLayout l;
    l.beneficial = StageZone{A, Mat{{-1.0, b2}, {b1, -1.0}}};
    l.control = StageZone{A, Mat{{-40.0, omega * b2}, {omega * b1, -40.0}}};
    l.R = 40.0;
    l.r = 1.0;
    l.K = 1;
    l.bc = Boundary::Periodic;
    return validate_layout(l);
}

} // namespace

const std::vector<Preset>& presets()
{
    static const std::vector<Preset> all{
        {"lone-star", "one-stage tick, km and month: a = b = 16.67, lambda = 0.65, R = 14, r = 1, mu = 10",
         scalar(16.67, 0.65, 16.67, 10.0, 14.0, 1.0), 1958.0},
        {"taiga-one-stage", "one-stage tick, km and year: a = b = 50, lambda = 2, R = 14, r = 1, mu = 50",
         scalar(50.0, 2.0, 50.0, 50.0, 14.0, 1.0), std::nullopt},
        {"taiga-two-stage",
         "two-stage tick, km and year: A^-1 M = [[-0.91, 2.24], [0.01, -0.02]], control births x0.5, "
         "deaths 40, R = 40, r = 1",
         taiga_two_stage(), std::nullopt},
    };
    return all;
}

const Preset& find_preset(const std::string& name)
{
    for (const auto& p : presets())
        if (p.name == name) return p;
    throw Error(ErrorCode::ParseError, fmt::format("unknown preset '{}'", name));
}

} // namespace patchy
