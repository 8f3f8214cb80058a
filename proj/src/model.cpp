#include "patchy/model.hpp"

#include <cmath>

#include <fmt/core.h>

#include "patchy/errors.hpp"

namespace patchy {

const char* to_string(Boundary bc)
{
    switch (bc) {
    case Boundary::Dirichlet: return "dirichlet";
    case Boundary::Neumann: return "neumann";
    case Boundary::Periodic: return "periodic";
    }
    return "?";
}

Boundary boundary_from_string(const std::string& s)
{
    if (s == "dirichlet") return Boundary::Dirichlet;
    if (s == "neumann") return Boundary::Neumann;
    if (s == "periodic") return Boundary::Periodic;
    throw Error(ErrorCode::ParseError, fmt::format("unknown boundary condition '{}'", s));
}

const char* to_string(Status s)
{
    switch (s) {
    case Status::Eradication: return "Eradication";
    case Status::Survival: return "Survival";
    case Status::Marginal: return "Marginal";
    case Status::Inconclusive: return "Inconclusive";
    }
    return "?";
}

const char* to_string(Method m)
{
    switch (m) {
    case Method::DispersionRoot: return "DispersionRoot";
    case Method::FiniteDifference: return "FiniteDifference";
    case Method::SimulationSlope: return "SimulationSlope";
    }
    return "?";
}

std::size_t stage_count(const Zone& z)
{
    if (const auto* s = std::get_if<StageZone>(&z)) return s->diffusion.size();
    return 1;
}

bool is_scalar(const PatchLayout& layout) { return std::holds_alternative<ScalarZone>(layout.beneficial); }

double domain_length(const PatchLayout& layout)
{
    const double cell = layout.R + layout.r;
    return layout.bc == Boundary::Periodic ? layout.K * cell : cell;
}

namespace {

void check_finite(double x, const char* what)
{
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidParameter, fmt::format("{} is not finite", what));
}

void check_zone(const Zone& z, const char* name)
{
    if (const auto* s = std::get_if<ScalarZone>(&z)) {
        check_finite(s->growth, "growth");
        if (!(s->diffusion > 0.0) || !std::isfinite(s->diffusion))
            throw Error(ErrorCode::NonpositiveDiffusion, fmt::format("{} diffusion must be positive", name));
        return;
    }
    const auto& st = std::get<StageZone>(z);
    const std::size_t n = st.diffusion.size();
    if (n == 0) throw Error(ErrorCode::DimensionMismatch, fmt::format("{} zone has no stages", name));
    if (n > kMaxStages)
        throw Error(ErrorCode::TooManyStages, fmt::format("{} zone has {} stages, limit {}", name, n, kMaxStages));
    if (st.reaction.rows() != n || st.reaction.cols() != n)
        throw Error(ErrorCode::DimensionMismatch,
                    fmt::format("{} reaction matrix is {}x{}, diffusion has {} stages", name, st.reaction.rows(),
                                st.reaction.cols(), n));
    for (double a : st.diffusion)
        if (!(a > 0.0) || !std::isfinite(a))
            throw Error(ErrorCode::NonpositiveDiffusion, fmt::format("{} diffusion entries must be positive", name));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) check_finite(st.reaction(i, j), "reaction entry");
}

} // namespace

PatchLayout validate_layout(const PatchLayout& layout)
{
    if (layout.beneficial.index() != layout.control.index())
        throw Error(ErrorCode::DimensionMismatch, "beneficial and control zones differ in kind");
    check_zone(layout.beneficial, "beneficial");
    check_zone(layout.control, "control");
    if (stage_count(layout.beneficial) != stage_count(layout.control))
        throw Error(ErrorCode::DimensionMismatch,
                    fmt::format("beneficial has {} stages, control has {}", stage_count(layout.beneficial),
                                stage_count(layout.control)));
    check_finite(layout.R, "R");
    check_finite(layout.r, "r");
    if (!(layout.R > 0.0)) throw Error(ErrorCode::NonpositiveWidth, "R must be positive");
    if (layout.r < 0.0) throw Error(ErrorCode::NegativeWidth, "r must be nonnegative");
    if (layout.K < 1) throw Error(ErrorCode::InvalidRepetition, "K must be at least 1");
    if (layout.bc != Boundary::Periodic && layout.K != 1)
        throw Error(ErrorCode::InvalidRepetition, "K must be 1 for dirichlet and neumann layouts");
    return layout;
}

Mat build_stage_matrix(const BirthDeathParams& params)
{
    const std::size_t n = params.deaths.size();
    if (n == 0 || params.births.size() != n)
        throw Error(ErrorCode::DimensionMismatch, "births and deaths must have the same nonzero length");
    for (std::size_t j = 0; j < n; ++j)
        if (!(params.deaths[j] > 0.0) || !(params.births[j] > 0.0))
            throw Error(ErrorCode::InvalidParameter, "birth and death rates must be positive");
    if (n == 1) return Mat{{params.births[0] - params.deaths[0]}};
    Mat m(n, n);
    for (std::size_t j = 0; j < n; ++j) m(j, j) = -params.deaths[j];
    for (std::size_t j = 0; j + 1 < n; ++j) m(j + 1, j) = params.births[j];
    m(0, n - 1) = params.births[n - 1];
    return m;
}

Status classify(double margin, double tol)
{
    if (std::abs(margin) <= tol) return Status::Marginal;
    return margin > 0.0 ? Status::Eradication : Status::Survival;
}

Verdict make_verdict(double margin, std::string rule, double tol)
{
    return Verdict{classify(margin, tol), margin, std::move(rule), {}};
}

} // namespace patchy
