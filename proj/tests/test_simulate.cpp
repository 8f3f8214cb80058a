#include <cmath>

#include "doctest.h"
#include "patchy/errors.hpp"
#include "patchy/oracle.hpp"
#include "patchy/presets.hpp"
#include "patchy/scalar_criteria.hpp"
#include "patchy/simulate.hpp"

using namespace patchy;

namespace {

PatchLayout scalar_case(double a, double lambda, double b, double mu, double R, double r, Boundary bc, int K = 1)
{
    return PatchLayout{ScalarZone{a, lambda}, ScalarZone{b, -mu}, R, r, K, bc};
}

SimulationOptions coarse()
{
    SimulationOptions o;
    o.grid.cells_per_unit = 16;
    return o;
}

// Discrete top eigenvalue on the simulation grid, the exact target of the slope.
double grid_eigenvalue(const PatchLayout& l, const SimulationOptions& o)
{
    return discrete_top_eigenvalue(assemble(l, o.grid, o.level));
}

} // namespace

TEST_CASE("clause (iii) layout decays monotonically")
{
    const auto l = scalar_case(16.67, 0.65, 16.67, 1.0, 7.0, 1.0, Boundary::Dirichlet);
    const auto tr = simulate(l, coarse());
    for (std::size_t i = tr.t.size() / 10; i + 1 < tr.t.size(); ++i) CHECK(tr.log_norm[i + 1] < tr.log_norm[i]);
    CHECK(growth_exponent(tr) < 0.0);
}

TEST_CASE("pure KISS exponent")
{
    const auto l = scalar_case(1.0, 5.0, 1.0, 1.0, M_PI, 0.0, Boundary::Dirichlet);
    auto o = coarse();
    o.grid.cells_per_unit = 64;
    const double g = growth_exponent(simulate(l, o));
    CHECK(g == doctest::Approx(4.0).epsilon(1e-2 / 4.0));

    const double rc = critical_patch_dirichlet(1.0, 1.0);
    CHECK(growth_exponent(simulate(scalar_case(1, 1, 1, 1, 1.01 * rc, 0, Boundary::Dirichlet), o)) > 0.0);
    CHECK(growth_exponent(simulate(scalar_case(1, 1, 1, 1, 0.99 * rc, 0, Boundary::Dirichlet), o)) < 0.0);
}

TEST_CASE("no reaction and no flux conserves mass")
{
    auto o = coarse();
    o.T = 5.0;
    o.dt = 0.01;
    const auto tr = simulate(scalar_case(1.0, 0.0, 0.3, 0.0, 2.0, 1.0, Boundary::Neumann), o);
    for (double m : tr.mass) CHECK(std::abs(m - tr.mass.front()) <= 1e-10 * o.T * tr.mass.front());
    const auto per = simulate(scalar_case(1.0, 0.0, 0.3, 0.0, 2.0, 1.0, Boundary::Periodic, 2), o);
    CHECK(std::abs(per.mass.back() - per.mass.front()) <= 1e-10 * o.T * per.mass.front());
}

TEST_CASE("slope matches the discrete top eigenvalue")
{
    for (auto l : {find_preset("lone-star").layout, scalar_case(1, 1, 2, 3, 2, 1, Boundary::Neumann),
                   scalar_case(2, 0.5, 1, 4, 3, 0.5, Boundary::Dirichlet)}) {
        const auto o = coarse();
        const double g = growth_exponent(simulate(l, o));
        CHECK(g == doctest::Approx(grid_eigenvalue(l, o)).epsilon(1e-3).scale(1.0));
    }
}

TEST_CASE("lone-star just above the minimal mortality decays")
{
    auto l = find_preset("lone-star").layout;
    const double mu_star = min_mortality(16.67, 0.65, 14, 16.67, 1, Boundary::Periodic);
    std::get<ScalarZone>(l.control).growth = -1.05 * mu_star;
    auto o = coarse();
    o.grid = GridSpec{};
    CHECK(growth_exponent(simulate(l, o)) < 0.0);
}

TEST_CASE("positivity and dt refinement")
{
    const auto l = scalar_case(1.0, 1.0, 3.0, 20.0, 2.0, 0.5, Boundary::Periodic);
    auto o = coarse();
    const auto fine = simulate(l, o);
    CHECK(fine.min_relative >= -1e-12);
    const double g1 = growth_exponent(fine);
    o.T = fine.T;
    o.dt = fine.dt * 2;
    const double g2 = growth_exponent(simulate(l, o));
    CHECK(std::abs(g1 - g2) <= 1e-3 * std::max(1.0, std::abs(g1)));
}

TEST_CASE("staged layout beyond the critical size grows")
{
    auto l = find_preset("taiga-two-stage").layout;
    l.r = 0.0;
    l.R = 60.0;
    l.bc = Boundary::Dirichlet;
    auto o = coarse();
    o.grid.cells_per_unit = 4;
    const auto tr = simulate(l, o);
    CHECK(growth_exponent(tr) > 0.0);
    CHECK(tr.stage_log_norm.size() == 2);
}

TEST_CASE("periodic initial data stays periodic")
{
    const auto l = scalar_case(1.0, 0.4, 0.5, 3.0, 1.5, 0.7, Boundary::Periodic, 2);
    auto o = coarse();
    const auto d = assemble(l, o.grid, 0);
    const double cell = l.R + l.r;
    Vec y0(d.nodes);
    for (int i = 0; i < d.nodes; ++i) y0[i] = 1.0 + 0.5 * std::cos(2 * M_PI * d.x[i] / cell);
    o.initial = y0;
    o.T = 3.0;
    o.dt = 0.005;
    o.snapshot_times = {3.0};
    const auto tr = simulate(l, o);
    const auto& y = tr.snapshots.back().density;
    const int half = d.nodes / 2;
    double worst = 0.0, top = 0.0;
    for (int i = 0; i < half; ++i) {
        worst = std::max(worst, std::abs(y[i] - y[i + half]));
        top = std::max(top, std::abs(y[i]));
    }
    CHECK(worst <= 1e-9 * top);
}

TEST_CASE("invalid runs")
{
    const auto l = scalar_case(1, 1, 1, 1, 1, 1, Boundary::Periodic);
    auto o = coarse();
    o.T = 1.0;
    o.dt = 0.5;
    CHECK_THROWS_AS(simulate(l, o), Error);
    o = coarse();
    o.initial = Vec(3, 1.0);
    CHECK_THROWS_AS(simulate(l, o), Error);
    const auto d = assemble(l, o.grid, 0);
    o.initial = Vec(d.nodes, 0.0);
    CHECK_THROWS_AS(simulate(l, o), Error);
    o.initial[0] = -1.0;
    CHECK_THROWS_AS(simulate(l, o), Error);
}

TEST_CASE("short horizons are reported as unresolved")
{
    const auto l = scalar_case(1.0, 1.0, 1.0, 50.0, 3.0, 1.0, Boundary::Periodic);
    auto o = coarse();
    const auto d = assemble(l, o.grid, 0);
    Vec spike(d.nodes, 0.0);
    spike[d.nodes / 3] = 1.0;
    o.initial = spike;
    o.T = 0.05;
    o.dt = 0.001;
    try {
        growth_exponent(simulate(l, o));
        FAIL("expected TransientNotResolved");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TransientNotResolved);
    }
}

TEST_CASE("snapshots land at requested times")
{
    auto o = coarse();
    o.T = 2.0;
    o.dt = 0.01;
    o.snapshot_times = {0.5, 1e9, 1.0};
    const auto tr = simulate(scalar_case(1, 1, 1, 1, 1, 1, Boundary::Neumann), o);
    REQUIRE(tr.snapshots.size() == 3);
    CHECK(tr.snapshots[0].t == doctest::Approx(0.5));
    CHECK(tr.snapshots[1].t == doctest::Approx(1.0));
    CHECK(tr.snapshots[2].t == doctest::Approx(2.0));
}
