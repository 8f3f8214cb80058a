#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "patchy/cli.hpp"

namespace fs = std::filesystem;
using patchy::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> split_lines(const std::string& s)
{
    std::vector<std::string> lines;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::vector<std::string> fields(const std::string& line)
{
    std::vector<std::string> f;
    std::istringstream in(line);
    for (std::string x; std::getline(in, x, ',');) f.push_back(x);
    return f;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("patchy_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

} // namespace

TEST_CASE("critical-size")
{
    auto r = call({"--preset", "lone-star", "critical-size"});
    CHECK(r.code == 0);
    CHECK(r.out.find("R_c = 15.91") != std::string::npos);

    r = call({"critical-size", "--preset", "taiga-two-stage"});
    CHECK(r.code == 0);
    CHECK(r.out.find("R_c = 46.86") != std::string::npos);
    CHECK(r.out.find("R_c_sym = 3.64") != std::string::npos);

    r = call({"--preset", "lone-star", "--lambda", "-0.5", "critical-size"});
    CHECK(r.code == 2);
    CHECK(r.err.find("NonpositiveGrowth") != std::string::npos);
}

TEST_CASE("verdict")
{
    auto r = call({"--preset", "lone-star", "verdict"});
    CHECK(r.code == 0);
    CHECK(r.out.find("closed: Survival") != std::string::npos);
    CHECK(r.out.find("oracle: Survival") != std::string::npos);
    CHECK(r.out.find("agreement: yes") != std::string::npos);

    r = call({"--preset", "lone-star", "--R", "40", "verdict", "--method", "closed"});
    CHECK(r.code == 0);
    CHECK(r.out.find("closed: Survival") != std::string::npos);
    CHECK(r.out.find("oracle") == std::string::npos);

    r = call({"--preset", "taiga-two-stage", "verdict"});
    CHECK(r.code == 0);
    CHECK(r.out.find("closed: Eradication") != std::string::npos);
    CHECK(r.out.find("(certified)") != std::string::npos);
    CHECK(r.out.find("oracle: Eradication") != std::string::npos);

    CHECK(call({"--preset", "lone-star", "--a", "0", "verdict"}).code == 2);
    CHECK(call({"--preset", "lone-star", "verdict", "--method", "guess"}).code == 2);
    CHECK(call({"verdict"}).code == 2);
    CHECK(call({"--preset", "nope", "verdict"}).code == 2);
    CHECK(call({"--preset", "taiga-two-stage", "--mu", "3", "verdict"}).code == 2);
}

TEST_CASE("scenario files and overrides")
{
    const auto dir = scratch("scenario");
    fs::create_directories(dir);
    std::ofstream(dir / "s.json") << R"({"model": "scalar", "beneficial": {"diffusion": 1, "growth": 0.2},
        "control": {"diffusion": 1, "growth": -2}, "R": 1, "r": 1, "K": 1, "bc": "neumann"})";
    auto r = call({"--scenario", (dir / "s.json").string(), "verdict"});
    CHECK(r.code == 0);
    CHECK(r.out.find("closed: Eradication") != std::string::npos);
    r = call({"--scenario", (dir / "s.json").string(), "--mu", "0", "verdict", "--method", "closed"});
    CHECK(r.out.find("closed: Survival") != std::string::npos);
    std::ofstream(dir / "bad.json") << R"({"model": "scalar", "oops": 1})";
    CHECK(call({"--scenario", (dir / "bad.json").string(), "verdict"}).code == 2);
}

TEST_CASE("min-mortality and min-zone")
{
    auto r = call({"--preset", "lone-star", "min-mortality"});
    CHECK(r.code == 0);
    CHECK(r.out.find("mu* (closed form) = 41.36") != std::string::npos);
    CHECK(r.out.find("mu* (oracle)") != std::string::npos);
    CHECK(r.out.find("1958") != std::string::npos);

    CHECK(call({"--preset", "lone-star", "--R", "16", "min-mortality"}).code == 4);
    r = call({"--preset", "lone-star", "--bc", "dirichlet", "--R", "7", "min-mortality"});
    CHECK(r.code == 0);
    CHECK(r.out.find("mu* (closed form) = 0\n") != std::string::npos);

    r = call({"--preset", "lone-star", "--mu", "100", "min-zone"});
    CHECK(r.code == 0);
    CHECK(r.out.find("r* (closed form)") != std::string::npos);
    CHECK(call({"--preset", "lone-star", "--mu", "1", "min-zone"}).code == 4);
    CHECK(call({"--preset", "taiga-two-stage", "min-zone"}).code == 2);
}

TEST_CASE("spectrum")
{
    auto r = call({"--preset", "lone-star", "spectrum"});
    CHECK(r.code == 0);
    CHECK(r.out.find("DispersionRoot: E = 0.2502") != std::string::npos);
    CHECK(r.out.find("FiniteDifference: E = 0.2502") != std::string::npos);
}

TEST_CASE("sweep")
{
    auto r = call({"--preset", "lone-star", "sweep", "--vary", "mu", "--from", "1", "--to", "100", "--steps", "12"});
    CHECK(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 13);
    CHECK(lines[0] == "param,value,margin,top_eigenvalue,status");
    double prev = 1e300;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = fields(lines[i]);
        REQUIRE(f.size() == 5);
        const double e = std::stod(f[3]);
        CHECK(e <= prev);
        prev = e;
    }

    r = call({"--preset", "lone-star", "sweep", "--vary", "R", "--from", "2", "--to", "30", "--steps", "15"});
    int flips = 0;
    std::string last;
    for (const auto& line : split_lines(r.out)) {
        const auto f = fields(line);
        if (f[0] == "param") continue;
        if (!last.empty() && f[4] != last) ++flips;
        last = f[4];
    }
    CHECK(flips == 1);

    r = call({"--preset", "lone-star", "sweep", "--vary", "mu", "--from", "5", "--to", "9", "--steps", "1"});
    CHECK(split_lines(r.out).size() == 2);
    CHECK(call({"--preset", "lone-star", "sweep", "--vary", "colour", "--from", "1", "--to", "2"}).code == 2);
    CHECK(call({"--preset", "taiga-two-stage", "sweep", "--vary", "mu", "--from", "1", "--to", "2"}).code == 2);

    const auto dir = scratch("sweep");
    const std::vector<std::string> args{"--preset", "lone-star", "--out", dir.string(), "sweep", "--vary", "r",
                                        "--from", "0.5", "--to", "3", "--steps", "4"};
    const auto first = call(args);
    const std::string a = slurp(dir / "sweep.csv");
    call(args);
    CHECK(a == slurp(dir / "sweep.csv"));
    CHECK(a == first.out);
}

TEST_CASE("simulate writes trajectories and snapshots")
{
    const auto dir = scratch("sim");
    auto r = call({"--preset", "lone-star", "--mu", "50", "--grid-cells", "16", "--out", dir.string(), "simulate",
                   "--snapshots", "1,2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("growth exponent = -") != std::string::npos);
    const auto traj = split_lines(slurp(dir / "trajectory.csv"));
    CHECK(traj[0] == "t,log_l2_norm,total_mass");
    CHECK(traj.size() == 4002);
    CHECK(split_lines(slurp(dir / "snapshot_0.csv"))[0] == "x,stage_index,density");
    CHECK(fs::exists(dir / "snapshot_1.csv"));

    const std::string before = slurp(dir / "trajectory.csv");
    call({"--preset", "lone-star", "--mu", "50", "--grid-cells", "16", "--out", dir.string(), "simulate",
          "--snapshots", "1,2"});
    CHECK(before == slurp(dir / "trajectory.csv"));

    const auto cons = scratch("cons");
    r = call({"--preset", "lone-star", "--lambda", "0", "--mu", "0", "--bc", "neumann", "--grid-cells", "8", "--out",
              cons.string(), "simulate", "--T", "4", "--dt", "0.01"});
    const auto rows = split_lines(slurp(cons / "trajectory.csv"));
    const double m0 = std::stod(fields(rows[1])[2]);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(fields(rows[i])[2]) == doctest::Approx(m0).epsilon(1e-6));

    const auto staged = scratch("staged");
    r = call({"--preset", "taiga-two-stage", "--r", "0", "--R", "60", "--bc", "dirichlet", "--grid-cells", "4",
              "--out", staged.string(), "simulate"});
    CHECK(r.code == 0);
    CHECK(r.out.find("growth exponent = 0.0") != std::string::npos);
    CHECK(split_lines(slurp(staged / "trajectory.csv"))[0] ==
          "t,log_l2_norm,total_mass,log_l2_norm_stage0,log_l2_norm_stage1");

    r = call({"--preset", "lone-star", "--mu", "2000", "--out", scratch("short").string(), "simulate", "--T", "0.5",
              "--dt", "0.005"});
    CHECK(r.code == 5);
}

TEST_CASE("preset list and help")
{
    auto r = call({"preset", "list"});
    CHECK(r.code == 0);
    CHECK(r.out.find("lone-star") != std::string::npos);
    CHECK(r.out.find("taiga-one-stage") != std::string::npos);
    CHECK(r.out.find("taiga-two-stage") != std::string::npos);
    CHECK(call({"--help"}).code == 0);
    CHECK(call({}).code == 2);
}
