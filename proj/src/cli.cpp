#include "patchy/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <functional>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "patchy/errors.hpp"
#include "patchy/oracle.hpp"
#include "patchy/presets.hpp"
#include "patchy/scalar_criteria.hpp"
#include "patchy/scenario.hpp"
#include "patchy/simulate.hpp"
#include "patchy/stage_criteria.hpp"

namespace patchy::cli {

namespace {

struct Options {
    std::string scenario;
    std::string preset;
    std::string out;
    double grid_cells = 64;
    int seed = 0;

    double R = 0, r = 0, a = 0, lambda = 0, b = 0, mu = 0;
    int K = 1;
    std::string bc;
    std::vector<std::pair<std::string, CLI::Option*>> overrides;

    std::string method = "both";
    double dt = 0, T = 0;
    std::vector<double> snapshots;
    std::string vary;
    double from = 0, to = 0;
    int steps = 1;
};

struct Failed {
    int code;
};

class Runner {
public:
    Runner(Options& o, std::ostream& out) : o_(o), out_(out) {}

    PatchLayout layout() const
    {
        PatchLayout l;
        if (!o_.scenario.empty())
            l = load_scenario(o_.scenario);
        else if (!o_.preset.empty())
            l = find_preset(o_.preset).layout;
        else
            throw Error(ErrorCode::ParseError, "give --scenario <file> or --preset <name>");
        for (const auto& [key, opt] : o_.overrides) {
            if (opt->count() == 0) continue;
            if (key == "R") l.R = o_.R;
            else if (key == "r") l.r = o_.r;
            else if (key == "K") l.K = o_.K;
            else if (key == "bc") l.bc = boundary_from_string(o_.bc);
            else {
                auto* ben = std::get_if<ScalarZone>(&l.beneficial);
                auto* nb = std::get_if<ScalarZone>(&l.control);
                if (!ben) throw Error(ErrorCode::ParseError, fmt::format("--{} applies to scalar scenarios only", key));
                if (key == "a") ben->diffusion = o_.a;
                if (key == "lambda") ben->growth = o_.lambda;
                if (key == "b") nb->diffusion = o_.b;
                if (key == "mu") nb->growth = -o_.mu;
            }
        }
        return validate_layout(l);
    }

    GridSpec grid() const
    {
        GridSpec g;
        g.cells_per_unit = o_.grid_cells;
        return g;
    }

    int critical_size()
    {
        const auto l = layout();
        if (is_scalar(l)) {
            const auto in = scalar_input(l);
            out_ << fmt::format("R_c = {:.4g}\n", critical_patch_dirichlet(in.a, in.lambda));
            return Ok;
        }
        const auto in = staged_input(l);
        const double rc = critical_patch_staged(in.A_ben, in.M_ben);
        out_ << fmt::format("sqrt(Lambda1) = {:.4g}\n", M_PI / rc);
        out_ << fmt::format("R_c = {:.4g}\n", rc);
        try {
            const double rs = critical_patch_symmetrized(in.A_ben, in.M_ben);
            out_ << fmt::format("sqrt(lambda1_sym) = {:.4g}\n", M_PI / rs);
            out_ << fmt::format("R_c_sym = {:.4g}\n", rs);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NonpositiveLeadEigenvalue) throw;
            out_ << "R_c_sym = none (symmetric part has no positive eigenvalue)\n";
        }
        return Ok;
    }

    Verdict closed_verdict(const PatchLayout& l) const
    {
        return is_scalar(l) ? scalar_verdict(scalar_input(l)) : staged_verdict(staged_input(l));
    }

    int verdict()
    {
        const auto l = layout();
        const bool closed = o_.method != "oracle", oracle = o_.method != "closed";
        Verdict c, f;
        if (closed) {
            c = closed_verdict(l);
            out_ << fmt::format("closed: {}  margin={:.4g}  rule={}", to_string(c.status), c.margin, c.rule);
            if (!c.note.empty()) out_ << "  (" << c.note << ")";
            out_ << "\n";
        }
        if (oracle) {
            f = verdict_fd(l, grid());
            out_ << fmt::format("oracle: {}  margin={:.4g}  {}\n", to_string(f.status), f.margin, f.note);
        }
        if (closed && oracle) {
            const bool decided_c = c.status == Status::Eradication || c.status == Status::Survival;
            const bool decided_f = f.status == Status::Eradication || f.status == Status::Survival;
            if (c.status == Status::Inconclusive && f.status == Status::Survival) {
                out_ << "agreement: consistent (one-sided criteria inconclusive)\n";
            } else if (decided_c && decided_f && c.status != f.status) {
                out_ << "agreement: NO\n";
                return Disagreement;
            } else {
                out_ << "agreement: yes\n";
            }
        }
        return Ok;
    }

    ScalarInput scalar_only(const char* cmd) const
    {
        const auto l = layout();
        if (!is_scalar(l)) throw Error(ErrorCode::ParseError, fmt::format("{} needs a scalar scenario", cmd));
        return scalar_input(l);
    }

    int min_mortality_cmd()
    {
        const auto in = scalar_only("min-mortality");
        const double closed = min_mortality(in.a, in.lambda, in.R, in.b, in.r, in.bc, in.K);
        const double fd = min_mortality_fd(in, closed, grid());
        report("mu*", closed, fd);
        if (!o_.preset.empty()) {
            if (auto ref = find_preset(o_.preset).reference_min_mortality)
                out_ << fmt::format("note: quoted reference value {:.4g} is {} by either method\n", *ref,
                                    std::abs(*ref - closed) <= 0.05 * closed ? "matched" : "not reproduced");
        }
        return Ok;
    }

    int min_zone_cmd()
    {
        const auto in = scalar_only("min-zone");
        const double closed = min_zone_width(in.a, in.lambda, in.R, in.b, in.mu, in.bc, in.K);
        const double fd = min_zone_width_fd(in, closed, grid());
        report("r*", closed, fd);
        return Ok;
    }

    void report(const char* name, double closed, double fd)
    {
        out_ << fmt::format("{} (closed form) = {:.4g}\n", name, closed);
        out_ << fmt::format("{} (oracle)      = {:.4g}\n", name, fd);
        const double rel = closed != 0.0 ? std::abs(fd - closed) / closed : std::abs(fd);
        out_ << fmt::format("relative difference = {:.4g}\n", rel);
    }

    int spectrum()
    {
        const auto l = layout();
        if (is_scalar(l)) {
            const auto rep = top_eigenvalue_scalar(scalar_input(l), grid());
            out_ << fmt::format("{}: E = {:.6g} (+/- {:.2g}, {})\n", to_string(rep.method), rep.top_eigenvalue,
                                rep.error_estimate, rep.resolution);
        }
        const auto g = grid();
        const auto levels = level_eigenvalues(l, g);
        const auto rep = top_eigenvalue_fd(l, g);
        out_ << fmt::format("FiniteDifference: E = {:.6g} (+/- {:.2g}, {})\n", rep.top_eigenvalue, rep.error_estimate,
                            rep.resolution);
        for (std::size_t i = 0; i < levels.size(); ++i) out_ << fmt::format("  level {}: {:.8g}\n", i, levels[i]);
        return Ok;
    }

    std::filesystem::path out_dir() const
    {
        std::filesystem::path dir = o_.out.empty() ? "." : o_.out;
        std::filesystem::create_directories(dir);
        return dir;
    }

    int simulate_cmd()
    {
        const auto l = layout();
        SimulationOptions opt;
        opt.T = o_.T;
        opt.dt = o_.dt;
        opt.snapshot_times = o_.snapshots;
        opt.grid = grid();
        if (opt.snapshot_times.empty()) opt.snapshot_times.push_back(1e300);
        const auto tr = simulate(l, opt);
        const auto dir = out_dir();

        std::ofstream traj(dir / "trajectory.csv");
        traj << "t,log_l2_norm,total_mass";
        if (tr.stages > 1)
            for (int s = 0; s < tr.stages; ++s) traj << ",log_l2_norm_stage" << s;
        traj << "\n";
        for (std::size_t i = 0; i < tr.t.size(); ++i) {
            traj << fmt::format("{:.6g},{:.6g},{:.6g}", tr.t[i], tr.log_norm[i], tr.mass[i]);
            if (tr.stages > 1)
                for (int s = 0; s < tr.stages; ++s) traj << fmt::format(",{:.6g}", tr.stage_log_norm[s][i]);
            traj << "\n";
        }

        const auto& snaps = tr.snapshots;
        for (std::size_t k = 0; k < snaps.size(); ++k) {
            std::ofstream f(dir / fmt::format("snapshot_{}.csv", k));
            f << "x,stage_index,density\n";
            for (std::size_t i = 0; i < tr.x.size(); ++i)
                for (int s = 0; s < tr.stages; ++s)
                    f << fmt::format("{:.6g},{},{:.6g}\n", tr.x[i], s, snaps[k].density[i * tr.stages + s]);
            out_ << fmt::format("snapshot_{}.csv: t = {:.4g}\n", k, snaps[k].t);
        }
        out_ << fmt::format("T = {:.4g}, dt = {:.4g}, steps = {}\n", tr.T, tr.dt, tr.t.size() - 1);
        out_ << fmt::format("min relative density = {:.3g}\n", tr.min_relative);
        out_ << fmt::format("total mass: {:.4g} -> {:.4g}\n", tr.mass.front(), tr.mass.back());
        const double g = growth_exponent(tr);
        out_ << fmt::format("growth exponent = {:.4g}\n", g);
        return Ok;
    }

    int sweep()
    {
        const auto base = layout();
        static const std::vector<std::string> scalar_params{"R", "r", "K", "a", "lambda", "b", "mu"};
        static const std::vector<std::string> staged_params{"R", "r", "K"};
        const auto& allowed = is_scalar(base) ? scalar_params : staged_params;
        if (std::find(allowed.begin(), allowed.end(), o_.vary) == allowed.end())
            throw Error(ErrorCode::ParseError, fmt::format("cannot vary '{}'", o_.vary));
        if (o_.steps < 1) throw Error(ErrorCode::ParseError, "--steps must be at least 1");

        std::string csv = "param,value,margin,top_eigenvalue,status\n";
        for (int i = 0; i < o_.steps; ++i) {
            const double v = o_.steps == 1 ? o_.from : o_.from + (o_.to - o_.from) * i / (o_.steps - 1);
            PatchLayout l = base;
            if (o_.vary == "R") l.R = v;
            else if (o_.vary == "r") l.r = v;
            else if (o_.vary == "K") l.K = static_cast<int>(std::lround(v));
            else {
                auto& ben = std::get<ScalarZone>(l.beneficial);
                auto& nb = std::get<ScalarZone>(l.control);
                if (o_.vary == "a") ben.diffusion = v;
                if (o_.vary == "lambda") ben.growth = v;
                if (o_.vary == "b") nb.diffusion = v;
                if (o_.vary == "mu") nb.growth = -v;
            }
            l = validate_layout(l);
            const Verdict c = closed_verdict(l);
            const double e = is_scalar(l) ? top_eigenvalue_scalar(scalar_input(l), grid()).top_eigenvalue
                                          : top_eigenvalue_fd(l, grid()).top_eigenvalue;
            csv += fmt::format("{},{:.6g},{:.6g},{:.6g},{}\n", o_.vary, v, c.margin, e, to_string(c.status));
        }
        out_ << csv;
        if (!o_.out.empty()) std::ofstream(out_dir() / "sweep.csv") << csv;
        return Ok;
    }

    int preset_list()
    {
        for (const auto& p : presets()) out_ << fmt::format("{:<16} {}\n", p.name, p.description);
        return Ok;
    }

private:
    Options& o_;
    std::ostream& out_;
};

int exit_code_for(ErrorCode code)
{
    if (code == ErrorCode::Uncontrollable || code == ErrorCode::InsufficientMortality) return NotControllable;
    if (code == ErrorCode::TransientNotResolved) return TransientUnresolved;
    if (is_validation_error(code)) return Validation;
    return Failure;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Eradication criteria and spectral checks for patchy diffusion models", "patchy"};
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--scenario", o.scenario, "scenario JSON file");
    app.add_option("--preset", o.preset, "built-in scenario (see 'preset list')");
    app.add_option("--out", o.out, "output directory");
    app.add_option("--grid-cells", o.grid_cells, "oracle cells per unit length")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "seed for randomized harnesses");
    o.overrides = {
        {"R", app.add_option("--R", o.R, "beneficial zone width")},
        {"r", app.add_option("--r", o.r, "control zone width")},
        {"K", app.add_option("--K", o.K, "number of periodic repetitions")},
        {"bc", app.add_option("--bc", o.bc, "dirichlet | neumann | periodic")},
        {"a", app.add_option("--a", o.a, "beneficial diffusion (scalar)")},
        {"lambda", app.add_option("--lambda", o.lambda, "beneficial growth (scalar)")},
        {"b", app.add_option("--b", o.b, "control diffusion (scalar)")},
        {"mu", app.add_option("--mu", o.mu, "control mortality (scalar)")},
    };

    Runner runner(o, out);
    std::function<int()> action;

    auto* cs = app.add_subcommand("critical-size", "critical patch size(s)");
    cs->callback([&] { action = [&] { return runner.critical_size(); }; });

    auto* vd = app.add_subcommand("verdict", "closed-form and oracle verdicts");
    vd->add_option("--method", o.method, "closed | oracle | both")
        ->check(CLI::IsMember({"closed", "oracle", "both"}));
    vd->callback([&] { action = [&] { return runner.verdict(); }; });

    auto* mm = app.add_subcommand("min-mortality", "smallest eradicating control mortality");
    mm->callback([&] { action = [&] { return runner.min_mortality_cmd(); }; });

    auto* mz = app.add_subcommand("min-zone", "smallest eradicating control zone width");
    mz->callback([&] { action = [&] { return runner.min_zone_cmd(); }; });

    auto* sp = app.add_subcommand("spectrum", "top eigenvalue by every available method");
    sp->callback([&] { action = [&] { return runner.spectrum(); }; });

    auto* sim = app.add_subcommand("simulate", "time integration and growth exponent");
    sim->add_option("--dt", o.dt, "time step");
    sim->add_option("--T", o.T, "horizon");
    sim->add_option("--snapshots", o.snapshots, "snapshot times")->delimiter(',');
    sim->callback([&] { action = [&] { return runner.simulate_cmd(); }; });

    auto* sw = app.add_subcommand("sweep", "one-parameter sweep as CSV");
    sw->add_option("--vary", o.vary, "parameter name")->required();
    sw->add_option("--from", o.from)->required();
    sw->add_option("--to", o.to)->required();
    sw->add_option("--steps", o.steps);
    sw->callback([&] { action = [&] { return runner.sweep(); }; });

    auto* pr = app.add_subcommand("preset", "built-in scenarios");
    pr->require_subcommand(1);
    auto* pl = pr->add_subcommand("list", "list presets");
    pl->callback([&] { action = [&] { return runner.preset_list(); }; });

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return Validation;
    }

    try {
        return action ? action() : Validation;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return Failure;
    }
}

} // namespace patchy::cli
