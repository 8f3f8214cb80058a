#pragma once

#include <vector>

#include "patchy/model.hpp"
#include "patchy/oracle.hpp"

namespace patchy {

struct SimulationOptions {
    double T = 0.0;      // 0: 20 / max(|lambda|, 0.1), shortened so |E| T <= 40 (decay) or 200 (growth)
    double dt = 0.0;     // 0: T / 4000, smaller for decaying layouts (see simulate)
    int euler_steps = 8; // implicit Euler start-up steps that damp stiff modes
    Vec snapshot_times;
    Vec initial;         // per unknown in physical order (node-major, stage-minor); empty: Gaussian bump
    GridSpec grid;
    int level = 0;
};

struct Snapshot {
    double t = 0.0;
    Vec density; // node-major, stage-minor
};

struct Trajectory {
    int stages = 1;
    Vec x; // node coordinates
    Vec t;
    Vec log_norm;                   // log of the weighted L2 norm
    Vec mass;                       // sum of w_i y_i over nodes and stages
    std::vector<Vec> stage_log_norm; // [stage][step]
    std::vector<Snapshot> snapshots;
    double min_relative = 0.0;      // min over steps of min_i y_i / max_i |y_i|
    double dt = 0.0;
    double T = 0.0;
};

Vec default_initial_profile(const PatchLayout& layout, const DiscreteOperator& d);

// Crank-Nicolson after a short implicit Euler start, on the assembled operator.
Trajectory simulate(const PatchLayout& layout, const SimulationOptions& opt = {});

struct AffineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
};

// Least squares on the second half of the horizon.
AffineFit fit_second_half(const Trajectory& tr);

// Throws TransientNotResolved when the fit residual exceeds tol.
double growth_exponent(const Trajectory& tr, double tol = 1e-3);

} // namespace patchy
