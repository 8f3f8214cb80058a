#pragma once

#include <vector>

#include "patchy/band_matrix.hpp"
#include "patchy/model.hpp"

namespace patchy {

struct GridSpec {
    double cells_per_unit = 64;
    int min_cells = 16;   // per zone, before refinement
    int levels = 3;       // refinement levels, cells doubled each time
};

// Finite-volume operator in divergence form. Unknowns are stored as slot * stages + stage;
// periodic layouts use a zigzag node order so that the wrap-around stays inside the band.
struct DiscreteOperator {
    int stages = 1;
    int nodes = 0;
    Boundary bc = Boundary::Periodic;
    std::vector<int> node_of_slot;
    Vec x;      // coordinate per physical node
    Vec weight; // control-volume length per physical node
    BandMatrix op;
    double gershgorin = 0.0; // max over rows of L_ii + sum_{j != i} |L_ij|
    bool metzler = true;
    double h_beneficial = 0.0;
    double h_control = 0.0;

    int slot_of(int node) const;
};

DiscreteOperator assemble(const PatchLayout& layout, const GridSpec& grid, int level = 0);

// W^{1/2} L W^{-1/2}; symmetric for scalar layouts.
BandMatrix symmetric_form(const DiscreteOperator& d);

// Rightmost eigenvalue of one discrete operator.
double discrete_top_eigenvalue(const DiscreteOperator& d);

// Richardson value from the two finest levels; error_estimate = |E(h) - E(h/2)|.
SpectralReport top_eigenvalue_fd(const PatchLayout& layout, const GridSpec& grid = {});

// Per-level eigenvalues, coarse to fine.
std::vector<double> level_eigenvalues(const PatchLayout& layout, const GridSpec& grid = {});

// margin = -E; Marginal when |E| <= 10 * error_estimate.
Verdict verdict_fd(const PatchLayout& layout, const GridSpec& grid = {});

} // namespace patchy
