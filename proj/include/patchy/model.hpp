#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include "patchy/linalg.hpp"

namespace patchy {

inline constexpr double kMarginalTol = 1e-9;
inline constexpr std::size_t kMaxStages = 8;

enum class Boundary { Dirichlet, Neumann, Periodic };

const char* to_string(Boundary bc);
Boundary boundary_from_string(const std::string& s);

// Control zones carry a negative growth, i.e. growth = -mu.
struct ScalarZone {
    double diffusion = 1.0;
    double growth = 0.0;
    friend bool operator==(const ScalarZone&, const ScalarZone&) = default;
};

struct StageZone {
    Vec diffusion; // diagonal of A
    Mat reaction;  // M
    friend bool operator==(const StageZone&, const StageZone&) = default;
};

struct BirthDeathParams {
    Vec deaths;
    Vec births;
};

using Zone = std::variant<ScalarZone, StageZone>;

struct PatchLayout {
    Zone beneficial;
    Zone control;
    double R = 1.0;
    double r = 0.0;
    int K = 1;
    Boundary bc = Boundary::Periodic;
    friend bool operator==(const PatchLayout&, const PatchLayout&) = default;
};

std::size_t stage_count(const Zone& z);
bool is_scalar(const PatchLayout& layout);

// Length of the simulated interval.
double domain_length(const PatchLayout& layout);

// Returns the layout unchanged or throws Error naming the violated invariant.
PatchLayout validate_layout(const PatchLayout& layout);

// Cyclic stage matrix: M_jj = -m_j, M_{j+1,j} = b_j, M_{1n} = b_n; the 1x1 case is [b_1 - m_1].
Mat build_stage_matrix(const BirthDeathParams& params);

enum class Status { Eradication, Survival, Marginal, Inconclusive };

const char* to_string(Status s);

struct Verdict {
    Status status = Status::Inconclusive;
    double margin = 0.0;
    std::string rule;
    std::string note;
};

// Eradication / Survival / Marginal from a signed margin.
Status classify(double margin, double tol = kMarginalTol);
Verdict make_verdict(double margin, std::string rule, double tol = kMarginalTol);

enum class Method { DispersionRoot, FiniteDifference, SimulationSlope };

const char* to_string(Method m);

struct SpectralReport {
    double top_eigenvalue = 0.0;
    Method method = Method::FiniteDifference;
    double error_estimate = 0.0;
    std::string resolution;
};

} // namespace patchy
